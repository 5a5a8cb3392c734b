// Solution of the boundary value problem for the transforms A and B.
//
// The kernel-curve identity u A + v B = 0 holds with the principal
// branches exactly for the pairings (p(s), q(s)) with arg s in
// (pi, pi + beta) on the uniformized curve. Letting arg s -> pi from that
// wedge parametrizes the analyticity cut (-inf, p1] of A twice (|s| < 1
// gives the limit from Im p > 0, |s| > 1 its conjugate), which turns the
// identity into a scalar multiplicative jump for A across its own cut:
//
//   A+(x)/A-(x) = exp(i Theta_A(x)),
//   Theta_A = 2 [ arg v(x, eta) - arg u(x, eta) + arg B(eta) ],
//
// with eta(x) = q(s) the paired second-plane point (it sweeps a branch of
// the hyperbola H_q). The symmetric statement holds for B with the roles
// swapped. Each transform is recovered from its jump by a Cauchy
// integral with the mass normalization at 0 and the pole p0 carried by a
// rational prefactor,
//
//   A(p) = A(0) (-p0)/(p - p0) exp[(1/2pi) int Theta_A(t)(1/(t-p) - 1/t) dt],
//
// and the two sides are coupled through the arg B / arg A data, solved by
// fixed-point iteration (the phase coupling is a contraction at desk
// scale). The index chi and the BVP hyperbola of the scalar-reduction
// picture are exposed as diagnostics of the same geometry.
#pragma once

#include <optional>
#include <vector>

#include "rbm/curve.hpp"
#include "rbm/gluing.hpp"
#include "rbm/model.hpp"

namespace rbm {

enum class DomainTag { Interior, Boundary, Continued };

struct TransformValue {
    Complex value;
    DomainTag domain_tag;
    double estimated_error;  // absolute, quadrature + coupling residual
};

enum class BvpErrorCode {
    DomainViolation,  // p on the analyticity cut
    NearPole,         // p within the guard radius of the pole p0
    PoleOfG,          // v(p, Q2(p)) vanishes at an evaluation point
    KernelZero,       // eval_L at a kernel zero away from the origin
    ContourTooShort,  // coupling iteration failed to converge
    BranchJump,       // phase data jumped by > pi between nodes
};

class BvpError : public std::runtime_error {
  public:
    BvpError(BvpErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    BvpErrorCode code() const { return code_; }

  private:
    BvpErrorCode code_;
};

/// p0 = 2(mu2 r1 - mu1)/(sigma1 + sigma2 r1^2 - 2 rho r1); negative in
/// three-quarter mode, positive in quarter mode for validated parameters.
double pole_p0(const ModelParams& m);

/// Index of the scalar-reduction BVP: three-quarter mode looks at the sign
/// of u at the branch point q2 (chi = 0 iff u(P(q2), q2) >= 0), quarter
/// mode at q1 with the reversed convention. chi = -1 signals that the pole
/// p0 falls inside the BVP domain bounded by the hyperbola.
int index_chi(const ModelParams& m);

/// g(p) = u(p, Q2(p)) / v(p, Q2(p)). Throws PoleOfG on a vanishing v.
Complex g_func(const ModelParams& m, Complex p);

class Transforms;

/// One side (one transform) of the coupled system.
class BvpSolution {
  public:
    struct Options {
        double tol = 1e-10;          // phase-iteration convergence target
        int panels = 96;             // cut panels in the rho-hat variable
        double grading = 0.8;        // grading exponent toward the cut end
        int max_iterations = 80;
        int contour_samples = 600;   // diagnostic hyperbola sampling
    };

    explicit BvpSolution(const ModelParams& m) : BvpSolution(m, Options()) {}
    BvpSolution(const ModelParams& m, Options opt);

    const ModelParams& params() const { return m_; }
    const BranchPoints& bp() const { return bp_; }
    const Gluing& gluing() const { return glue_; }
    const HyperbolaBranch& contour() const { return hyp_; }
    int chi() const { return chi_; }
    double p0() const { return p0_; }
    double prefactor() const { return mass_; }
    double coupling_residual() const { return coupling_residual_; }

    /// Diagnostic samples of the continuous branch of log(g(t)/g(conj t))
    /// along the BVP hyperbola (purely imaginary; imaginary parts stored).
    const std::vector<double>& log_ratio_samples() const { return hyp_lam_; }
    /// Cauchy-integral weights on the cut nodes.
    const std::vector<double>& quadrature_weights() const { return node_wt_; }

    TransformValue eval(Complex p) const;

  private:
    friend class Transforms;

    // cut parametrization by rho-hat in (0, 1]: x = mid - half (r + 1/r)/2
    double cut_x(double r) const;
    Complex cut_eta(double r) const;  // paired point on the other plane

    void build_nodes();
    void build_hyperbola_diagnostics();
    void seed_phase();                       // arg B ~ rational-factor start
    double update_phase(const BvpSolution& other);  // returns max delta

    Complex cauchy_exp(Complex p, double* err) const;      // E(p)
    Complex cauchy_exp_pv(double x, double* err) const;    // on-cut PV
    double theta_at(double x) const;                       // interp Theta

    TransformValue eval_inner(Complex p) const;

    ModelParams m_;
    Options opt_;
    BranchPoints bp_;
    Gluing glue_;
    int chi_;
    double p0_;
    double mass_;       // A(0) of this side
    double cut_end_;    // p1 of this side
    double mid_, half_; // (p1+p2)/2, (p2-p1)/2
    double beta_;
    double coupling_residual_ = 0.0;

    // cut nodes (arc-ordered from the cut end toward -inf)
    std::vector<double> node_r_, node_x_, node_wt_, node_wt_gauss_;
    std::vector<Complex> node_eta_;
    std::vector<double> node_theta_;
    std::vector<size_t> panel_begin_;

    // diagnostics on the hyperbola
    HyperbolaBranch hyp_;
    std::vector<double> hyp_lam_;
};

/// A- and B-side solutions for one model, coupled and iterated to
/// convergence; B is the swapped-model A.
class Transforms {
  public:
    explicit Transforms(const ModelParams& m) : Transforms(m, BvpSolution::Options()) {}
    Transforms(const ModelParams& m, BvpSolution::Options opt);

    const BvpSolution& side_A() const { return a_; }
    const BvpSolution& side_B() const { return b_; }

    TransformValue eval_A(Complex p) const { return a_.eval(p); }
    TransformValue eval_B(Complex q) const { return b_.eval(q); }

    /// L = -(u A + v B)/K with the removable singularity at the origin
    /// handled by one step of Richardson extrapolation inside a guard
    /// radius; L(0,0) = 1 exactly.
    TransformValue eval_L(Complex p, Complex q) const;

  private:
    ModelParams m_;
    BvpSolution a_, b_;
};

/// Convenience one-shot wrappers matching the operation contracts.
TransformValue eval_A(const ModelParams& m, Complex p, double tol = 1e-10);
TransformValue eval_B(const ModelParams& m, Complex q, double tol = 1e-10);
TransformValue eval_L(const ModelParams& m, Complex p, Complex q, double tol = 1e-10);

}  // namespace rbm
