// The algebraic kernel curve {K(p,q) = 0}: branch points, the two-valued
// branch functions P_i(q) / Q_i(p) with their labeling and cut bookkeeping,
// the hyperbola carrying the boundary value problem, and the rational
// uniformization of the genus-0 curve.
#pragma once

#include <vector>

#include "rbm/model.hpp"

namespace rbm {

struct BranchPoints {
    double q1, q2;  // branch points of P_i(q); q1 < 0 < q2
    double p1, p2;  // branch points of Q_i(p); p1 < 0 < p2
};

/// Real roots of (rho^2 - sigma1*sigma2) q^2 + 2(rho*mu1 - sigma1*mu2) q + mu1^2 = 0
/// and of the index-swapped quadratic in p. Ellipticity makes them real and
/// of opposite signs.
BranchPoints branch_points(const ModelParams& m);

struct BranchValue {
    Complex first;   // P1 / Q1, Re(first) <= Re(second)
    Complex second;  // P2 / Q2
};

class BranchError : public std::runtime_error {
  public:
    explicit BranchError(const std::string& what) : std::runtime_error(what) {}
};

/// Both p-roots of K(p, q) = 0, labeled so that Re P1 <= Re P2, anchored by
/// Re P1(ix) <= 0 <= Re P2(ix) on the imaginary axis. On the cuts
/// (-inf, q1] and [q2, inf) the roots are conjugate and the labels are the
/// limits from Im q > 0.
BranchValue branch_P(const ModelParams& m, Complex q);

/// Both q-roots of K(p, q) = 0 (the symmetric construction).
BranchValue branch_Q(const ModelParams& m, Complex p);

enum class HyperbolaSide { Plus, Minus, DegenerateLine };

struct ContourNode {
    double q;        // parameter on the cut
    Complex t;       // point on the BVP branch, Im t >= 0; conj(t) is implied
    Complex dt_dq;   // derivative of the parametrization
};

/// The branch of the hyperbola (HP) that carries the boundary value problem,
/// parametrized by the cut: q in [q2, q_max] in three-quarter mode, and by
/// q in [q1 - (q_max - q2), q1] (mirrored) in quarter mode.
struct HyperbolaBranch {
    // cxx*x^2 + cyy*y^2 + cx*x + c0 = 0 with x = Re p, y = Im p
    double cxx, cyy, cx, c0;
    HyperbolaSide side;
    double vertex;  // abscissa of the branch vertex (= line abscissa if degenerate)
    std::vector<ContourNode> nodes;

    /// Signed residual of a point in the hyperbola equation.
    double residual(Complex t) const;
};

class ContourError : public std::runtime_error {
  public:
    explicit ContourError(const std::string& what) : std::runtime_error(what) {}
};

/// Samples the BVP branch on a grid of n_points graded toward the vertex.
/// rho = 0 degenerates to the vertical line Re p = -mu1/sigma1 and is
/// handled by the same parametrization. Throws ContourError if q_max <= q2
/// (three-quarter) or n_points < 2.
HyperbolaBranch bvp_contour(const ModelParams& m, int n_points, double q_max);

struct UniformizationPoint {
    Complex s;
    Complex p_of_s;
    Complex q_of_s;
};

/// Rational uniformization of {K = 0}:
///   p(s) = (p1+p2)/2 + (p2-p1)/4 (s + 1/s)
///   q(s) = (q1+q2)/2 + (q2-q1)/4 (s e^{-i beta} + e^{i beta}/s)
/// Throws std::invalid_argument for s = 0.
UniformizationPoint uniformize(const ModelParams& m, Complex s);

struct LiftedDomainFlags {
    bool in_D1hat;  // Re p(e^{i omega}) > 0 and pi  < Re omega < 3 pi
    bool in_D2hat;  // Re q(e^{i omega}) > 0 and beta - pi < Re omega < beta + pi
    bool in_Dhat;   // Re (p+q)(e^{i omega}) < 0 and 0 < Re omega < 2 pi
};

/// Membership of omega in the lifted domains on the universal covering.
LiftedDomainFlags lifted_domain(const ModelParams& m, Complex omega);

}  // namespace rbm
