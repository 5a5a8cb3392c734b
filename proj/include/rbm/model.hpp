// Model parameters of obliquely reflected Brownian motion in the
// three-quarter plane S = {z1 >= 0 or z2 >= 0} (and the quarter plane,
// kept for side-by-side comparison), together with the elementary
// algebra every other module is built on: the kernel K, the reflection
// polynomials u, v and the boundary mass constants A(0), B(0).
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rbm {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class Wedge { ThreeQuarter, Quarter };

/// Unvalidated input container.
struct RawParams {
    double sigma1 = 1.0;  // Var of first Brownian component
    double sigma2 = 1.0;  // Var of second component
    double rho = 0.0;     // covariance
    double mu1 = -1.0;    // drift
    double mu2 = -1.0;
    double r1 = 1.0;  // reflection vector R1 = (r1, 1) on the face z2 = 0
    double r2 = 1.0;  // reflection vector R2 = (1, r2) on the face z1 = 0
    Wedge wedge = Wedge::ThreeQuarter;
};

enum class ModelErrorCode {
    NonPositiveVariance,
    NonPositiveReflection,
    NotElliptic,
    NotErgodic,
    DegenerateReflection,
};

class ModelError : public std::runtime_error {
  public:
    ModelError(ModelErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ModelErrorCode code() const { return code_; }

  private:
    ModelErrorCode code_;
};

/// Validated parameters. Construct through validate_params only.
struct ModelParams {
    double sigma1, sigma2, rho, mu1, mu2, r1, r2;
    Wedge wedge;
    double beta;  // arccos(-rho/sqrt(sigma1*sigma2)), in (0, pi)

    // Quarter-mode ergodicity is a documented convention, not a statement
    // of the three-quarter theory; flagged so reports can say so.
    bool quarter_convention = false;

    /// Index swap 1 <-> 2. Maps the A-side construction onto the B-side.
    ModelParams swapped() const;
};

/// Validates positivity, ellipticity sigma1*sigma2 - rho^2 > 0 and the
/// ergodicity conditions (mu_i < 0 and, in three-quarter mode,
/// mu1 - r1*mu2 > 0 and mu2 - r2*mu1 > 0; quarter mode reverses the two
/// last inequalities). Strict inequalities are enforced with a relative
/// margin of 1e-12; exact-boundary inputs are rejected.
ModelParams validate_params(const RawParams& raw);

/// K(p,q) = (sigma1 p^2 + 2 rho p q + sigma2 q^2)/2 + mu1 p + mu2 q
Complex kernel_K(const ModelParams& m, Complex p, Complex q);

/// u(p,q) = r1 p + q
Complex reflection_u(const ModelParams& m, Complex p, Complex q);

/// v(p,q) = r2 q + p
Complex reflection_v(const ModelParams& m, Complex p, Complex q);

struct MassConstants {
    double A0;  // nu1(R_-) = (mu1 r2 - mu2)/(1 - r1 r2)
    double B0;  // nu2(R_-) = (mu2 r1 - mu1)/(1 - r1 r2)
};

/// Closed-form boundary masses from the mass-conservation linear system.
MassConstants mass_constants(const ModelParams& m);

}  // namespace rbm
