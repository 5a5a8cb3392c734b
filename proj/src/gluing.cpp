#include "rbm/gluing.hpp"

#include <cmath>

namespace rbm {

namespace {

// sqrt(x^2 - 1) with branch cut [-1, 1], so that x + sqrt(x^2-1) has
// modulus >= 1 everywhere off the cut.
Complex sqrt_xx_minus_1(Complex x) {
    return std::sqrt(x - 1.0) * std::sqrt(x + 1.0);
}

bool on_negative_cut(Complex x) {
    return x.imag() == 0.0 && x.real() <= -1.0;
}

}  // namespace

Complex chebyshev_T(double a, Complex x) {
    if (on_negative_cut(x))
        throw GluingCutError("chebyshev_T: x on the cut (-inf, -1]");
    const Complex r = sqrt_xx_minus_1(x);
    Complex xi = x + r;
    if (std::abs(xi) < 1.0) xi = x - r;  // roundoff guard near the seam
    const Complex la = std::log(xi);
    return 0.5 * (std::exp(a * la) + std::exp(-a * la));
}

Complex chebyshev_T_prime(double a, Complex x) {
    if (on_negative_cut(x))
        throw GluingCutError("chebyshev_T_prime: x on the cut (-inf, -1]");
    const Complex r = sqrt_xx_minus_1(x);
    if (std::abs(r) < 1e-7) {
        // Near x = +1 (r -> 0): T_a'(x) = a^2 (1 + (a^2-1)(x-1)/3 + ...).
        // x = -1 is excluded by the cut.
        const Complex dx = x - 1.0;
        return a * a * (1.0 + (a * a - 1.0) * dx / 3.0 +
                        (a * a - 1.0) * (a * a - 4.0) * dx * dx / 30.0);
    }
    Complex xi = x + r;
    if (std::abs(xi) < 1.0) xi = x - r;
    const Complex la = std::log(xi);
    return 0.5 * a * (std::exp(a * la) - std::exp(-a * la)) / r;
}

Gluing::Gluing(const ModelParams& m, const BranchPoints& bp)
    : a_(kPi / m.beta),
      sign_(m.wedge == Wedge::ThreeQuarter ? 1.0 : -1.0),
      p1_(bp.p1),
      p2_(bp.p2),
      beta_(m.beta) {}

bool Gluing::on_cut(Complex p) const { return on_negative_cut(affine(p)); }

Complex Gluing::w(Complex p) const { return chebyshev_T(a_, affine(p)); }

Complex Gluing::w_prime(Complex p) const {
    return chebyshev_T_prime(a_, affine(p)) * (sign_ * 2.0 / (p2_ - p1_));
}

Complex Gluing::phi(Complex p) const {
    // arccos via log: phi = -i log(x + i sqrt(1 - x^2)); use the
    // |xi| >= 1 branch of x + sqrt(x^2-1) = e^{i phi} with Im phi <= 0.
    const Complex x = affine(p);
    const Complex r = sqrt_xx_minus_1(x);
    Complex xi = x + r;
    if (std::abs(xi) < 1.0) xi = x - r;
    // xi = e^{i phi} with Re phi in [0, pi] requires arg in [0, pi]; the
    // |xi|>=1 branch can land at arg in [-pi, 0), which is the mirror
    // phi -> -phi of the same p; fold it back.
    Complex ph = Complex(0.0, -1.0) * std::log(xi);
    if (ph.real() < 0.0) ph = -ph;
    return ph;
}

Complex Gluing::p_of_phi(Complex phi) const {
    return 0.5 * (p1_ + p2_) + sign_ * 0.5 * (p2_ - p1_) * std::cos(phi);
}

Gluing make_gluing(const ModelParams& m) { return Gluing(m, branch_points(m)); }

}  // namespace rbm
