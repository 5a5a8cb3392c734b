#include "rbm/model.hpp"

#include <cmath>
#include <sstream>

namespace rbm {

namespace {

// Strict ">" with a relative margin; exact-boundary inputs fail.
bool strictly_positive(double x, double scale) {
    return x > 1e-12 * scale;
}

std::string describe(const RawParams& r) {
    std::ostringstream os;
    os << "(sigma1=" << r.sigma1 << ", sigma2=" << r.sigma2 << ", rho=" << r.rho
       << ", mu1=" << r.mu1 << ", mu2=" << r.mu2 << ", r1=" << r.r1 << ", r2=" << r.r2
       << ", wedge=" << (r.wedge == Wedge::ThreeQuarter ? "three_quarter" : "quarter") << ")";
    return os.str();
}

}  // namespace

ModelParams ModelParams::swapped() const {
    ModelParams s = *this;
    std::swap(s.sigma1, s.sigma2);
    std::swap(s.mu1, s.mu2);
    std::swap(s.r1, s.r2);
    return s;
}

ModelParams validate_params(const RawParams& raw) {
    const double var_scale = std::max(std::abs(raw.sigma1), std::abs(raw.sigma2));
    if (!(raw.sigma1 > 0.0) || !(raw.sigma2 > 0.0))
        throw ModelError(ModelErrorCode::NonPositiveVariance,
                         "variances must be positive: " + describe(raw));
    if (!(raw.r1 > 0.0) || !(raw.r2 > 0.0))
        throw ModelError(ModelErrorCode::NonPositiveReflection,
                         "reflection slopes r1, r2 must be positive: " + describe(raw));

    const double det = raw.sigma1 * raw.sigma2 - raw.rho * raw.rho;
    if (!strictly_positive(det, var_scale * var_scale))
        throw ModelError(ModelErrorCode::NotElliptic,
                         "covariance not elliptic (sigma1*sigma2 - rho^2 <= 0, the parabolic "
                         "boundary case is rejected as well): " + describe(raw));

    const double mu_scale = std::max({std::abs(raw.mu1), std::abs(raw.mu2), 1e-300});
    if (!strictly_positive(-raw.mu1, mu_scale) || !strictly_positive(-raw.mu2, mu_scale))
        throw ModelError(ModelErrorCode::NotErgodic,
                         "drift must point into the negative quadrant (mu1 < 0, mu2 < 0): " +
                             describe(raw));

    const double c1 = raw.mu1 - raw.r1 * raw.mu2;
    const double c2 = raw.mu2 - raw.r2 * raw.mu1;
    const double c_scale = mu_scale * std::max(1.0, std::max(raw.r1, raw.r2));
    bool quarter_convention = false;
    if (raw.wedge == Wedge::ThreeQuarter) {
        if (!strictly_positive(c1, c_scale) || !strictly_positive(c2, c_scale))
            throw ModelError(ModelErrorCode::NotErgodic,
                             "three-quarter ergodicity needs mu1 - r1*mu2 > 0 and "
                             "mu2 - r2*mu1 > 0: " + describe(raw));
    } else {
        // Quarter-plane convention: same inequalities reversed. This mirrors
        // the quadrant literature and implies r1*r2 < 1.
        if (!strictly_positive(-c1, c_scale) || !strictly_positive(-c2, c_scale))
            throw ModelError(ModelErrorCode::NotErgodic,
                             "quarter-mode convention needs mu1 - r1*mu2 < 0 and "
                             "mu2 - r2*mu1 < 0: " + describe(raw));
        quarter_convention = true;
    }

    // Either sign pattern above forbids r1*r2 = 1; keep an explicit guard.
    if (std::abs(1.0 - raw.r1 * raw.r2) <= 1e-12 * std::max(1.0, raw.r1 * raw.r2))
        throw ModelError(ModelErrorCode::DegenerateReflection,
                         "r1*r2 = 1 is not positive recurrent: " + describe(raw));

    ModelParams m;
    m.sigma1 = raw.sigma1;
    m.sigma2 = raw.sigma2;
    m.rho = raw.rho;
    m.mu1 = raw.mu1;
    m.mu2 = raw.mu2;
    m.r1 = raw.r1;
    m.r2 = raw.r2;
    m.wedge = raw.wedge;
    m.beta = std::acos(-raw.rho / std::sqrt(raw.sigma1 * raw.sigma2));
    m.quarter_convention = quarter_convention;
    return m;
}

Complex kernel_K(const ModelParams& m, Complex p, Complex q) {
    return 0.5 * (m.sigma1 * p * p + 2.0 * m.rho * p * q + m.sigma2 * q * q) + m.mu1 * p +
           m.mu2 * q;
}

Complex reflection_u(const ModelParams& m, Complex p, Complex q) { return m.r1 * p + q; }

Complex reflection_v(const ModelParams& m, Complex p, Complex q) { return m.r2 * q + p; }

MassConstants mass_constants(const ModelParams& m) {
    const double det = 1.0 - m.r1 * m.r2;
    if (std::abs(det) <= 1e-14 * std::max(1.0, m.r1 * m.r2))
        throw ModelError(ModelErrorCode::DegenerateReflection,
                         "mass constants undefined for r1*r2 = 1");
    return MassConstants{(m.mu1 * m.r2 - m.mu2) / det, (m.mu2 * m.r1 - m.mu1) / det};
}

}  // namespace rbm
