// Shared quadrature machinery: fixed 15-point Gauss-Kronrod panels with the
// embedded 7-point error estimate, a deterministic adaptive driver, and a
// Filon-Simpson rule that integrates a sampled smooth factor against
// e^{i omega x} exactly per panel.
#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace rbm::quad {

using Complex = std::complex<double>;

struct GK15 {
    static constexpr int n = 15;
    // Kronrod abscissae on [0, 1) plus the center; mirrored internally.
    static const std::array<double, 8> abscissae;
    static const std::array<double, 8> kronrod_w;
    static const std::array<double, 4> gauss_w;
};

struct PanelResult {
    Complex value;
    double error;  // |K15 - G7|, the usual conservative estimate
};

/// One Gauss-Kronrod panel over [a, b].
PanelResult gk15(const std::function<Complex(double)>& f, double a, double b);

/// Deterministic adaptive bisection to absolute tolerance.
PanelResult adaptive(const std::function<Complex(double)>& f, double a, double b,
                     double tol, int max_depth = 24);

/// Nodes of a gk15 panel over [a, b], in increasing order, with weights
/// (Kronrod) and embedded Gauss weights (zero where Gauss has no node).
struct PanelNodes {
    std::array<double, 15> x;
    std::array<double, 15> wk;
    std::array<double, 15> wg;
};
PanelNodes gk15_nodes(double a, double b);

/// Filon-Simpson moments: integrates the quadratic through
/// (x0, f0), (x0+h, f1), (x0+2h, f2) against e^{i omega x} exactly.
Complex filon_panel(double x0, double h, double omega, Complex f0, Complex f1, Complex f2);

/// Integral of f(x) e^{i omega x} dx over [a, b] with n_panels Filon panels;
/// f is sampled at the 2*n_panels + 1 uniform points.
Complex filon(const std::function<Complex(double)>& f, double a, double b, double omega,
              int n_panels);

/// Same, but with precomputed samples f[j] at x = a + j*(b-a)/(2*n_panels).
Complex filon_sampled(const std::vector<Complex>& f, double a, double b, double omega);

}  // namespace rbm::quad
