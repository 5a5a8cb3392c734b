#include "rbm/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace rbm::quad {

// QUADPACK 15-7 pair. abscissae[7] = 0 is the center node.
const std::array<double, 8> GK15::abscissae = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
const std::array<double, 8> GK15::kronrod_w = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
const std::array<double, 4> GK15::gauss_w = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

PanelResult gk15(const std::function<Complex(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex k_sum = 0.0, g_sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = h * GK15::abscissae[i];
        const Complex fr = f(c + dx);
        const Complex fl = (i == 7) ? fr : f(c - dx);
        const Complex s = (i == 7) ? fr : fl + fr;
        k_sum += GK15::kronrod_w[i] * s;
        // Gauss-7 nodes sit at the odd Kronrod indices; i == 7 is the center.
        if (i % 2 == 1) g_sum += GK15::gauss_w[i / 2] * s;
    }
    k_sum *= h;
    g_sum *= h;
    return PanelResult{k_sum, std::abs(k_sum - g_sum)};
}

PanelResult adaptive(const std::function<Complex(double)>& f, double a, double b, double tol,
                     int max_depth) {
    PanelResult whole = gk15(f, a, b);
    if (whole.error <= tol || max_depth <= 0) return whole;
    const double c = 0.5 * (a + b);
    PanelResult left = adaptive(f, a, c, 0.5 * tol, max_depth - 1);
    PanelResult right = adaptive(f, c, b, 0.5 * tol, max_depth - 1);
    return PanelResult{left.value + right.value, left.error + right.error};
}

PanelNodes gk15_nodes(double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    PanelNodes out{};
    for (int i = 0; i < 8; ++i) {
        const double dx = h * GK15::abscissae[i];
        const double wk = h * GK15::kronrod_w[i];
        const double wg = (i % 2 == 1) ? h * GK15::gauss_w[i / 2] : 0.0;
        if (i == 7) {
            out.x[7] = c;
            out.wk[7] = wk;
            out.wg[7] = wg;
        } else {
            out.x[i] = c - dx;
            out.wk[i] = wk;
            out.wg[i] = wg;
            out.x[14 - i] = c + dx;
            out.wk[14 - i] = wk;
            out.wg[14 - i] = wg;
        }
    }
    return out;
}

namespace {

// Moments of {1, u, u^2} against e^{i theta u} on [-1, 1].
void filon_moments(double th, Complex& m0, Complex& m1, Complex& m2) {
    if (std::abs(th) < 0.1) {
        const double t2 = th * th;
        m0 = 2.0 * (1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0);
        m1 = Complex(0.0, 2.0) * th *
             (1.0 / 3.0 - t2 / 30.0 + t2 * t2 / 840.0 - t2 * t2 * t2 / 45360.0);
        m2 = 2.0 * (1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0 - t2 * t2 * t2 / 6480.0);
        return;
    }
    const double s = std::sin(th), c = std::cos(th);
    m0 = 2.0 * s / th;
    m1 = Complex(0.0, 2.0) * (s - th * c) / (th * th);
    m2 = 2.0 * ((th * th - 2.0) * s + 2.0 * th * c) / (th * th * th);
}

}  // namespace

Complex filon_panel(double x0, double h, double omega, Complex f0, Complex f1, Complex f2) {
    // u in [-1, 1], x = xc + h u, xc = x0 + h
    const double xc = x0 + h;
    const double th = omega * h;
    Complex m0, m1, m2;
    filon_moments(th, m0, m1, m2);
    const Complex a0 = f1;
    const Complex a1 = 0.5 * (f2 - f0);
    const Complex a2 = 0.5 * (f0 - 2.0 * f1 + f2);
    return h * std::exp(Complex(0.0, omega * xc)) * (a0 * m0 + a1 * m1 + a2 * m2);
}

Complex filon(const std::function<Complex(double)>& f, double a, double b, double omega,
              int n_panels) {
    if (n_panels < 1) throw std::invalid_argument("filon: n_panels < 1");
    const double h = 0.5 * (b - a) / n_panels;
    Complex total = 0.0;
    Complex fl = f(a);
    for (int k = 0; k < n_panels; ++k) {
        const double x0 = a + 2.0 * k * h;
        const Complex fm = f(x0 + h);
        const Complex fr = f(x0 + 2.0 * h);
        total += filon_panel(x0, h, omega, fl, fm, fr);
        fl = fr;
    }
    return total;
}

Complex filon_sampled(const std::vector<Complex>& f, double a, double b, double omega) {
    if (f.size() < 3 || f.size() % 2 == 0)
        throw std::invalid_argument("filon_sampled: need odd sample count >= 3");
    const int n_panels = static_cast<int>(f.size() / 2);
    const double h = 0.5 * (b - a) / n_panels;
    Complex total = 0.0;
    for (int k = 0; k < n_panels; ++k) {
        const double x0 = a + 2.0 * k * h;
        total += filon_panel(x0, h, omega, f[2 * k], f[2 * k + 1], f[2 * k + 2]);
    }
    return total;
}

}  // namespace rbm::quad
