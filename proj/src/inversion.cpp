#include "rbm/inversion.hpp"

#include <cmath>

#include "rbm/quad.hpp"

namespace rbm {

namespace {

// Octave block structure on the frequency half-line: [0, T0], [T0, 2T0],
// [2T0, 4T0], ... with a fixed panel count per block, so the sampling grid
// coarsens in step with the slow large-frequency variation of the
// transforms while Filon handles the oscillation exactly.
struct Block {
    double a, b;
    std::vector<Complex> samples;  // 2 n_panels + 1 values on [a, b]
};

// sin(t)/t with the small-argument series
double sinc(double t) {
    if (std::abs(t) < 1e-4) return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

class HalfLineInverter {
  public:
    HalfLineInverter(const BvpSolution& side, const InversionOptions& opt)
        : side_(side), opt_(opt) {}

    // Pointwise density at z (window = 0), or the average over the bin
    // [z - window/2, z + window/2]: averaging multiplies the transform by
    // sinc(x window / 2), which tames the slow corner-singularity tail.
    double density(double z, double window = 0.0) {
        ensure_block(0);
        Complex total = block_integral(0, z, window);
        const double scale = std::abs(side_.prefactor());
        for (size_t k = 1;; ++k) {
            ensure_block(k);
            const Complex part = block_integral(k, z, window);
            total += part;
            if (std::abs(part) < 0.25 * opt_.tol * scale) break;
            if (blocks_[k].b >= opt_.t_cap)
                throw InversionError(
                    "SlowDecay: transform tail above tolerance at the truncation cap");
        }
        return std::real(total) / kPi;
    }

  private:
    void ensure_block(size_t k) {
        while (blocks_.size() <= k) {
            const size_t j = blocks_.size();
            const double a = (j == 0) ? 0.0 : opt_.t_initial * std::pow(2.0, j - 1.0);
            const double b = opt_.t_initial * std::pow(2.0, static_cast<double>(j));
            const int n_panels =
                std::max(8, static_cast<int>(std::ceil(opt_.t_initial / opt_.panel_width)));
            Block bl{a, b, {}};
            bl.samples.resize(2 * n_panels + 1);
            for (int i = 0; i < static_cast<int>(bl.samples.size()); ++i) {
                const double x = a + (b - a) * i / (2.0 * n_panels);
                bl.samples[i] = side_.eval(Complex(0.0, x)).value;
            }
            blocks_.push_back(std::move(bl));
        }
    }

    Complex block_integral(size_t k, double z, double window) const {
        const Block& bl = blocks_[k];
        if (window == 0.0) return quad::filon_sampled(bl.samples, bl.a, bl.b, -z);
        std::vector<Complex> s(bl.samples.size());
        for (size_t i = 0; i < s.size(); ++i) {
            const double x = bl.a + (bl.b - bl.a) * i / (s.size() - 1.0);
            s[i] = bl.samples[i] * sinc(0.5 * x * window);
        }
        return quad::filon_sampled(s, bl.a, bl.b, -z);
    }

    const BvpSolution& side_;
    InversionOptions opt_;
    std::vector<Block> blocks_;
};

}  // namespace

double invert_nu1(const Transforms& tr, double z1, const InversionOptions& opt) {
    if (z1 >= 0.0) return 0.0;
    HalfLineInverter inv(tr.side_A(), opt);
    return inv.density(z1);
}

double invert_nu2(const Transforms& tr, double z2, const InversionOptions& opt) {
    if (z2 >= 0.0) return 0.0;
    HalfLineInverter inv(tr.side_B(), opt);
    return inv.density(z2);
}

struct PiInverter::Impl {
    struct Grid {
        std::vector<double> x;       // nonnegative sample frequencies, per block
        std::vector<Complex> a_val;  // transform values at i x
        std::vector<size_t> block_begin;
        std::vector<double> block_a, block_b;
        int n_panels = 0;
    };
    Grid gx;                      // samples of A on [0, T]
    std::vector<Complex> b_val;   // samples of B at the same frequencies
    ModelParams m;
    double T = 0.0;
};

PiInverter::PiInverter(const Transforms& tr, const InversionOptions& opt)
    : tr_(tr), opt_(opt), impl_(new Impl) {
    impl_->m = tr.side_A().params();
    // truncation from the decay of |A|, |B| on the imaginary axis
    double T = opt.t_initial;
    const double scale =
        std::abs(tr.side_A().prefactor()) + std::abs(tr.side_B().prefactor());
    while (T < opt.t_cap) {
        const double decay = std::abs(tr.eval_A(Complex(0.0, T)).value) +
                             std::abs(tr.eval_B(Complex(0.0, T)).value);
        if (decay < opt.t_decay_2d * scale) break;
        T *= 2.0;
    }
    impl_->T = T;

    auto& g = impl_->gx;
    g.n_panels = std::max(8, static_cast<int>(std::ceil(opt.t_initial / opt.panel_width)));
    const int per_block = 2 * g.n_panels + 1;
    double a = 0.0, b = opt.t_initial;
    while (a < T) {
        g.block_begin.push_back(g.x.size());
        g.block_a.push_back(a);
        g.block_b.push_back(b);
        for (int i = 0; i < per_block; ++i)
            g.x.push_back(a + (b - a) * i / (per_block - 1.0));
        a = b;
        b = std::min(2.0 * b, T);
        if (b <= a) break;
    }
    g.a_val.resize(g.x.size());
    impl_->b_val.resize(g.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) {
        g.a_val[i] = tr.eval_A(Complex(0.0, g.x[i])).value;
        impl_->b_val[i] = tr.eval_B(Complex(0.0, g.x[i])).value;
    }
}

PiInverter::~PiInverter() = default;

double PiInverter::density(double z1, double z2, double w1, double w2) const {
    if (!(z1 >= 0.0 || z2 >= 0.0)) return 0.0;  // zero outside S by convention
    const ModelParams& m = impl_->m;
    const auto& g = impl_->gx;
    const size_t n = g.x.size();
    const size_t n_blocks = g.block_begin.size();
    const int per_block = 2 * g.n_panels + 1;

    auto L_at = [&](size_t ix, double sx, size_t iy, double sy) -> Complex {
        // L(i sx x[ix], i sy x[iy]) from the cached half-line samples, times
        // the bin-averaging windows
        const double xv = sx * g.x[ix], yv = sy * g.x[iy];
        const double win = sinc(0.5 * xv * w1) * sinc(0.5 * yv * w2);
        if (xv == 0.0 && yv == 0.0) return 1.0;
        const Complex p(0.0, xv), q(0.0, yv);
        const Complex A = (sx > 0) ? g.a_val[ix] : std::conj(g.a_val[ix]);
        const Complex B = (sy > 0) ? impl_->b_val[iy] : std::conj(impl_->b_val[iy]);
        return win * -(reflection_u(m, p, q) * A + reflection_v(m, p, q) * B) /
               kernel_K(m, p, q);
    };

    // inner transforms M(x) = int_{-T}^{T} e^{-i y z2} L(ix, iy) dy
    std::vector<Complex> inner(n);
    std::vector<Complex> row(static_cast<size_t>(per_block));
    for (size_t ix = 0; ix < n; ++ix) {
        Complex acc = 0.0;
        for (size_t bk = 0; bk < n_blocks; ++bk) {
            const size_t b0 = g.block_begin[bk];
            for (int i = 0; i < per_block; ++i) row[i] = L_at(ix, +1.0, b0 + i, +1.0);
            acc += quad::filon_sampled(row, g.block_a[bk], g.block_b[bk], -z2);
            for (int i = 0; i < per_block; ++i) row[i] = L_at(ix, +1.0, b0 + i, -1.0);
            acc += quad::filon_sampled(row, g.block_a[bk], g.block_b[bk], +z2);
        }
        inner[ix] = acc;
    }

    // outer: pi = (2 / (2 pi)^2) Re int_0^T e^{-i x z1} M(x) dx
    Complex outer = 0.0;
    std::vector<Complex> mrow(static_cast<size_t>(per_block));
    for (size_t bk = 0; bk < n_blocks; ++bk) {
        const size_t b0 = g.block_begin[bk];
        for (int i = 0; i < per_block; ++i) mrow[i] = inner[b0 + i];
        outer += quad::filon_sampled(mrow, g.block_a[bk], g.block_b[bk], -z1);
    }
    return 2.0 * std::real(outer) / (4.0 * kPi * kPi);
}

double invert_pi(const Transforms& tr, double z1, double z2, const InversionOptions& opt) {
    PiInverter inv(tr, opt);
    return inv.density(z1, z2);
}

DensityGrid boundary_density_grid(const Transforms& tr, int which, AxisSpec ax,
                                  const InversionOptions& opt) {
    if (which != 1 && which != 2)
        throw InversionError("boundary_density_grid: which must be 1 or 2");
    HalfLineInverter inv(which == 1 ? tr.side_A() : tr.side_B(), opt);
    DensityGrid g;
    g.ax1 = ax;
    g.ax2 = AxisSpec{0.0, 0.0, 0};
    g.values.resize(ax.n);
    g.raw.resize(ax.n);
    for (int i = 0; i < ax.n; ++i) {
        const double z = ax.center(i);
        const double v = (z < 0.0) ? inv.density(z, ax.step()) : 0.0;
        g.raw[i] = v;
        g.values[i] = std::max(v, 0.0);
        g.min_raw = std::min(g.min_raw, v);
        g.mass += g.values[i] * ax.step();
    }
    return g;
}

DensityGrid interior_density_grid(const Transforms& tr, AxisSpec ax1, AxisSpec ax2,
                                  const InversionOptions& opt) {
    PiInverter inv(tr, opt);
    DensityGrid g;
    g.ax1 = ax1;
    g.ax2 = ax2;
    g.values.resize(static_cast<size_t>(ax1.n) * ax2.n);
    g.raw.resize(g.values.size());
    for (int i = 0; i < ax1.n; ++i) {
        for (int j = 0; j < ax2.n; ++j) {
            const double z1 = ax1.center(i), z2 = ax2.center(j);
            const size_t idx = static_cast<size_t>(i) * ax2.n + j;
            const bool in_S = (z1 >= 0.0 || z2 >= 0.0);
            const double v = in_S ? inv.density(z1, z2, ax1.step(), ax2.step()) : 0.0;
            g.raw[idx] = v;
            g.values[idx] = std::max(v, 0.0);
            g.min_raw = std::min(g.min_raw, v);
            if (in_S) g.mass += g.values[idx] * ax1.step() * ax2.step();
        }
    }
    return g;
}

}  // namespace rbm
