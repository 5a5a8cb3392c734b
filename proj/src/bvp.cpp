#include "rbm/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rbm/quad.hpp"

namespace rbm {

double pole_p0(const ModelParams& m) {
    return 2.0 * (m.mu2 * m.r1 - m.mu1) /
           (m.sigma1 + m.sigma2 * m.r1 * m.r1 - 2.0 * m.rho * m.r1);
}

int index_chi(const ModelParams& m) {
    const BranchPoints bp = branch_points(m);
    if (m.wedge == Wedge::ThreeQuarter) {
        const double vx = -(m.rho * bp.q2 + m.mu1) / m.sigma1;  // P1(q2) = P2(q2)
        const double u = m.r1 * vx + bp.q2;
        return (u >= -1e-14 * (std::abs(m.r1 * vx) + bp.q2)) ? 0 : -1;
    }
    const double vx = -(m.rho * bp.q1 + m.mu1) / m.sigma1;
    const double u = m.r1 * vx + bp.q1;
    return (u <= 1e-14 * (std::abs(m.r1 * vx) + std::abs(bp.q1))) ? 0 : -1;
}

Complex g_func(const ModelParams& m, Complex p) {
    const BranchValue q = branch_Q(m, p);
    const Complex u = reflection_u(m, p, q.second);
    const Complex v = reflection_v(m, p, q.second);
    const double scale = std::abs(m.r2 * q.second) + std::abs(p);
    if (std::abs(v) < 1e-13 * std::max(scale, 1e-300))
        throw BvpError(BvpErrorCode::PoleOfG, "g_func: v(p, Q2(p)) vanishes");
    return u / v;
}

// ---------------------------------------------------------------------------

BvpSolution::BvpSolution(const ModelParams& m, Options opt)
    : m_(m), opt_(opt), bp_(branch_points(m)), glue_(m, bp_) {
    chi_ = index_chi(m);
    p0_ = pole_p0(m);
    mass_ = mass_constants(m).A0;
    beta_ = m.beta;
    mid_ = 0.5 * (bp_.p1 + bp_.p2);
    half_ = 0.5 * (bp_.p2 - bp_.p1);
    cut_end_ = (m.wedge == Wedge::ThreeQuarter) ? bp_.p1 : bp_.p2;
    if (m.wedge == Wedge::ThreeQuarter) {
        if (!(p0_ > bp_.p1 + 1e-12 * half_ && p0_ < 0.0))
            throw BvpError(BvpErrorCode::DomainViolation,
                           "pole p0 escapes (p1, 0); parameters outside the scope of "
                           "the solver");
    } else {
        if (!(p0_ < bp_.p2 - 1e-12 * half_ && p0_ > 0.0))
            throw BvpError(BvpErrorCode::DomainViolation,
                           "quarter-mode pole p0 escapes (0, p2)");
    }
    build_nodes();
    build_hyperbola_diagnostics();
    seed_phase();
}

// Cut parametrization: s = -r (three-quarter, cut (-inf, p1]) or s = +r
// (quarter, cut [p2, inf)), r in (0, 1]. The r < 1 representative carries
// the pairing for the limit from Im p > 0.
double BvpSolution::cut_x(double r) const {
    const double c = 0.5 * (r + 1.0 / r);
    return (m_.wedge == Wedge::ThreeQuarter) ? mid_ - half_ * c : mid_ + half_ * c;
}

Complex BvpSolution::cut_eta(double r) const {
    const BranchPoints& b = bp_;
    const double mq = 0.5 * (b.q1 + b.q2), hq = 0.5 * (b.q2 - b.q1);
    const Complex em = std::polar(1.0, -beta_);  // e^{-i beta}
    const Complex ep = std::polar(1.0, +beta_);
    const Complex s = (m_.wedge == Wedge::ThreeQuarter) ? Complex(-r, 0.0) : Complex(r, 0.0);
    return mq + 0.5 * hq * (s * em + ep / s);
}

void BvpSolution::build_nodes() {
    // panels on r in (0, 1]; the grading exponent clusters panels toward
    // r = 1 (the branch point), where the phase data turns on
    std::vector<double> edges(static_cast<size_t>(opt_.panels) + 1);
    const double expo = 1.0 + opt_.grading;
    for (int k = 0; k <= opt_.panels; ++k) {
        const double u = static_cast<double>(k) / opt_.panels;
        edges[static_cast<size_t>(opt_.panels - k)] = 1.0 - std::pow(u, expo);
    }
    edges.front() = 0.0;
    edges.back() = 1.0;

    for (size_t e = 0; e + 1 < edges.size(); ++e) {
        const quad::PanelNodes nd = quad::gk15_nodes(edges[e], edges[e + 1]);
        panel_begin_.push_back(node_r_.size());
        for (int j = 0; j < 15; ++j) {
            const double r = nd.x[j];
            const double dxdr = half_ * 0.5 * std::abs(1.0 / (r * r) - 1.0);
            node_r_.push_back(r);
            node_x_.push_back(cut_x(r));
            node_eta_.push_back(cut_eta(r));
            node_wt_.push_back(nd.wk[j] * dxdr);
            node_wt_gauss_.push_back(nd.wg[j] * dxdr);
            node_theta_.push_back(0.0);
        }
    }
}

void BvpSolution::build_hyperbola_diagnostics() {
    hyp_ = bvp_contour(m_, opt_.contour_samples, bp_.q2 + 50.0 * (bp_.q2 - bp_.q1));
    hyp_lam_.resize(hyp_.nodes.size());
    Complex g_prev = g_func(m_, Complex(hyp_.vertex, 0.0));
    double lam = 2.0 * std::arg(g_prev);
    for (size_t i = 0; i < hyp_.nodes.size(); ++i) {
        Complex g;
        try {
            g = g_func(m_, hyp_.nodes[i].t);
        } catch (const BvpError&) {
            g = g_prev;  // pole of g on the contour: carry the phase through
        }
        lam += 2.0 * std::arg(g / g_prev);
        hyp_lam_[i] = lam;
        g_prev = g;
    }
}

void BvpSolution::seed_phase() {
    // initial guess for the other side: its rational prefactor only
    const ModelParams ms = m_.swapped();
    const double mass_o = mass_constants(ms).A0;
    const double p0_o = pole_p0(ms);
    Complex c_prev;
    bool have_prev = false;
    double th = 0.0;
    for (size_t j = node_r_.size(); j-- > 0;) {
        // iterate from r = 1 (cut end) toward r = 0 to anchor at theta = 0
        const double x = node_x_[j];
        const Complex eta = node_eta_[j];
        const Complex other = mass_o * (0.0 - p0_o) / (eta - p0_o);
        const Complex c = reflection_v(m_, x, eta) * other / reflection_u(m_, x, eta);
        if (have_prev) th += 2.0 * std::arg(c / c_prev);
        c_prev = c;
        have_prev = true;
        node_theta_[j] = th;
    }
}

double BvpSolution::update_phase(const BvpSolution& other) {
    double max_delta = 0.0;
    Complex c_prev;
    bool have_prev = false;
    double th = 0.0;
    for (size_t j = node_r_.size(); j-- > 0;) {
        const double x = node_x_[j];
        const Complex eta = node_eta_[j];
        const Complex b = other.eval_inner(eta).value;
        const Complex c = reflection_v(m_, x, eta) * b / reflection_u(m_, x, eta);
        if (have_prev) {
            const double inc = 2.0 * std::arg(c / c_prev);
            if (std::abs(inc) > 2.8)
                throw BvpError(BvpErrorCode::BranchJump,
                               "phase data jumped between cut nodes; refine the grid");
            th += inc;
        }
        c_prev = c;
        have_prev = true;
        max_delta = std::max(max_delta, std::abs(th - node_theta_[j]));
        node_theta_[j] = th;
    }
    return max_delta;
}

Complex BvpSolution::cauchy_exp(Complex p, double* err) const {
    // E(p) = (1/2pi) int Theta(tau) [1/(tau - p) - 1/tau] dtau over the cut
    Complex acc = 0.0;
    double err_acc = 0.0;
    const size_t n = node_x_.size();
    size_t j = 0;
    for (size_t pb = 0; pb < panel_begin_.size(); ++pb) {
        const size_t end = (pb + 1 < panel_begin_.size()) ? panel_begin_[pb + 1] : n;
        Complex pk = 0.0, pg = 0.0;
        for (j = panel_begin_[pb]; j < end; ++j) {
            const Complex kern = 1.0 / (node_x_[j] - p) - 1.0 / node_x_[j];
            const Complex term = node_theta_[j] * kern;
            pk += term * node_wt_[j];
            pg += term * node_wt_gauss_[j];
        }
        acc += pk;
        err_acc += std::abs(pk - pg);
    }
    if (err) *err = err_acc / (2.0 * kPi);
    return acc / (2.0 * kPi);
}

TransformValue BvpSolution::eval_inner(Complex p) const {
    const double guard = 1e-8 * half_;
    if (std::abs(p - p0_) < guard)
        throw BvpError(BvpErrorCode::NearPole,
                       "evaluation point within the guard radius of the pole p0");
    double err = 0.0;
    const Complex E = cauchy_exp(p, &err);
    const Complex val = mass_ * ((0.0 - p0_) / (p - p0_)) * std::exp(E);
    return TransformValue{val, DomainTag::Interior,
                          std::abs(val) * (err + coupling_residual_)};
}

TransformValue BvpSolution::eval(Complex p) const {
    const bool three_quarter = (m_.wedge == Wedge::ThreeQuarter);
    const bool on_cut =
        p.imag() == 0.0 &&
        (three_quarter ? p.real() <= cut_end_ : p.real() >= cut_end_);
    if (on_cut)
        throw BvpError(BvpErrorCode::DomainViolation,
                       "eval: p on the analyticity cut of the transform");

    TransformValue tv = eval_inner(p);

    // tag by the position relative to the BVP hyperbola in the phi chart
    const Complex phi = glue_.phi(p);
    const double d = phi.real() - beta_;
    if (std::abs(d) <= 1e-9)
        tv.domain_tag = DomainTag::Boundary;
    else if (d < 0.0)
        tv.domain_tag = DomainTag::Interior;
    else
        tv.domain_tag = DomainTag::Continued;
    return tv;
}

double BvpSolution::theta_at(double x) const {
    // linear interpolation in the node table (diagnostics only)
    const auto it = std::lower_bound(node_x_.begin(), node_x_.end(), x);
    if (it == node_x_.begin()) return node_theta_.front();
    if (it == node_x_.end()) return node_theta_.back();
    const size_t j = static_cast<size_t>(std::distance(node_x_.begin(), it));
    const double t = (x - node_x_[j - 1]) / (node_x_[j] - node_x_[j - 1]);
    return (1.0 - t) * node_theta_[j - 1] + t * node_theta_[j];
}

Complex BvpSolution::cauchy_exp_pv(double, double*) const {
    throw BvpError(BvpErrorCode::DomainViolation, "on-cut evaluation is not defined");
}

// ---------------------------------------------------------------------------

Transforms::Transforms(const ModelParams& m, BvpSolution::Options opt)
    : m_(m), a_(m, opt), b_(m.swapped(), opt) {
    double delta = std::numeric_limits<double>::infinity();
    int it = 0;
    while (delta > opt.tol && it < opt.max_iterations) {
        const double da = a_.update_phase(b_);
        const double db = b_.update_phase(a_);
        delta = std::max(da, db);
        ++it;
    }
    a_.coupling_residual_ = delta;
    b_.coupling_residual_ = delta;
    if (!(delta <= std::sqrt(opt.tol)))
        throw BvpError(BvpErrorCode::ContourTooShort,
                       "phase coupling iteration failed to converge");
}

namespace {
Complex quotient_L(const ModelParams& m, const TransformValue& A, const TransformValue& B,
                   Complex p, Complex q, double* err) {
    const Complex K = kernel_K(m, p, q);
    const Complex u = reflection_u(m, p, q);
    const Complex v = reflection_v(m, p, q);
    *err = (std::abs(u) * A.estimated_error + std::abs(v) * B.estimated_error) /
           std::abs(K);
    return -(u * A.value + v * B.value) / K;
}
}  // namespace

TransformValue Transforms::eval_L(Complex p, Complex q) const {
    const double d = std::max(std::abs(p), std::abs(q));
    if (d == 0.0) return TransformValue{1.0, DomainTag::Interior, 0.0};
    const double guard = 1e-6;
    if (d < guard) {
        // removable singularity at the origin: sample on the ray at the
        // guard radius and Richardson-extrapolate the quadratic model
        const double s1 = guard / d, s2 = 2.0 * s1;
        double e1 = 0.0, e2 = 0.0;
        const Complex L1 =
            quotient_L(m_, a_.eval(s1 * p), b_.eval(s1 * q), s1 * p, s1 * q, &e1);
        const Complex L2 =
            quotient_L(m_, a_.eval(s2 * p), b_.eval(s2 * q), s2 * p, s2 * q, &e2);
        const Complex c1 = (4.0 * L1 - L2 - 3.0) / (2.0 * s1);
        const Complex c2 = (L2 - 1.0 - 2.0 * s1 * c1) / (4.0 * s1 * s1);
        return TransformValue{1.0 + c1 + c2, DomainTag::Continued, e1 + e2};
    }
    const Complex K = kernel_K(m_, p, q);
    const double k_scale = 0.5 * (std::abs(m_.sigma1 * p * p) +
                                  std::abs(2.0 * m_.rho * p * q) +
                                  std::abs(m_.sigma2 * q * q)) +
                           std::abs(m_.mu1 * p) + std::abs(m_.mu2 * q);
    if (std::abs(K) < 1e-12 * std::max(k_scale, 1e-300))
        throw BvpError(BvpErrorCode::KernelZero,
                       "eval_L: (p,q) lies on the kernel curve; use the kernel-curve "
                       "identity instead");
    const TransformValue A = a_.eval(p);
    const TransformValue B = b_.eval(q);
    double err = 0.0;
    const Complex val = quotient_L(m_, A, B, p, q, &err);
    DomainTag tag = DomainTag::Interior;
    if (A.domain_tag == DomainTag::Continued || B.domain_tag == DomainTag::Continued)
        tag = DomainTag::Continued;
    else if (A.domain_tag == DomainTag::Boundary || B.domain_tag == DomainTag::Boundary)
        tag = DomainTag::Boundary;
    return TransformValue{val, tag, err};
}

TransformValue eval_A(const ModelParams& m, Complex p, double tol) {
    BvpSolution::Options opt;
    opt.tol = tol;
    return Transforms(m, opt).eval_A(p);
}

TransformValue eval_B(const ModelParams& m, Complex q, double tol) {
    BvpSolution::Options opt;
    opt.tol = tol;
    return Transforms(m, opt).eval_B(q);
}

TransformValue eval_L(const ModelParams& m, Complex p, Complex q, double tol) {
    BvpSolution::Options opt;
    opt.tol = tol;
    return Transforms(m, opt).eval_L(p, q);
}

}  // namespace rbm
