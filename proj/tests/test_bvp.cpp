#include "doctest.h"

#include <cmath>

#include "rbm/bvp.hpp"
#include "test_util.hpp"

using namespace rbm;
using rbmtest::reference_params;

TEST_CASE("pole p0 closed form and sign") {
    const ModelParams m = reference_params();
    CHECK(pole_p0(m) == doctest::Approx(-0.8).epsilon(1e-14));
    CHECK(pole_p0(rbmtest::rho_neg_params()) < 0.0);
    CHECK(pole_p0(rbmtest::rho_pos_params()) < 0.0);

    RawParams r;
    r.sigma1 = r.sigma2 = 1.0;
    r.rho = 0.3;
    r.mu1 = -1.0;
    r.mu2 = -2.0;
    r.wedge = Wedge::Quarter;
    r.r1 = 0.4;  // mu1 - r1 mu2 = -0.2 < 0
    r.r2 = 0.3;  // mu2 - r2 mu1 = -1.7 < 0
    CHECK(pole_p0(validate_params(r)) > 0.0);
}

TEST_CASE("index chi: reference set and the rho = 0 rule") {
    CHECK(index_chi(reference_params()) == 0);
    // rho = 0, mu1 < 0: P(q2) = -mu1/sigma1 > 0, so chi = 0 always
    std::uint64_t st = 4;
    for (int i = 0; i < 20; ++i) {
        RawParams r = rbmtest::reference_raw();
        r.mu1 = rbmtest::det_uniform(st, -3.0, -0.1);
        r.mu2 = rbmtest::det_uniform(st, -3.0, -0.1);
        r.r1 = rbmtest::det_uniform(st, 0.1, 5.0);
        r.r2 = rbmtest::det_uniform(st, 0.1, 5.0);
        ModelParams m;
        try {
            m = validate_params(r);
        } catch (const ModelError&) {
            continue;
        }
        CHECK(index_chi(m) == 0);
    }
}

TEST_CASE("g is real at the contour vertex and conjugate-symmetric on it") {
    for (const ModelParams& m :
         {reference_params(), rbmtest::rho_neg_params(), rbmtest::rho_pos_params()}) {
        const BranchPoints bp = branch_points(m);
        const double vx = -(m.rho * bp.q2 + m.mu1) / m.sigma1;
        const Complex gv = g_func(m, Complex(vx, 0.0));
        CHECK(std::abs(gv.imag()) < 1e-12 * (1.0 + std::abs(gv)));

        const HyperbolaBranch h = bvp_contour(m, 64, 40.0);
        for (size_t i = 4; i < h.nodes.size(); i += 7) {
            const Complex t = h.nodes[i].t;
            const Complex gt = g_func(m, t);
            const Complex gtb = g_func(m, std::conj(t));
            CHECK(std::abs(gtb - std::conj(gt)) < 1e-10 * (1.0 + std::abs(gt)));
            // |g(t)/g(tbar)| = 1: the log ratio is purely imaginary
            CHECK(std::abs(std::abs(gt / gtb) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("coupling iteration converges and anchors the masses") {
    for (const ModelParams& m :
         {reference_params(), rbmtest::rho_neg_params(), rbmtest::rho_pos_params()}) {
        const Transforms tr(m);
        CHECK(tr.side_A().coupling_residual() < 1e-9);
        const MassConstants mc = mass_constants(m);
        CHECK(tr.side_A().prefactor() == doctest::Approx(mc.A0).epsilon(1e-14));
        CHECK(tr.side_B().prefactor() == doctest::Approx(mc.B0).epsilon(1e-14));
        const TransformValue a0 = tr.eval_A(Complex(1e-9, 0.0));
        const TransformValue b0 = tr.eval_B(Complex(1e-9, 0.0));
        CHECK(a0.value.real() == doctest::Approx(mc.A0).epsilon(1e-7));
        CHECK(b0.value.real() == doctest::Approx(mc.B0).epsilon(1e-7));
    }
}

TEST_CASE("mass consistency: eval_A near zero recovers A(0)") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    CHECK(tr.side_A().prefactor() == doctest::Approx(1.0).epsilon(1e-14));
    const TransformValue tv = tr.eval_A(Complex(1e-6, 0.0));
    CHECK(tv.value.real() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(tv.value.imag()) < 1e-8);
}

TEST_CASE("A is positive, decreasing and bounded by A(0) on the real axis") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    double prev = tr.side_A().prefactor();
    for (double p : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0}) {
        const TransformValue tv = tr.eval_A(Complex(p, 0.0));
        CHECK(std::abs(tv.value.imag()) < 1e-10);
        CHECK(tv.value.real() > 0.0);
        CHECK(tv.value.real() < prev + 1e-9);
        prev = tv.value.real();
    }
}

TEST_CASE("Fourier modulus bound on the imaginary axis") {
    const ModelParams m = rbmtest::rho_neg_params();
    const Transforms tr(m);
    const double A0 = tr.side_A().prefactor();
    std::uint64_t st = 12;
    for (int i = 0; i < 60; ++i) {
        const double x = rbmtest::det_uniform(st, -30.0, 30.0);
        const TransformValue tv = tr.eval_A(Complex(0.0, x));
        CHECK(std::abs(tv.value) <= A0 * (1.0 + 1e-8) + tv.estimated_error);
        // Schwarz symmetry
        const TransformValue tc = tr.eval_A(Complex(0.0, -x));
        CHECK(std::abs(tc.value - std::conj(tv.value)) < 1e-12 * (1.0 + std::abs(tv.value)));
    }
}

TEST_CASE("kernel-curve identity u A + v B = 0 on principal pairings") {
    // pairings (p(s), q(s)) with arg s in (pi, pi + beta) carry the
    // functional-equation identity with the principal transforms; this is
    // the two-sided cross-check of the coupled solver.
    for (const ModelParams& m :
         {reference_params(), rbmtest::rho_neg_params(), rbmtest::rho_pos_params()}) {
        const Transforms tr(m);
        std::uint64_t st = 21;
        int n_checked = 0;
        for (int i = 0; i < 100; ++i) {
            const double th = kPi + rbmtest::det_uniform(st, 0.1, 0.9) * m.beta;
            const double rr = std::pow(10.0, rbmtest::det_uniform(st, -0.7, 0.7));
            const UniformizationPoint up = uniformize(m, std::polar(rr, th));
            const Complex p = up.p_of_s, q = up.q_of_s;
            const Complex A = tr.eval_A(p).value;
            const Complex B = tr.eval_B(q).value;
            const Complex u = reflection_u(m, p, q);
            const Complex v = reflection_v(m, p, q);
            const Complex resid = u * A + v * B;
            const double scale = std::abs(u * A) + std::abs(v * B);
            CHECK(std::abs(resid) < 1e-5 * scale);
            ++n_checked;
        }
        CHECK(n_checked == 100);
    }
}

TEST_CASE("cut limits are conjugate with unimodular ratio") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    const BranchPoints bp = branch_points(m);
    for (double x : {bp.p1 - 0.5, bp.p1 - 2.0, bp.p1 - 6.0}) {
        const double d = 0.02;
        const Complex above = tr.eval_A(Complex(x, d)).value;
        const Complex below = tr.eval_A(Complex(x, -d)).value;
        CHECK(std::abs(below - std::conj(above)) < 1e-9 * std::abs(above));
        // the jump of A across its cut is a pure phase
        CHECK(std::abs(std::abs(above / below) - 1.0) < 0.05);
    }
}

TEST_CASE("functional equation with L on the imaginary axes") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    CHECK(tr.eval_L(0.0, 0.0).value == Complex(1.0, 0.0));
    std::uint64_t st = 9;
    for (int i = 0; i < 60; ++i) {
        const double x = rbmtest::det_uniform(st, -3.0, 3.0);
        const double y = rbmtest::det_uniform(st, -3.0, 3.0);
        if (x * x + y * y < 1e-4) continue;
        const TransformValue L = tr.eval_L(Complex(0.0, x), Complex(0.0, y));
        CHECK(std::abs(L.value) <= 1.0 + 1e-6 + L.estimated_error);
    }
    for (double d : {1e-3, 1e-4, 3e-5}) {
        const TransformValue L = tr.eval_L(Complex(0.0, d), Complex(0.0, -d));
        CHECK(std::abs(L.value - 1.0) < 50.0 * d);
    }
}

TEST_CASE("analyticity probe: discrete Cauchy mean over a small circle") {
    const ModelParams m = rbmtest::rho_neg_params();
    const Transforms tr(m);
    const Gluing gl = make_gluing(m);
    const Complex center = gl.p_of_phi(Complex(0.4 * m.beta, 0.6));
    const double radius = 0.05;
    const TransformValue at_center = tr.eval_A(center);
    Complex mean = 0.0;
    const int n = 64;
    for (int k = 0; k < n; ++k) {
        const Complex z = center + std::polar(radius, 2.0 * kPi * k / n);
        mean += tr.eval_A(z).value;
    }
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean - at_center.value) < 1e-6 * (1.0 + std::abs(at_center.value)));
}

TEST_CASE("domain tags reflect the hyperbola geometry") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    const BranchPoints bp = branch_points(m);
    CHECK(tr.eval_A(Complex(bp.p2, 0.0)).domain_tag == DomainTag::Interior);
    CHECK(tr.eval_A(Complex(0.2, 0.1)).domain_tag == DomainTag::Continued);
    const HyperbolaBranch h = bvp_contour(m, 16, 20.0);
    CHECK(tr.eval_A(h.nodes[8].t).domain_tag == DomainTag::Boundary);
}

TEST_CASE("errors: cut evaluation, near-pole guard, kernel zeros") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    const BranchPoints bp = branch_points(m);
    CHECK_THROWS_AS(tr.eval_A(Complex(bp.p1 - 1.0, 0.0)), BvpError);
    CHECK_THROWS_AS(tr.eval_A(Complex(pole_p0(m), 0.0)), BvpError);
    // a kernel zero away from the origin: q = Q2(p) at p = 1
    const Complex q2p = branch_Q(m, Complex(1.0, 0.0)).second;
    CHECK_THROWS_AS(tr.eval_L(Complex(1.0, 0.0), q2p), BvpError);
}

TEST_CASE("pole of A at p0: blow-up toward the guard") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    const double p0 = pole_p0(m);
    const double near = std::abs(tr.eval_A(Complex(p0 + 1e-3, 0.0)).value);
    const double far = std::abs(tr.eval_A(Complex(p0 + 1e-1, 0.0)).value);
    CHECK(near > 50.0 * far);
}

TEST_CASE("deterministic evaluation") {
    const ModelParams m = rbmtest::rho_pos_params();
    const Transforms t1(m), t2(m);
    for (const Complex p : {Complex(2.0, 0.3), Complex(0.1, 1.0), Complex(0.0, 2.0)}) {
        const TransformValue a = t1.eval_A(p);
        const TransformValue b = t2.eval_A(p);
        CHECK(a.value.real() == b.value.real());
        CHECK(a.value.imag() == b.value.imag());
    }
}

TEST_CASE("swap construction: B of the model is A of the swapped model") {
    const ModelParams m = rbmtest::rho_neg_params();
    const Transforms tr(m);
    const Transforms swapped(m.swapped());
    for (const Complex q : {Complex(8.0, 0.0), Complex(0.0, 1.0), Complex(1.0, -0.5)}) {
        const Complex a = tr.eval_B(q).value;
        const Complex b = swapped.eval_A(q).value;
        CHECK(a.real() == doctest::Approx(b.real()).epsilon(1e-12));
        CHECK(a.imag() == doctest::Approx(b.imag()).epsilon(1e-12));
    }
}

TEST_CASE("log-ratio diagnostics on the hyperbola are unwrapped") {
    const ModelParams m = rbmtest::rho_pos_params();
    const Transforms tr(m);
    const auto& lam = tr.side_A().log_ratio_samples();
    REQUIRE(lam.size() > 10);
    CHECK(std::abs(lam.front()) < 0.05);  // vanishes at the vertex
    for (size_t i = 1; i < lam.size(); ++i) CHECK(std::abs(lam[i] - lam[i - 1]) < 1.0);
}
