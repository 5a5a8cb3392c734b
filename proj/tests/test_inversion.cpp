#include "doctest.h"

#include <cmath>

#include "rbm/inversion.hpp"
#include "test_util.hpp"

using namespace rbm;
using rbmtest::reference_params;

TEST_CASE("nu1 inversion: positivity, decay, mass closure") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    const AxisSpec ax{-10.0, 0.0, 100};
    const DensityGrid g = boundary_density_grid(tr, 1, ax);
    // mass closes on A(0) = 1 within 2%
    CHECK(g.mass == doctest::Approx(1.0).epsilon(0.02));
    for (double v : g.values) CHECK(v >= 0.0);
    CHECK(g.min_raw > -0.01);
    // decay far out and the support convention
    CHECK(std::abs(invert_nu1(tr, -20.0)) < 1e-3);
    CHECK(invert_nu1(tr, 0.5) == 0.0);
}

TEST_CASE("nu2 inversion mass closes on B(0)") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    // nu2 decays at the slow rate |q0| of the B-side pole; the grid must
    // span several multiples of 1/|q0| before the mass closes
    const AxisSpec ax{-60.0, 0.0, 300};
    const DensityGrid g = boundary_density_grid(tr, 2, ax);
    CHECK(g.mass == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("symmetric parameters give identical boundary densities") {
    RawParams r;
    r.sigma1 = r.sigma2 = 1.0;
    r.rho = -0.2;
    r.mu1 = r.mu2 = -1.5;
    r.r1 = r.r2 = 3.0;
    const ModelParams m = validate_params(r);
    const Transforms tr(m);
    for (double z : {-0.4, -1.0, -2.5}) {
        const double n1 = invert_nu1(tr, z);
        const double n2 = invert_nu2(tr, z);
        CHECK(n1 == doctest::Approx(n2).epsilon(1e-6));
    }
}

TEST_CASE("pi inversion: support convention and positivity") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    const PiInverter inv(tr);
    CHECK(inv.density(-1.0, -1.0) == 0.0);
    CHECK(inv.density(-0.1, -3.0) == 0.0);
    for (auto [z1, z2] : {std::pair{0.5, 0.5}, {2.0, 0.3}, {-0.5, 1.0}, {1.0, -0.5}}) {
        CHECK(inv.density(z1, z2) > -5e-3);
    }
    CHECK(inv.density(0.6, 0.4) > inv.density(6.0, 2.5));
}

TEST_CASE("pi grid mass closes on 1") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    const AxisSpec ax1{-4.0, 7.0, 44};
    const AxisSpec ax2{-3.0, 4.0, 28};
    const DensityGrid g = interior_density_grid(tr, ax1, ax2);
    CHECK(g.mass == doctest::Approx(1.0).epsilon(0.02));
    CHECK(g.min_raw > -5e-3);
}

TEST_CASE("slow decay guard throws past the cap") {
    const ModelParams m = reference_params();
    const Transforms tr(m);
    InversionOptions opt;
    opt.tol = 1e-12;  // unreachable truncation target
    opt.t_cap = 64.0;
    CHECK_THROWS_AS(invert_nu1(tr, -0.05, opt), InversionError);
}
