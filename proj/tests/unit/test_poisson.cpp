#include "doctest.h"

#include <cmath>
#include <complex>

#include "zetalab/numutil.hpp"
#include "zetalab/poisson.hpp"
#include "zetalab/quadrature.hpp"

using namespace zetalab;

TEST_CASE("Poisson identity on the built-in functions") {
    for (const auto& f : builtin_test_functions()) {
        const auto c = poisson_check(f, 10000);
        INFO(f.label());
        CHECK(std::fabs(c.lhs - c.rhs) <= 1e-8);
    }
}

TEST_CASE("Poisson: no integers in the support, and a single lattice point") {
    TestFunction f{TestFunctionKind::Bump, 0.5, 0.3, 1.0};
    REQUIRE(f.support_lo() > 0.0);
    REQUIRE(f.support_hi() < 1.0);
    const auto small = poisson_check(f, 20), large = poisson_check(f, 2000);
    CHECK(small.lhs == 0.0);
    CHECK(std::fabs(large.rhs) <= std::fabs(small.rhs) + 1e-12);
    CHECK(std::fabs(large.rhs) <= 1e-8);

    TestFunction g{TestFunctionKind::Bump, 3.0, 0.2, 1.0};
    const auto c = poisson_check(g, 2000);
    CHECK(c.lhs == g(3.0));
    CHECK(c.rhs == doctest::Approx(g(3.0)).epsilon(1e-8));
}

TEST_CASE("Dirichlet mean square: one and two terms") {
    const double T = 1e4, G = 8.0;
    const auto one = dirichlet_poly_meansq(T, G, 10.0, 10.0);
    CHECK(one.value == doctest::Approx(one.phi_integral / 10.0).epsilon(1e-10));

    // two terms: closed form with the cross term 2 (n1 n2)^{-1/2} Re integral phi (n2/n1)^{it}
    const auto two = dirichlet_poly_meansq(T, G, 10.0, 11.0);
    const SmoothBump phi(T, G);
    const double xi = std::log(11.0 / 10.0);
    const auto cross = integrate_scaled([&](double t) { return phi(t) * std::cos(t * xi); }, T - 2.0 * G, T + 2.0 * G,
                                        [](double) { return 0.5; });
    const double closed = phi.integral() * (1.0 / 10.0 + 1.0 / 11.0) + 2.0 / std::sqrt(110.0) * cross.value;
    CHECK(two.value == doctest::Approx(closed).epsilon(1e-8));
    CHECK(two.value <= two.diagonal + std::fabs(two.off_diagonal) * (1.0 + 1e-12));
}

TEST_CASE("saddle point: residual and asymptotics") {
    OscIntegralSpec s;
    s.t = 1e6;
    s.ell = 2;
    s.m = 3;
    s.N = 200.0;
    s.N1 = 400.0;
    s.G = 50.0;
    const auto r = saddle_point(s);
    CHECK(std::fabs(r.Fp_at_x0) <= 1e-9 * r.Fpp_at_x0 * r.x0);
    CHECK(std::fabs(osc_phase_d1(s, r.x0)) <= 1e-9 * r.Fpp_at_x0 * r.x0);

    OscIntegralSpec big = s;
    big.t = 1e8;
    big.ell = 1;
    big.m = 1;
    const auto b = saddle_point(big);
    const double ratio = b.x0 / std::sqrt(big.t / kTwoPi);
    CHECK(ratio >= 0.99);
    CHECK(ratio <= 1.01);
    const double fpp = b.Fpp_at_x0 * std::pow(b.x0, 3) / big.t;
    CHECK(fpp / 2.0 >= 0.9);
    CHECK(fpp / 2.0 <= 1.1);
}

TEST_CASE("stationary phase: separated saddle, far saddle, linearity") {
    OscIntegralSpec s;
    s.t = 1e6;
    s.ell = 1;
    s.m = 1;
    s.N = 2.0;
    s.N1 = 3.0;
    s.G = 1.0;
    const double x0 = saddle_point(s).x0;
    s.N = 0.92 * x0;
    s.N1 = 1.08 * x0;
    s.G = 0.04 * x0;
    const auto e = stationary_phase_eval(s);
    CHECK(e.saddle_in_support);
    CHECK(e.rel_gap <= 0.05);

    auto twice = s;
    twice.weight_scale = 2.0;
    const auto e2 = stationary_phase_eval(twice);
    CHECK(e2.sp_value == 2.0 * e.sp_value);
    CHECK(std::abs(e2.direct - 2.0 * e.direct) <= 1e-9 * std::abs(e.direct));

    OscIntegralSpec far = s;
    far.m = 3;
    far.N = x0 - 80.0;
    far.N1 = x0 + 80.0;
    far.G = 40.0;
    const auto f = stationary_phase_eval(far);
    CHECK_FALSE(f.saddle_in_support);
    CHECK(std::abs(f.direct) <= 1e-6 * (far.N1 - far.N));
}

TEST_CASE("pipeline comparison") {
    PipelineOptions empty;
    empty.k_cap = 4;
    empty.N_lo = 5.0;
    empty.N_hi = 6.0;
    const auto none = pipeline_compare(1e5, std::cbrt(1e5), empty);
    for (double v : none.a) CHECK(v == 0.0);
    for (double v : none.b) CHECK(v == 0.0);

    PipelineOptions opt;
    opt.k_cap = 50;
    const auto p = pipeline_compare(1e5, std::cbrt(1e5), opt);
    CHECK(p.correlation >= 0.9);
    REQUIRE(p.b[0] != 0.0);
    CHECK(std::fabs(p.a[0] - p.b[0]) <= 0.1 * std::fabs(p.b[0]));
}
