#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "zetalab/errors.hpp"
#include "zetalab/experiments.hpp"
#include "zetalab/expsum.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/phase.hpp"

using namespace zetalab;

TEST_CASE("exponential sum: equal heights and a single term") {
    ExpSumInstance same{1.5e5, 1.5e5, 1000, 2000, 1e5};
    CHECK(std::abs(exp_sum_S(same) - 1000.0) <= 1e-9);

    ExpSumInstance one{1.2e5, 1.3e5, 500, 501, 1e5};
    const auto s = exp_sum_S(one);
    CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-14));
    const double expect = f_phase(1.2e5, 501.0) - f_phase(1.3e5, 501.0);
    CHECK(std::abs(s - std::polar(1.0, expect)) <= 1e-9);
}

TEST_CASE("exponential sum: two implementations agree") {
    ExpSumInstance inst{1e5 + 10.0, 1e5, 1000, 2000, 1e5};
    const auto a = exp_sum_S(inst), b = exp_sum_S_reference(inst);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
    CHECK(std::abs(a) <= 1000.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        ExpSumInstance r{1e5 * (1.0 + u(rng)), 1e5 * (1.0 + u(rng)), 16 + std::uint64_t(4000 * u(rng)), 0, 1e5};
        r.K_prime = 2 * r.K;
        const auto x = exp_sum_S(r), y = exp_sum_S_reference(r);
        REQUIRE(std::abs(x - y) <= 1e-10 * std::max(1.0, std::abs(y)));
    }
    ExpSumInstance bad{1e6, 1e5, 10, 20, 1e5};
    CHECK_THROWS_AS(validate_instance(bad), DomainError);
}

TEST_CASE("exponent pair bound") {
    ExpSumInstance inst{1e5 + 40.0, 1e5, 1000, 2000, 1e5};
    const auto b = exponent_pair_bound(inst);
    const double F = 40.0 / std::sqrt(1000.0 * 1e5);
    CHECK(b.F == doctest::Approx(F).epsilon(1e-14));
    CHECK(b.bound == doctest::Approx(std::sqrt(F * 1000.0) + 1.0 / F).epsilon(1e-14));

    // doubling K with F held fixed: first term grows by sqrt 2
    ExpSumInstance dbl{1e5 + 40.0 * std::sqrt(2.0), 1e5, 2000, 4000, 1e5};
    const auto b2 = exponent_pair_bound(dbl);
    CHECK(b2.F == doctest::Approx(F).epsilon(1e-14));
    CHECK(b2.bound - 1.0 / b2.F == doctest::Approx(std::sqrt(2.0) * (b.bound - 1.0 / b.F)).epsilon(1e-13));

    ExpSumInstance same{1e5, 1e5, 1000, 2000, 1e5};
    CHECK(exponent_pair_bound(same).trivial);
}

TEST_CASE("first-derivative test: linear phase closed form, weight scaling") {
    const double alpha = 37.0;
    OscillatoryIntegrand f;
    f.phase = [=](double x) { return alpha * x; };
    f.d1 = [=](double) { return alpha; };
    f.d2 = [](double) { return 0.0; };
    f.weight = [](double) { return 1.0; };
    f.weight_sup = 1.0;
    const auto r = first_derivative_test(f);
    const double closed = std::abs((std::polar(1.0, alpha) - 1.0) / alpha);
    CHECK(r.direct == doctest::Approx(closed).epsilon(1e-10));
    CHECK(r.direct <= 2.0 / alpha);
    CHECK(r.holds);
    auto half = f;
    half.weight = [](double) { return 0.5; };
    half.weight_sup = 0.5;
    CHECK(first_derivative_test(half).bound == r.bound / 2.0);

    auto bad = f;
    bad.d1 = [](double x) { return x - 0.5; };
    bad.phase = [](double x) { return 0.5 * x * x - 0.5 * x; };
    CHECK_THROWS_AS(first_derivative_test(bad), DomainError);
}

TEST_CASE("first-derivative test on a phase difference") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const double k = 1 + rng() % 60, m = k + 1 + rng() % 60;
        OscillatoryIntegrand f;
        f.a = 1e4;
        f.b = 2e4;
        f.phase = [=](double t) { return f_phase(t, k) - f_phase(t, m); };
        f.d1 = [=](double t) { return f_phase_dt(t, k) - f_phase_dt(t, m); };
        f.d2 = [](double) { return 0.0; };
        f.weight = [](double) { return 1.0; };
        f.weight_sup = 1.0;
        const auto r = first_derivative_test(f);
        const double m1 = 2.0 * std::fabs(arsinh(std::sqrt(kPi * k / 4e4)) - arsinh(std::sqrt(kPi * m / 4e4)));
        CHECK(r.m == doctest::Approx(m1).epsilon(1e-10));
        CHECK(r.direct <= r.bound);
    }
}

TEST_CASE("second-derivative test") {
    OscillatoryIntegrand f;
    f.a = 0.0;
    f.b = 3.0;
    f.phase = [](double x) { return 50.0 * x * x; };
    f.d1 = [](double x) { return 100.0 * x; };
    f.d2 = [](double) { return 100.0; };
    f.weight = [](double) { return 1.0; };
    f.weight_sup = 1.0;
    const auto r = second_derivative_test(f);
    CHECK(r.bound == doctest::Approx(8.0 / 10.0));
    CHECK(r.direct <= r.bound);
    // Fresnel: integral_0^inf e^{i 50 x^2} = sqrt(pi / 200) e^{i pi / 4}
    CHECK(r.direct == doctest::Approx(std::sqrt(kPi / 200.0)).epsilon(2e-2));
}

TEST_CASE("oscillatory integral I(T)") {
    const double T = 1e4;
    // E = 0: linear phase, first-derivative bound with min |g'| = D
    for (double D : {0.5, 2.0, 8.0}) {
        const auto r = osc_integral_IT(D, 0.0, T);
        CHECK(std::abs(r.direct) <= kFirstDerivativeC * 2.0 * std::sqrt(2.0 * T) / D);
    }
    // saddle regime, x* = sqrt(E / D) in the middle of the range
    const double D = 1.0, E = 1.5 * T * D;
    const auto s = osc_integral_IT(D, E, T);
    CHECK(s.in_regime);
    CHECK(s.has_saddle);
    CHECK(std::abs(s.direct) <= kSaddleRegimeC * s.saddle_bound);
    CHECK(std::abs(s.sp_reconstruction - osc_IT_stationary(D, E, T)) == 0.0);

    const auto n = osc_integral_IT(10.0, 100.0, T);
    CHECK(n.negligible);
    CHECK(std::abs(n.direct) <= 1e-3 * std::sqrt(T));
}

TEST_CASE("twelfth-moment walkthrough: J scaling and large-value monotonicity") {
    const double T = 1e4, G = std::cbrt(T);
    const auto r = twelfth_moment_walkthrough(T, G);
    const auto& lv = r.get_series("large_values");
    std::size_t col = 0;
    while (col < lv.columns.size() && lv.columns[col] != "count") ++col;
    REQUIRE(col < lv.columns.size());
    for (std::size_t i = 1; i < lv.rows.size(); ++i) CHECK(lv.rows[i][col] <= lv.rows[i - 1][col]);
    const double J = std::pow(T, -0.05) * G * G * G;
    CHECK(r.scalar("J") == doctest::Approx(J).epsilon(1e-14));
}
