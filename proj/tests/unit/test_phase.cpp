#include "doctest.h"

#include <cmath>
#include <vector>

#include "zetalab/errors.hpp"
#include "zetalab/experiments.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/phase.hpp"

using namespace zetalab;

// Reference values: tests/oracles/oracles.py (mpmath at 50 digits, sympy series).
TEST_CASE("f_phase closed form and references") {
    const double at2pi = 4.0 * kPi * std::log((1.0 + std::sqrt(5.0)) / 2.0) + kPi * std::sqrt(5.0) - kPi / 4.0;
    CHECK(f_phase(kTwoPi, 1.0) == doctest::Approx(at2pi).epsilon(1e-14));
    CHECK(f_phase(1e4, 3.0) == doctest::Approx(867.6043002982790883).epsilon(1e-13));
    CHECK(f_phase(1e8, 7.0) == doctest::Approx(132637.5179116912247).epsilon(1e-14));
    for (int k = 1; k < 100; ++k) REQUIRE(f_phase(1e3, k + 1.0) > f_phase(1e3, k));
}

TEST_CASE("f_phase_dt") {
    CHECK(f_phase_dt(1e4, 10.0) == doctest::Approx(0.07924580867389366800).epsilon(1e-13));
    const double h = 1e-3;
    const double fd = (f_phase(1e4 + h, 10.0) - f_phase(1e4 - h, 10.0)) / (2.0 * h);
    CHECK(f_phase_dt(1e4, 10.0) == doctest::Approx(fd).epsilon(1e-5));
    CHECK(f_phase_dt(1e12, 1.0) > 0.0);
    CHECK(f_phase_dt(1e12, 1.0) < 1e-5);
    const double ratio = f_phase_dt(1e6, 5.0) / std::sqrt(kTwoPi * 5.0 / 1e6);
    CHECK(ratio >= 0.999);
    CHECK(ratio <= 1.001);
}

TEST_CASE("Taylor coefficients match the series expansion") {
    // exact: sqrt2 pi^{3/2} / 6, -sqrt2 pi^{5/2} / 80, sqrt2 pi^{7/2} / 448
    const double a3 = std::sqrt(2.0) * std::pow(kPi, 1.5) / 6.0;
    const double a5 = -std::sqrt(2.0) * std::pow(kPi, 2.5) / 80.0;
    const double a7 = std::sqrt(2.0) * std::pow(kPi, 3.5) / 448.0;
    CHECK(kTaylorA3 == doctest::Approx(a3).epsilon(1e-15));
    CHECK(kTaylorA5 == doctest::Approx(a5).epsilon(1e-9));
    CHECK(kTaylorA7 == doctest::Approx(a7).epsilon(1e-6));
}

TEST_CASE("f_taylor remainder and scaling") {
    const double t = 1e6, k = 10.0;
    CHECK(std::fabs(f_phase(t, k) - f_taylor(t, k, 2)) <= 2.0 * std::pow(k, 2.5) * std::pow(t, -1.5));
    const auto a = taylor_terms(t, k), b = taylor_terms(4.0 * t, k);
    CHECK(b[1] / a[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(taylor_dominance(1e6, 10.0) > 1.0);
}

TEST_CASE("a5 refit on disjoint grids agrees to 1e-6 relative") {
    const auto f1 = fit_taylor_coefficients(1.0, 1e3, 9);
    const auto f2 = fit_taylor_coefficients(3.0, 5e3, 9);
    CHECK(f1.a5 == doctest::Approx(f2.a5).epsilon(1e-6));
    CHECK(f1.a5 == doctest::Approx(kTaylorA5).epsilon(1e-6));
}

TEST_CASE("divisor expression: empty range and weight forms") {
    SamplePointSet single;
    single.T = 1e4;
    single.G = std::cbrt(1e4);
    single.centers = {1.5e4};
    DivisorSumSpec empty{1e4, single.G, 0.05, 0};
    CHECK(divisor_expression(empty, single, WeightForm::Full).value == 0.0);

    const auto spec = make_divisor_spec(1e4, single.G);
    CHECK(spec.k_max == divisor_k_max(1e4, single.G, 0.05));
    const auto full = divisor_expression(spec, single, WeightForm::Full, true, 1e-11);
    const auto simp = divisor_expression(spec, single, WeightForm::Simplified, true, 1e-11);
    double l1 = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < full.k_terms.size(); ++k) {
        l1 += std::fabs(full.k_terms[k]);
        diff += full.k_terms[k] - simp.k_terms[k];
    }
    CHECK(std::fabs(diff) / l1 <= 3.0 * double(spec.k_max) / 1e4);
}

TEST_CASE("smoothed integral against main term and divisor expression") {
    const double T = 1.5e4, G = std::cbrt(T);
    const auto a = atkinson_comparison(T, G);
    const double res = a.smoothed - a.main_term + std::sqrt(2.0) * a.divisor_full;
    CHECK(std::fabs(res) <= kAtkinsonRemainderC * G * std::pow(T, 0.05));
}

TEST_CASE("essential sum: naive loop, orders, sign and plateau weight") {
    SamplePointSet one;
    one.T = 1e4;
    one.G = 20.0;
    one.centers = {1.3e4};
    DivisorSumSpec spec{1e4, 20.0, 0.05, 300};
    const double tau = 1.3e4 + 7.0;  // on the plateau, phi = 1
    const std::vector<double> taus = {tau};

    // naive oracle with its own divisor count and phase
    long double acc = 0.0L;
    for (int k = 1; k <= 300; ++k) {
        int dk = 0;
        for (int j = 1; j <= k; ++j) dk += k % j == 0;
        const long double kk = k, t = tau;
        const long double f = 2.0L * t * std::asinh(std::sqrt(3.141592653589793238L * kk / (2.0L * t))) +
                              std::sqrt(2.0L * 3.141592653589793238L * kk * t +
                                        3.141592653589793238L * 3.141592653589793238L * kk * kk) -
                              3.141592653589793238L / 4.0L;
        acc += dk * std::pow(kk, -0.25L) * std::sin(f);
    }
    const double expect = 20.0 * std::pow(tau, -0.25) * static_cast<double>(acc);
    const double got = essential_sum(spec, one, taus);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    CHECK(essential_sum(spec, one, taus, SumOrder::KOuter) == doctest::Approx(got).epsilon(1e-13));
    CHECK(essential_sum(spec, one, taus, SumOrder::ROuter, -1.0) == -got);
    const std::vector<double> outside = {1.3e4 + 45.0};
    CHECK_THROWS_AS(essential_sum(spec, one, outside), DomainError);
}
