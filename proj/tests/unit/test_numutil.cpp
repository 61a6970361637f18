#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "zetalab/errors.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/quadrature.hpp"

using namespace zetalab;

namespace {

// Trial division, for cross-checking the sieve.
std::uint32_t divisors_naive(std::uint64_t n) {
    std::uint32_t c = 0;
    for (std::uint64_t i = 1; i * i <= n; ++i)
        if (n % i == 0) c += (i * i == n) ? 1 : 2;
    return c;
}

}  // namespace

TEST_CASE("divisor sieve: small values and trial division") {
    const auto d = divisor_sieve(5000);
    CHECK(d(1) == 1);
    CHECK(d(12) == 6);
    CHECK(d(36) == 9);
    for (std::uint64_t n = 1; n <= 5000; ++n) REQUIRE(d(n) == divisors_naive(n));
    CHECK_THROWS_AS(d(0), DomainError);
    CHECK_THROWS_AS(d(5001), DomainError);
    CHECK_THROWS_AS(divisor_sieve(0), SizeError);
    CHECK_THROWS_AS(divisor_sieve(DivisorTable::kMaxLimit + 1), SizeError);
}

TEST_CASE("arsinh") {
    CHECK(arsinh(0.0) == 0.0);
    CHECK(arsinh(1.0) == doctest::Approx(std::log(1.0 + std::sqrt(2.0))).epsilon(1e-15));
    CHECK(arsinh(-0.37) == -arsinh(0.37));
    // relative accuracy across the small-argument range, against the library asinh
    for (double x = 1e-9; x < 1e3; x *= 1.7)
        REQUIRE(std::fabs(arsinh(x) - std::asinh(x)) <= 4e-16 * std::asinh(x));
}

TEST_CASE("dist_nearest_int") {
    CHECK(dist_nearest_int(2.3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(dist_nearest_int(2.5) == 0.5);
    CHECK(dist_nearest_int(-0.2) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(dist_nearest_int(7.0) == 0.0);
}

TEST_CASE("sawtooth psi") {
    CHECK(sawtooth_psi(0.25, 50).exact == -0.25);
    const auto half = sawtooth_psi(0.5, 1001);
    CHECK(std::fabs(half.fourier) <= half.error_bound);
    const auto v = sawtooth_psi(0.1, 10000);
    CHECK(std::fabs(v.exact - v.fourier) <= v.error_bound);
    // direct summation of the truncated series
    double direct = 0.0;
    for (int n = 10000; n >= 1; --n) direct += std::sin(kTwoPi * n * 0.1) / n;
    CHECK(v.fourier == doctest::Approx(-direct / kPi).epsilon(1e-12));
    const auto at_int = sawtooth_psi(3.0, 10);
    CHECK(at_int.integral_input);
    CHECK(at_int.exact == -0.5);
    CHECK_THROWS_AS(sawtooth_psi(0.3, 2), DomainError);
}

TEST_CASE("squarefree core and isqrt") {
    CHECK(squarefree_core(18).a == 3);
    CHECK(squarefree_core(18).h == 2);
    CHECK(squarefree_core(1).h == 1);
    CHECK(squarefree_core(720).a == 12);
    CHECK(squarefree_core(720).h == 5);
    CHECK(isqrt(0) == 0);
    CHECK(isqrt(99) == 9);
    CHECK(isqrt(100) == 10);
    CHECK(isqrt(~std::uint64_t{0}) == 4294967295u);
}

TEST_CASE("compensated sum recovers cancelled mass") {
    std::vector<double> xs = {1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_sum(xs) == 2.0);
}

TEST_CASE("smooth bump: plateau, support edge and transition formula") {
    const double c = 1000.0, G = 10.0;
    const SmoothBump b(c, G);
    CHECK(bump_eval(b, c, 0) == 1.0);
    CHECK(bump_eval(b, c + G, 0) == 1.0);
    CHECK(bump_eval(b, c + 2.0 * G, 0) == 0.0);
    CHECK(bump_eval(b, c - 2.5 * G, 0) == 0.0);
    // Falling ramp on the right: 1 - s(u), u = (t - (c + G)) / G, s(u) = h(u) / (h(u) + h(1-u)).
    for (double f : {1.1, 1.3, 1.5, 1.77, 1.95}) {
        const double u = f - 1.0;
        const double h0 = std::exp(-1.0 / u), h1 = std::exp(-1.0 / (1.0 - u));
        const double expect = 1.0 - h0 / (h0 + h1);
        const double got = bump_eval(b, c + f * G, 0);
        CHECK(got > 0.0);
        CHECK(got < 1.0);
        CHECK(got == doctest::Approx(expect).epsilon(1e-13));
    }
    CHECK(bump_eval(b, c + 1.5 * G, 0) == doctest::Approx(0.5).epsilon(1e-15));
    // symmetric ramps integrate to the plateau plus one ramp width
    CHECK(b.integral() == doctest::Approx(3.0 * 2.0 * G / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(bump_eval(b, c, SmoothWindow::kMaxDerivative + 1), DomainError);
}

TEST_CASE("smooth window derivatives match finite differences") {
    const SmoothWindow w(10.0, 20.0, 3.0, 5.0);
    const double h = 1e-4;
    for (double t : {7.4, 8.2, 9.5, 21.0, 23.3, 24.6}) {
        for (int order = 1; order <= 3; ++order) {
            const double fd = (w.eval(t + h, order - 1) - w.eval(t - h, order - 1)) / (2.0 * h);
            CHECK(w.eval(t, order) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
    }
    // numerical integral against the exact one
    const auto q = integrate_scaled([&](double t) { return w(t); }, 6.0, 26.0, [](double) { return 0.5; });
    CHECK(q.value == doctest::Approx(w.integral()).epsilon(1e-11));
}
