#include "doctest.h"

#include <cmath>
#include <random>

#include "zetalab/errors.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/zeta.hpp"

using namespace zetalab;

// Reference values: tests/oracles/oracles.py (mpmath, 30 digits).
TEST_CASE("zeta values against high-precision references") {
    CHECK(zeta_abs2_critical(100.0) == doctest::Approx(7.250617438969464822).epsilon(1e-10));
    CHECK(zeta_abs2_euler_maclaurin(100.0) == doctest::Approx(7.250617438969464822).epsilon(1e-12));
    CHECK(zeta_abs2_critical(5000.5) == doctest::Approx(0.3427228044147949631).epsilon(1e-8));
    CHECK(riemann_siegel_z(1000.0) == doctest::Approx(0.9977946375215866140).epsilon(1e-8));
    CHECK(rs_theta(100.0) == doctest::Approx(87.97216523178721963).epsilon(1e-14));
}

TEST_CASE("zeta(2) and zeta(-1) by Euler-Maclaurin") {
    CHECK(std::abs(zeta_euler_maclaurin({2.0, 0.0}) - kPi * kPi / 6.0) < 1e-13);
    CHECK(std::abs(zeta_euler_maclaurin({-1.0, 0.0}) + 1.0 / 12.0) < 1e-12);
}

TEST_CASE("Riemann-Siegel against Euler-Maclaurin at 1e-6 absolute") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(std::log(10.0), std::log(2e4));
    for (int i = 0; i < 60; ++i) {
        const double t = std::exp(u(rng));
        const double rs = riemann_siegel_z(std::max(t, kTwoPi));
        REQUIRE(std::fabs(rs * rs - zeta_abs2_euler_maclaurin(t)) <= 1e-6);
    }
}

TEST_CASE("first zero: Z changes sign and |zeta|^2 vanishes at the bisected root") {
    double lo = 14.0, hi = 14.3;
    REQUIRE(critical_point(lo).z_value * critical_point(hi).z_value < 0.0);
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (critical_point(lo).z_value * critical_point(mid).z_value <= 0.0 ? hi : lo) = mid;
    }
    CHECK(lo == doctest::Approx(14.134725141734693790).epsilon(1e-13));
    CHECK(zeta_abs2_euler_maclaurin(lo) < 1e-8);
}

TEST_CASE("zeta_abs2 is nonnegative, domain is enforced") {
    for (double t = 0.0; t < 400.0; t += 3.7) CHECK(zeta_abs2_critical(t) >= 0.0);
    CHECK_THROWS(zeta_abs2_critical(-1.0));
    CHECK_THROWS(zeta_abs2_critical(2e8));
}

TEST_CASE("chi has unit modulus on the critical line") {
    CHECK(std::fabs(chi_modulus_check(10.0) - 1.0) <= 1e-8);
    CHECK(std::fabs(chi_modulus_check(100.0) - 1.0) <= 1e-8);
    CHECK(std::abs(chi_critical(0.0) - 1.0) <= 1e-12);
    for (double t = 1.0; t <= 1e4; t *= 1.3) REQUIRE(std::fabs(chi_modulus_check(t) - 1.0) <= 1e-8);
}

TEST_CASE("mean square integrals") {
    CHECK(integrate_mean_square(50.0, 50.0).value == 0.0);
    const double whole = integrate_mean_square(100.0, 110.0).value;
    const double parts = integrate_mean_square(100.0, 105.0).value + integrate_mean_square(105.0, 110.0).value;
    CHECK(whole == doctest::Approx(parts).epsilon(1e-8));
    CHECK(whole == doctest::Approx(55.1915454865789028).epsilon(1e-9));
    CHECK(integrate_mean_square_simpson(100.0, 110.0).value == doctest::Approx(whole).epsilon(1e-6));
}

TEST_CASE("error term") {
    CHECK(mean_square_main_term(kTwoPi) == doctest::Approx(kTwoPi * (2.0 * kEulerGamma - 1.0)).epsilon(1e-14));
    const auto e100 = error_term(100.0);
    CHECK(e100.e_value == doctest::Approx(e100.integral - e100.main_term).epsilon(1e-15));
    CHECK(e100.e_value == doctest::Approx(3.4626541165379698).epsilon(1e-8));
    const auto alt = error_term(100.0, QuadratureScheme::Simpson);
    CHECK(alt.integral == doctest::Approx(e100.integral).epsilon(1e-6));
    const auto e1000 = error_term(1000.0);
    CHECK(e1000.integral > e100.integral);
    CHECK(std::fabs(e1000.e_value) < std::sqrt(1000.0));
}
