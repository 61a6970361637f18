#include "doctest.h"

#include <cmath>

#include "zetalab/errors.hpp"
#include "zetalab/intervals.hpp"
#include "zetalab/zeta.hpp"

using namespace zetalab;

TEST_CASE("point sets: invariants, singleton, truncation") {
    const auto p = build_point_set(1e4, 20.0, 10, 1);
    CHECK(p.size() == 10);
    CHECK(validate_point_set(p).ok);
    CHECK(supports_disjoint(p));

    const auto one = build_point_set(1e4, 20.0, 1, 3);
    REQUIRE(one.size() == 1);
    CHECK(one.centers[0] >= 1e4);
    CHECK(one.centers[0] <= 2e4);

    const auto full = build_point_set(1e4, 20.0, 1'000'000'000, 1);
    CHECK(full.truncated);
    CHECK(full.size() <= 1e4 / (5.0 * 20.0) + 1.0);
    CHECK(validate_point_set(full).ok);
}

TEST_CASE("point sets: validation rejects bad sets and JSON round-trips") {
    auto p = build_point_set(1e4, 20.0, 5, 2);
    CHECK(point_set_from_json(point_set_to_json(p)).centers == p.centers);
    auto close = p;
    close.centers[1] = close.centers[0] + 10.0;
    CHECK_FALSE(validate_point_set(close).ok);
    CHECK_THROWS(build_point_set(1e4, 40.0, 5, 1));  // G above T^{1/3}
}

TEST_CASE("interval sums") {
    SamplePointSet empty;
    empty.T = 1e4;
    empty.G = 20.0;
    CHECK(smoothed_sum(empty) == 0.0);
    CHECK(classical_sum(empty) == 0.0);

    const auto p = build_point_set(1e4, 20.0, 4, 5);
    const auto s = interval_sums(p);
    CHECK(s.classical <= s.smoothed);

    // singleton classical sum is the plain mean square over [t - G, t + G]
    SamplePointSet single;
    single.T = 1e4;
    single.G = 5.0;
    single.centers = {12345.6};
    const double direct = integrate_mean_square(12345.6 - 5.0, 12345.6 + 5.0).value;
    CHECK(classical_sum(single) == doctest::Approx(direct).epsilon(1e-9));
    CHECK(smoothed_sum(single) >= direct);
}

TEST_CASE("smoothed sum reproduced by doubled-resolution Simpson") {
    const auto p = build_point_set(1e4, 21.0, 8, 7);
    double alt = 0.0;
    for (double c : p.centers) alt += smoothed_term_simpson(c, p.G);
    CHECK(smoothed_sum(p) == doctest::Approx(alt).epsilon(1e-6));
}

TEST_CASE("local mean square bound") {
    CHECK(local_mean_square_bound(100.0).ratio < 1.0);
    CHECK(local_mean_square_bound(14.134725141734694).ratio < 1e-12);
}

TEST_CASE("large values") {
    const auto all = select_large_values_in(1e4, 1e4 + 20.0, 0.0);
    REQUIRE(all.points.size() >= 2);
    for (std::size_t i = 1; i < all.points.size(); ++i)
        CHECK(all.points[i] - all.points[i - 1] == doctest::Approx(1.0));
    CHECK(select_large_values(1e4, 1e6).points.empty());

    const auto big = select_large_values_in(1e4, 1.1e4, 3.0);
    CHECK_FALSE(big.points.empty());
    for (double t : big.points) CHECK(std::sqrt(zeta_abs2_euler_maclaurin(t)) >= 3.0 * (1.0 - 1e-9));
    const auto counts = large_value_counts(1e4, 1.1e4, {1.0, 2.0, 3.0, 4.0});
    for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] <= counts[i - 1]);
}
