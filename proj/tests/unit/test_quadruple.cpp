#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "zetalab/errors.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/quadruple.hpp"

using namespace zetalab;

namespace {

bool perfect_square(std::uint64_t x, std::uint64_t& r) {
    r = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(x))));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r * r == x;
}

// sqrt m + sqrt n = sqrt k + sqrt l decided by squaring:
// with a = m + n - k - l, the identity is 2 sqrt(kl) - 2 sqrt(mn) = a.
bool zero_by_squaring(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t l) {
    const auto a = static_cast<std::int64_t>(m + n) - static_cast<std::int64_t>(k + l);
    if (a == 0) return m * n == k * l;
    std::uint64_t s, u;
    if (!perfect_square(m * n, s) || !perfect_square(k * l, u)) return false;
    return 2 * static_cast<std::int64_t>(u) - 2 * static_cast<std::int64_t>(s) == a;
}

// Every quadruple in (K, K']^4, no pruning.
std::vector<Quadruple> literal_loop(std::uint64_t K, std::uint64_t Kp) {
    std::vector<Quadruple> out;
    for (auto m = K + 1; m <= Kp; ++m)
        for (auto n = K + 1; n <= Kp; ++n)
            for (auto k = K + 1; k <= Kp; ++k)
                for (auto l = K + 1; l <= Kp; ++l)
                    if (zero_by_squaring(m, n, k, l)) out.push_back({m, n, k, l});
    return out;
}

}  // namespace

TEST_CASE("D and E: exact zeros and a high-precision reference") {
    CHECK(compute_DE(1, 4, 4, 1).exact_zero);
    CHECK(compute_DE(1, 4, 4, 1).D == 0.0);
    CHECK(compute_DE(1, 9, 4, 4).exact_zero);
    const auto v = compute_DE(2, 3, 5, 7);
    CHECK_FALSE(v.exact_zero);
    // 50-digit values from tests/oracles/oracles.py
    CHECK(std::fabs(v.D - (-8.700782062387665819)) <= 1e-12);
    CHECK(v.E == doctest::Approx(-28.44907104803865764).epsilon(1e-13));
    CHECK(kDScale == doctest::Approx(2.0 * std::sqrt(kTwoPi)).epsilon(1e-16));
}

TEST_CASE("classification examples") {
    CHECK(classify_diagonal({5, 7, 5, 7}).cls == DiagClass::Pair);
    CHECK(classify_diagonal({5, 7, 7, 5}).cls == DiagClass::SwappedPair);
    const auto f = classify_diagonal({2, 18, 8, 8});
    REQUIRE(f.cls == DiagClass::SquarefreeFamily);
    REQUIRE(f.witness);
    CHECK(f.witness->h == 2);
    CHECK(f.witness->alpha == 1);
    CHECK(f.witness->beta == 3);
    CHECK(f.witness->gamma == 2);
    CHECK(f.witness->delta == 2);
    CHECK(classify_diagonal({2, 3, 5, 7}).cls == DiagClass::NotDiagonal);
}

TEST_CASE("brute force diagonal against the literal quadruple loop") {
    const auto tiny = brute_force_diagonal(1, 2);
    REQUIRE(tiny.size() == 1);
    CHECK(tiny[0] == Quadruple{2, 2, 2, 2});

    const auto r48 = brute_force_diagonal(4, 8);
    CHECK(std::find(r48.begin(), r48.end(), Quadruple{5, 8, 8, 5}) != r48.end());
    CHECK(r48 == literal_loop(4, 8));

    for (std::uint64_t K : {9, 16, 25}) {
        const auto lit = literal_loop(K, 2 * K);
        CHECK(brute_force_diagonal(K, 2 * K) == lit);
        CHECK(enumerate_diagonal_families(K, 2 * K) == lit);
    }
}

TEST_CASE("l uniqueness") {
    // from the family (1, 3, 2, 2) h = 2 inside (1, 18]
    const auto fam = ell_uniqueness(2, 18, 8, 1, 18, 0.1);
    REQUIRE(fam.ell);
    CHECK(*fam.ell == 8);

    // scan coded from the window definition
    const double w = 0.05 / std::sqrt(100.0) / (2.0 * std::sqrt(kTwoPi));
    CHECK(d_window(100, 0.05) == doctest::Approx(w).epsilon(1e-15));
    std::vector<std::uint64_t> scan;
    const long double s = std::sqrt(101.0L) + std::sqrt(103.0L) - std::sqrt(107.0L);
    for (std::uint64_t l = 101; l <= 200; ++l)
        if (std::fabs(static_cast<double>(s - std::sqrt(static_cast<long double>(l)))) <= w) scan.push_back(l);
    const auto got = ell_uniqueness(101, 103, 107, 100, 200, 0.05);
    CHECK(ell_scan(101, 103, 107, 100, 200, 0.05) == scan);
    CHECK(got.ell.has_value() == !scan.empty());
    if (got.ell) CHECK(*got.ell == scan.front());

    // shrinking eta shrinks the accepted set
    std::size_t prev = 1000;
    for (double eta : {0.5, 0.1, 0.01, 1e-4}) {
        std::size_t n = 0;
        for (std::uint64_t m = 101; m <= 140; ++m)
            for (std::uint64_t k = 101; k <= 140; ++k) n += ell_scan(m, 150, k, 100, 200, eta).size();
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("near-integer counting") {
    const auto all = near_integer_count(1000, 0.4999999, 5, 1);
    CHECK(all.max_count == 1000.0);
    CHECK(all.floor_identity_ok);
    const auto tiny = near_integer_count(1000, 1e-9, 20, 1);
    CHECK(tiny.max_count <= 2.0);
    // direct scan for the first sample
    const auto& smp = tiny.samples.front();
    std::uint64_t direct = 0;
    for (std::uint64_t k = 1001; k <= 2000; ++k) direct += near_integer_distance(smp[0], smp[1], k) <= 1e-9;
    CHECK(smp[2] == direct);
}

TEST_CASE("moment integrals") {
    const double T = 1e4;
    CHECK(moment_rhs(T, 12, 1, 0.0, 12) == 0.0);
    // single k = 13: d(13)^2 13^{-1/2} integral phi
    double phi = 0.0;
    for (double t = 0.5 * T; t <= 2.5 * T; t += 0.5) phi += 0.5 * moment_weight(t, T);
    CHECK(moment_rhs(T, 12, 1, 0.0, 13) == doctest::Approx(4.0 / std::sqrt(13.0) * phi).epsilon(1e-8));

    const auto m1 = moment_rhs_m1_decomposition(T, 16);
    CHECK(m1.rel_gap <= 0.05);
    CHECK(m1.bounds_hold);
}

TEST_CASE("quadruple sum equals the fourth-moment integral") {
    const double T = 1e4;
    const auto q = quadruple_moment_sum(T, 8);
    CHECK_FALSE(q.partial);
    CHECK(q.diagonal >= 0.0);
    CHECK(std::fabs(q.total.imag()) <= 1e-8 * std::fabs(q.total.real()));
    const double direct = moment_rhs(T, 8, 2);
    CHECK(std::fabs(q.total.real() - direct) <= 0.02 * direct);
}

TEST_CASE("restricted saddle sum") {
    CHECK(restricted_saddle_sum(1e5, 50, 1e-9).count == 0);
    const auto r = restricted_saddle_sum(1e5, 60, 0.1);
    CHECK(r.count > 0);
    CHECK(std::abs(r.value) <= r.abs_sum * (1.0 + 1e-12));
    double majorant = 0.0;
    for (const auto& t : r.terms) majorant += std::abs(t.term);
    CHECK(r.abs_sum == doctest::Approx(majorant).epsilon(1e-12));
}
