#include "zetalab/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "zetalab/errors.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/parallel.hpp"
#include "zetalab/quadrature.hpp"
#include "zetalab/zeta.hpp"

namespace zetalab {

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool g_in_window(double T, double G, double eps) {
    const double slack = 1e-12;
    return G >= std::pow(T, eps) * (1.0 - slack) && G <= std::cbrt(T) * (1.0 + slack);
}

}  // namespace

PointSetCheck validate_point_set(const SamplePointSet& p, double eps) {
    auto fail = [](std::string why) { return PointSetCheck{false, std::move(why)}; };
    if (!(p.T > 0.0) || !(p.G > 0.0)) return fail("T and G must be positive");
    if (!g_in_window(p.T, p.G, eps)) return fail("G outside [T^eps, T^(1/3)]");
    if (!(p.spacing_factor >= 5.0)) return fail("spacing factor below 5");
    const double gap = p.spacing_factor * p.G;
    for (std::size_t i = 0; i < p.centers.size(); ++i) {
        const double t = p.centers[i];
        if (!(t >= p.T && t <= 2.0 * p.T)) return fail("center " + std::to_string(i) + " outside [T, 2T]");
        if (i > 0 && !(t - p.centers[i - 1] >= gap))
            return fail("spacing violated between centers " + std::to_string(i - 1) + " and " +
                        std::to_string(i));
    }
    return {};
}

std::size_t point_set_capacity(double T, double G, double spacing_factor) {
    return static_cast<std::size_t>(std::floor(T / (spacing_factor * G))) + 1;
}

SamplePointSet build_point_set(double T, double G, std::uint64_t R_max, std::uint64_t seed,
                               double spacing_factor, bool check_g_window) {
    if (!(T >= 100.0)) throw DomainError("build_point_set: requires T >= 100");
    if (!(G > 0.0)) throw DomainError("build_point_set: requires G > 0");
    if (check_g_window && !g_in_window(T, G, 0.01)) throw DomainError("build_point_set: requires T^0.01 <= G <= T^(1/3)");
    if (!(spacing_factor >= 5.0)) throw DomainError("build_point_set: spacing factor below 5");

    SamplePointSet p;
    p.T = T;
    p.G = G;
    p.spacing_factor = spacing_factor;
    p.seed = seed;
    const std::size_t cap = point_set_capacity(T, G, spacing_factor);
    const std::size_t R = static_cast<std::size_t>(std::min<std::uint64_t>(R_max, cap));
    p.truncated = R_max > cap;
    if (R == 0) return p;

    // Sorted uniform offsets in the slack left after reserving R - 1 gaps.
    const double gap = spacing_factor * G;
    const double slack = std::max(0.0, T - static_cast<double>(R - 1) * gap);
    std::mt19937_64 rng(seed);
    std::vector<double> u(R);
    for (auto& x : u) x = unit_uniform(rng) * slack;
    std::sort(u.begin(), u.end());

    p.centers.reserve(R);
    for (std::size_t i = 0; i < R; ++i) {
        double t = T + u[i] + static_cast<double>(i) * gap;
        if (i > 0) {
            const double prev = p.centers.back();
            while (t - prev < gap) t = std::nextafter(t, 3.0 * T);
        }
        if (t > 2.0 * T) {
            p.truncated = true;
            break;
        }
        p.centers.push_back(std::max(t, T));
    }
    return p;
}

std::string point_set_to_json(const SamplePointSet& p) {
    nlohmann::json j;
    j["T"] = p.T;
    j["G"] = p.G;
    j["spacing_factor"] = p.spacing_factor;
    j["seed"] = p.seed;
    j["truncated"] = p.truncated;
    j["centers"] = p.centers;
    return j.dump(2);
}

SamplePointSet point_set_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        SamplePointSet p;
        p.T = j.at("T").get<double>();
        p.G = j.at("G").get<double>();
        p.spacing_factor = j.at("spacing_factor").get<double>();
        p.seed = j.at("seed").get<std::uint64_t>();
        p.truncated = j.at("truncated").get<bool>();
        p.centers = j.at("centers").get<std::vector<double>>();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("point set JSON: ") + e.what());
    }
}

bool supports_disjoint(const SamplePointSet& p) {
    // Supports are closed intervals of radius 2G; adjacent ones are disjoint iff
    // the right end of one lies strictly left of the next left end.
    for (std::size_t i = 1; i < p.centers.size(); ++i)
        if (!(p.centers[i - 1] + 2.0 * p.G < p.centers[i] - 2.0 * p.G)) return false;
    return true;
}

IntervalSums interval_sums(const SamplePointSet& p, double rel_tol) {
    struct Term {
        double plateau, shoulders, error;
    };
    const double G = p.G;
    auto terms = parallel_map(p.centers.size(), [&](std::size_t i) {
        const double c = p.centers[i];
        const SmoothBump bump(c, G);
        auto w = [&](double t) { return bump(t); };
        const auto mid = integrate_mean_square(c - G, c + G, rel_tol);
        const auto lo = integrate_weighted_mean_square(w, c - 2.0 * G, c - G, rel_tol);
        const auto hi = integrate_weighted_mean_square(w, c + G, c + 2.0 * G, rel_tol);
        return Term{mid.value, lo.value + hi.value,
                    mid.error_estimate + lo.error_estimate + hi.error_estimate};
    });
    IntervalSums out;
    for (const auto& t : terms) {
        // Shoulder values are sums of positive-weight Kronrod terms of a
        // nonnegative integrand, so each smoothed term dominates its plateau.
        const double s = t.plateau + std::max(0.0, t.shoulders);
        out.classical_terms.push_back(t.plateau);
        out.smoothed_terms.push_back(s);
        out.classical += t.plateau;
        out.smoothed += s;
        out.error_estimate += t.error;
    }
    return out;
}

double smoothed_sum(const SamplePointSet& p, double rel_tol) { return interval_sums(p, rel_tol).smoothed; }

double classical_sum(const SamplePointSet& p, double rel_tol) {
    const double G = p.G;
    auto terms = parallel_map(p.centers.size(), [&](std::size_t i) {
        return integrate_mean_square(p.centers[i] - G, p.centers[i] + G, rel_tol).value;
    });
    double s = 0.0;
    for (double x : terms) s += x;
    return s;
}

double smoothed_term_simpson(double center, double G, int steps_per_scale) {
    const SmoothBump bump(center, G);
    const double a = center - 2.0 * G, b = center + 2.0 * G;
    const double h = oscillation_scale(b) / steps_per_scale;
    auto n = static_cast<std::size_t>(std::ceil((b - a) / h));
    n += n % 2;
    return simpson_doubled([&](double t) { return bump(t) * zeta_abs2_critical(t); }, a, b, n).value;
}

LocalBound local_mean_square_bound(double t) {
    if (!(t >= 10.0 && t <= 1e6)) throw DomainError("local_mean_square_bound: requires 10 <= t <= 1e6");
    LocalBound b{};
    b.lhs = zeta_abs2_critical(t);
    b.rhs = std::log(t) * (integrate_mean_square(t - 1.0, t + 1.0, 1e-10).value + 1.0);
    b.ratio = b.lhs / b.rhs;
    return b;
}

namespace {

// |zeta| on the grid a, a + step, ..., in evaluation chunks.
std::vector<double> scan_abs_zeta(double a, double b, double scan_step) {
    if (!(scan_step > 0.0 && scan_step <= 0.5))
        throw DomainError("select_large_values: scan_step must lie in (0, 1/2]");
    if (!(a >= 0.0) || !(b >= a)) throw DomainError("select_large_values: bad interval");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / scan_step)) + 1;
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    auto values = parallel_map(chunks, [&](std::size_t c) {
        std::vector<double> v;
        for (std::size_t j = c * kChunk; j < std::min(count, (c + 1) * kChunk); ++j)
            v.push_back(std::sqrt(zeta_abs2_critical(a + static_cast<double>(j) * scan_step)));
        return v;
    });
    std::vector<double> out;
    out.reserve(count);
    for (auto& v : values) out.insert(out.end(), v.begin(), v.end());
    return out;
}

// Greedy left-to-right selection at mutual distance >= 1.
LargeValueSet greedy_select(const std::vector<double>& values, double a, double V, double scan_step) {
    LargeValueSet out;
    out.T = a;
    out.V = V;
    out.scan_step = scan_step;
    double last = -1e300;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double t = a + static_cast<double>(i) * scan_step;
        if (values[i] >= V && t - last >= 1.0) {
            out.points.push_back(t);
            out.values.push_back(values[i]);
            last = t;
        }
    }
    return out;
}

}  // namespace

LargeValueSet select_large_values_in(double a, double b, double V, double scan_step) {
    return greedy_select(scan_abs_zeta(a, b, scan_step), a, V, scan_step);
}

std::vector<std::size_t> large_value_counts(double a, double b, const std::vector<double>& Vs, double scan_step) {
    const auto values = scan_abs_zeta(a, b, scan_step);
    std::vector<std::size_t> out;
    for (double V : Vs) out.push_back(greedy_select(values, a, V, scan_step).points.size());
    return out;
}

LargeValueSet select_large_values(double T, double V, double scan_step) {
    return select_large_values_in(T, 2.0 * T, V, scan_step);
}

double large_value_radius(double V, double T, double eps) { return V * V * std::pow(T, -eps); }

}  // namespace zetalab
