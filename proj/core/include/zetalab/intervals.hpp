#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zetalab {

/// Centers T <= t_1 < ... < t_R <= 2T with t_{r+1} - t_r >= spacing_factor * G.
struct SamplePointSet {
    double T = 0.0;
    double G = 0.0;
    double spacing_factor = 5.0;
    std::vector<double> centers;
    std::uint64_t seed = 0;
    bool truncated = false;  // requested count exceeded the feasible maximum

    std::size_t size() const noexcept { return centers.size(); }
};

struct PointSetCheck {
    bool ok = true;
    std::string reason;
};

/// Checks ordering, range, spacing and T^eps <= G <= T^(1/3).
PointSetCheck validate_point_set(const SamplePointSet& p, double eps = 0.01);

/// Most points that fit in [T, 2T] at the given spacing.
std::size_t point_set_capacity(double T, double G, double spacing_factor = 5.0);

/// Seeded uniform draw from the admissible configurations of min(R_max, capacity)
/// points. Requires T >= 100 and, unless check_g_window is false,
/// T^0.01 <= G <= T^(1/3).
SamplePointSet build_point_set(double T, double G, std::uint64_t R_max, std::uint64_t seed,
                               double spacing_factor = 5.0, bool check_g_window = true);

std::string point_set_to_json(const SamplePointSet& p);
SamplePointSet point_set_from_json(const std::string& text);

/// True when the supports [t_r - 2G, t_r + 2G] are pairwise disjoint.
bool supports_disjoint(const SamplePointSet& p);

struct IntervalSums {
    double smoothed = 0.0;   // sum of integrals of phi_r |zeta|^2
    double classical = 0.0;  // sum of integrals over [t_r - G, t_r + G]
    double error_estimate = 0.0;
    std::vector<double> smoothed_terms;
    std::vector<double> classical_terms;
};

/// Both sums in one pass. smoothed = classical + (nonnegative shoulder integrals),
/// term by term, so classical <= smoothed holds in floating point as well.
IntervalSums interval_sums(const SamplePointSet& p, double rel_tol = 1e-10);

double smoothed_sum(const SamplePointSet& p, double rel_tol = 1e-10);
double classical_sum(const SamplePointSet& p, double rel_tol = 1e-10);

/// Integral of phi_r |zeta|^2 by doubled-resolution Simpson (cross-check path).
double smoothed_term_simpson(double center, double G, int steps_per_scale = 64);

struct LocalBound {
    double lhs;  // |zeta(1/2 + i t)|^2
    double rhs;  // log t * (integral over [t-1, t+1] + 1)
    double ratio;
};

/// 10 <= t <= 1e6.
LocalBound local_mean_square_bound(double t);

struct LargeValueSet {
    double T = 0.0;
    double V = 0.0;
    double scan_step = 0.25;
    std::vector<double> points;
    std::vector<double> values;  // |zeta(1/2 + i t)| at each point
};

/// Greedy left-to-right scan of [T, 2T] on the step grid, keeping points with
/// |zeta| >= V at mutual distance >= 1. Requires 0 < scan_step <= 1/2.
LargeValueSet select_large_values(double T, double V, double scan_step = 0.25);

/// Same scan over an explicit interval [a, b].
LargeValueSet select_large_values_in(double a, double b, double V, double scan_step = 0.25);

/// Counts of the same scan for several thresholds; the samples are computed once.
std::vector<std::size_t> large_value_counts(double a, double b, const std::vector<double>& Vs, double scan_step = 0.25);

/// The plateau radius G = V^2 T^(-eps) used to group large values.
double large_value_radius(double V, double T, double eps);

}  // namespace zetalab
