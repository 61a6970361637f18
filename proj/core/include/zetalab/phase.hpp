#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "zetalab/intervals.hpp"

namespace zetalab {

// Coefficients of k^{3/2} t^{-1/2}, k^{5/2} t^{-3/2}, k^{7/2} t^{-5/2} in the
// large-t expansion of f_phase. The last two were produced by
// fit_taylor_coefficients (zetalab fit-taylor) and frozen here.
inline constexpr double kTaylorA3 = 1.3124674954768683;  // sqrt(2 pi^3) / 6
inline constexpr double kTaylorA5 = -0.30924286814677099;
inline constexpr double kTaylorA7 = 0.17348486050305281;

inline constexpr int kMaxTaylorDepth = 4;

/// Coefficients used by f_taylor. Tests inject faults by editing a5.
struct PhaseModel {
    double a3 = kTaylorA3;
    double a5 = kTaylorA5;
    double a7 = kTaylorA7;
};

/// 2t arsinh(sqrt(pi k / 2t)) + sqrt(2 pi k t + pi^2 k^2) - pi/4, t > 0.
double f_phase(double t, double k);

/// d/dt f_phase = 2 arsinh(sqrt(pi k / 2t)).
double f_phase_dt(double t, double k);

/// The non-constant expansion terms 2 sqrt(2 pi k t), a3 k^{3/2} t^{-1/2}, ...
std::array<double, kMaxTaylorDepth> taylor_terms(double t, double k, const PhaseModel& model = {});

/// -pi/4 plus the first `depth` non-constant terms (1 <= depth <= 4).
/// Requires k^{5/2} t^{-3/2} < 1.
double f_taylor(double t, double k, int depth, const PhaseModel& model = {});

/// Smallest ratio |term_j| / |term_{j+1}| over consecutive expansion terms.
double taylor_dominance(double t, double k, const PhaseModel& model = {});

struct TaylorFit {
    double a5;
    double a7;
    double a5_last_correction;  // size of the final Richardson update
    double a7_last_correction;
};

/// Richardson extrapolation of the scaled expansion remainder along
/// t = t0, 2 t0, 4 t0, ... at fixed k. Evaluated in extended precision.
TaylorFit fit_taylor_coefficients(double k, double t0, int levels = 9);

// ---------------------------------------------------------------------------
// Divisor-sum expressions

struct DivisorSumSpec {
    double T = 0.0;
    double G = 0.0;
    double eps = 0.05;
    std::uint64_t k_max = 0;
};

/// ceil(T^{1+eps} G^{-2}).
std::uint64_t divisor_k_max(double T, double G, double eps);

/// Spec with k_max from divisor_k_max; k_max must not exceed 1e7.
DivisorSumSpec make_divisor_spec(double T, double G, double eps = 0.05);

enum class WeightForm {
    Full,        // k^{-1/2} (1/4 + t / 2 pi k)^{-1/4}
    Simplified,  // k^{-1/2} (t / 2 pi k)^{-1/4}
};

double divisor_weight(double t, double k, WeightForm form);

struct DivisorExpression {
    double value = 0.0;
    double error_estimate = 0.0;
    std::vector<double> k_terms;  // per-k contributions, filled when requested
};

/// sum_r integral phi_r(t) sum_{k <= k_max} (-1)^k d(k) w(t, k) sin f(t, k) dt.
/// With per_k set, every k is integrated separately and k_terms is filled.
DivisorExpression divisor_expression(const DivisorSumSpec& spec, const SamplePointSet& points,
                                     WeightForm form, bool per_k = false, double rel_tol = 1e-10);

/// Single-k term of the expression for one bump, without the (-1)^k d(k) factor.
double divisor_kernel_integral(double center, double G, std::uint64_t k, WeightForm form,
                               double rel_tol = 1e-10);

enum class SumOrder { ROuter, KOuter };

/// G sum_r phi_r(tau_r) tau_r^{-1/4} sum_{k <= k_max} d(k) k^{-1/4} sin f(tau_r, k).
/// tau_r must lie in [t_r - 2G, t_r + 2G]. sin_sign = -1 negates every sine.
double essential_sum(const DivisorSumSpec& spec, const SamplePointSet& points,
                     std::span<const double> taus, SumOrder order = SumOrder::ROuter,
                     double sin_sign = 1.0);

/// Pieces of the smoothed integral around one center, for comparing it with the
/// divisor expression.
struct AtkinsonComparison {
    double smoothed;    // integral phi |zeta|^2
    double main_term;   // integral phi (log(t / 2 pi) + 2 gamma)
    double divisor_full;
    double divisor_simplified;
    std::uint64_t k_max;
};

AtkinsonComparison atkinson_comparison(double center, double G, double eps = 0.05);

}  // namespace zetalab
