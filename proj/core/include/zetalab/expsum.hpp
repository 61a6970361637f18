#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "zetalab/report.hpp"

namespace zetalab {

/// Sum over K < k <= K_prime of exp(i f(tau_r, k) - i f(tau_s, k)).
struct ExpSumInstance {
    double tau_r = 0.0;
    double tau_s = 0.0;
    std::uint64_t K = 0;
    std::uint64_t K_prime = 0;
    double T = 0.0;

    std::uint64_t term_count() const { return K_prime > K ? K_prime - K : 0; }
};

/// Requires T/3 < tau < 8T/3, K < K_prime <= 2K, K_prime <= 1e7.
void validate_instance(const ExpSumInstance& inst);

std::complex<double> exp_sum_S(const ExpSumInstance& inst);

/// Second implementation for cross-checking: long double phases (library
/// asinh instead of the log form), plain long double accumulation.
std::complex<double> exp_sum_S_reference(const ExpSumInstance& inst);

struct ExponentPair {
    double kappa = 0.5;
    double lambda = 0.5;
};

struct ExponentPairBound {
    double bound;
    double F;      // |tau_r - tau_s| (K T)^{-1/2}
    bool trivial;  // F = 0: bound is the term count
};

/// F^kappa K^lambda + 1/F.
ExponentPairBound exponent_pair_bound(const ExpSumInstance& inst, const ExponentPair& pair = {});

// ---------------------------------------------------------------------------
// Derivative tests for integrals of w(x) e^{i g(x)} over [a, b]

struct OscillatoryIntegrand {
    std::function<double(double)> phase;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    std::function<double(double)> weight;  // nonnegative, monotone or unimodal
    double a = 0.0;
    double b = 1.0;
    double weight_sup = 0.0;  // 0: estimated by sampling
};

inline constexpr double kFirstDerivativeC = 4.0;
inline constexpr double kSecondDerivativeC = 8.0;

struct DerivativeTest {
    double bound;
    double direct;  // |integral|, by quadrature
    double m;       // min |g'| or min |g''|
    bool holds;
};

/// bound = 4 sup|w| / min|g'|. g' must keep one sign; min |g'| is taken at the
/// endpoints (g' monotone). Throws DomainError if g' vanishes or changes sign.
DerivativeTest first_derivative_test(const OscillatoryIntegrand& f, double rel_tol = 1e-10);

/// bound = 8 sup|w| / sqrt(min|g''|), min over a sampling grid.
/// Throws DomainError if g'' vanishes or changes sign.
DerivativeTest second_derivative_test(const OscillatoryIntegrand& f, double rel_tol = 1e-10);

/// Direct quadrature of the integral on oscillation-scaled panels.
std::complex<double> oscillatory_integral(const OscillatoryIntegrand& f, double rel_tol = 1e-10);

// ---------------------------------------------------------------------------
// integral over [sqrt(T/2), sqrt(5T/2)] of Phi(x) e^{i D x + i E / x}, Phi(x) = 2 x phi(x^2),
// phi = 1 on [T, 2T], supported in [T/2, 5T/2].

struct OscRegime {
    double C1 = 0.5;
    double C2 = 8.0;
    double eps = 0.05;
};

struct OscIntegralIT {
    std::complex<double> direct;
    double saddle_bound;   // E^{3/4} D^{-5/4}; NaN unless D, E > 0
    bool in_regime;     // C1 E <= D T <= C2 E
    bool negligible;    // D > T^{eps - 1/2} and D T outside [C1 E, C2 E]
    bool has_saddle;    // x* = sqrt(E/D) inside the support
    std::complex<double> sp_reconstruction;  // leading stationary-phase term, 0 without a saddle
};

double Phi_weight(double x, double T);

OscIntegralIT osc_integral_IT(double D, double E, double T, const OscRegime& regime = {}, double rel_tol = 1e-10);

/// Leading stationary-phase term only: sqrt(pi) e^{i pi/4} Phi(x*) E^{1/4} D^{-3/4} e^{2 i sqrt(DE)}
/// for D, E > 0 (and the conjugate orientation for D, E < 0).
std::complex<double> osc_IT_stationary(double D, double E, double T);

// ---------------------------------------------------------------------------

struct ExpSumGridRow {
    ExpSumInstance inst;
    std::complex<double> S;
    double F;
    double bound;
    double ratio;
};

struct ExpSumGrid {
    std::vector<ExpSumGridRow> rows;
    double max_ratio = 0.0;
    bool triangle_ok = true;  // |S| <= term count everywhere
};

/// Seeded random instances at height T: tau_s uniform in [T, 2T], K log-uniform
/// in [16, K_hi], K' = 2K, F log-uniform in [F_lo, F_hi].
ExpSumGrid exp_sum_grid(double T, std::size_t count, std::uint64_t seed, std::uint64_t K_hi = 4096,
                        double F_lo = 0.05, double F_hi = 20.0, const ExponentPair& pair = {});

/// Numerical instance of the large-values argument at height T with bump
/// radius G: Cauchy-Schwarz split, diagonal size, dyadic exponential-sum
/// measurements, block length J = T^{-eps} G^3 and large-value counts.
ExperimentReport twelfth_moment_walkthrough(double T, double G, double eps = 0.05, std::uint64_t seed = 1);

}  // namespace zetalab
