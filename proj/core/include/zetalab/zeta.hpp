#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace zetalab {

/// A height on the critical line with the Riemann-Siegel quantities there.
struct CriticalPoint {
    double t;
    double z_value;    // Z(t), real, |Z(t)| = |zeta(1/2 + it)|
    double theta;      // theta(t)
    double zeta_abs2;  // Z(t)^2
};

/// Height below which the Euler-Maclaurin evaluator replaces Riemann-Siegel.
inline constexpr double kRiemannSiegelMinHeight = 200.0;
/// Upper end of the double-precision validity window.
inline constexpr double kMaxHeight = 1e8;

/// Riemann-Siegel theta(t): Stirling series for t >= 50, log-gamma below.
double rs_theta(double t);

/// Riemann-Siegel Z(t): main sum plus corrections C_0..C_7. Requires 2 pi <= t <= 1e8.
double riemann_siegel_z(double t);

/// zeta(s) by Euler-Maclaurin summation. terms == 0 picks N from |Im s|.
std::complex<double> zeta_euler_maclaurin(std::complex<double> s, std::size_t terms = 0);

/// |zeta(1/2 + it)|^2 by Euler-Maclaurin (the oracle path).
double zeta_abs2_euler_maclaurin(double t, std::size_t terms = 0);

/// |zeta(1/2 + it)|^2 for 0 <= t <= 1e8; Riemann-Siegel above kRiemannSiegelMinHeight.
double zeta_abs2_critical(double t);

CriticalPoint critical_point(double t);

/// log Gamma(z) on the continuous branch (Lanczos, with reflection for Re z < 1/2).
std::complex<double> log_gamma(std::complex<double> z);

/// chi(1/2 + it) from chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s).
std::complex<double> chi_critical(double t);

/// |chi(1/2 + it)|, which equals 1. Requires 0 <= t <= 1e4.
double chi_modulus_check(double t);

/// Local oscillation scale of Z(t)^2, 2 pi / log(t / 2 pi), capped at 2.
double oscillation_scale(double t);

struct MeanSquareResult {
    double value;
    double error_estimate;
    std::size_t evaluations;
};

/// Integral of |zeta(1/2+it)|^2 over [a, b] by adaptive Gauss-Kronrod with
/// initial panels no wider than oscillation_scale. 0 <= a <= b <= 1e6.
/// Throws ConvergenceError (carrying the partial value) on budget exhaustion.
MeanSquareResult integrate_mean_square(double a, double b, double rel_tol = 1e-10);

/// Integral of w(t) |zeta(1/2+it)|^2 over [a, b] with the same panel layout as
/// integrate_mean_square. The weight must be finite on [a, b].
MeanSquareResult integrate_weighted_mean_square(const std::function<double(double)>& w, double a,
                                                double b, double rel_tol = 1e-10);

/// Cross-check scheme: composite Simpson at doubled resolution with step
/// oscillation_scale / steps_per_scale.
MeanSquareResult integrate_mean_square_simpson(double a, double b, int steps_per_scale = 64);

enum class QuadratureScheme { GaussKronrod, Simpson };

struct ErrorTermSample {
    double T;
    double integral;   // integral_0^T |zeta(1/2+it)|^2 dt
    double main_term;  // T (log(T / 2 pi) + 2 gamma - 1)
    double e_value;    // integral - main_term
    double error_estimate;
};

/// T (log(T / 2 pi) + 2 gamma - 1).
double mean_square_main_term(double T);

/// E(T) for 10 <= T <= 1e6. The piece over [0, 2] uses Euler-Maclaurin values directly.
ErrorTermSample error_term(double T, QuadratureScheme scheme = QuadratureScheme::GaussKronrod);

/// E on the grid T0, T0 + step, ..., <= T1 by cumulative integration.
std::vector<ErrorTermSample> error_term_series(double T0, double T1, double step);

}  // namespace zetalab
