#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace zetalab {

enum class TestFunctionKind { Bump, TruncatedGaussian };

/// Smooth compactly supported test function on (0, inf).
///   Bump:              1 on [c - w/2, c + w/2], support [c - w, c + w].
///   TruncatedGaussian: exp(-(x-c)^2 / 2w^2) cut off smoothly, support [c - 5w, c + 5w].
struct TestFunction {
    TestFunctionKind kind = TestFunctionKind::Bump;
    double center = 1.0;
    double width = 0.5;
    double scale = 1.0;

    double support_lo() const;
    double support_hi() const;
    double operator()(double x) const;
    std::string label() const;
};

std::vector<TestFunction> builtin_test_functions();

struct PoissonCheck {
    double lhs;              // sum_{n >= 1} f(n)
    double rhs;              // integral f + 2 sum_{nu <= n_max} integral f cos(2 pi nu x)
    double truncation;       // 2 |integral f cos(2 pi n_max x)|, size of the last retained term
    double quad_error;
};

/// Both sides of the Poisson summation identity. The cosine sum is folded into
/// the Dirichlet kernel, so rhs is a single integral of f(x) D_{n_max}(x).
PoissonCheck poisson_check(const TestFunction& f, std::uint64_t n_max);

struct DirichletMeanSquare {
    double value;         // integral phi(t) |sum n^{-1/2-it}|^2
    double diagonal;      // (integral phi) sum 1/n
    double off_diagonal;  // value - diagonal
    double phi_integral;
    std::uint64_t n_lo, n_hi;
};

/// Smoothed mean square over [T - 2G, T + 2G] of the Dirichlet polynomial over
/// integers N <= n <= N1. Requires G^1.05 <= N <= sqrt(T), N <= N1 <= 2N.
DirichletMeanSquare dirichlet_poly_meansq(double T, double G, double N, double N1, double rel_tol = 1e-11);

// ---------------------------------------------------------------------------
// The oscillatory integral of Phi(x) e^{iF(x)}, F(x) = t log(1 + l/x) + 2 pi m x.

struct OscIntegralSpec {
    double t = 0.0;
    std::uint64_t ell = 1;
    std::uint64_t m = 1;
    double N = 0.0;   // plateau [N, N1]
    double N1 = 0.0;
    double G = 0.0;   // ramp below N
    double G_hi = 0.0;  // ramp above N1; 0 means G
    double weight_scale = 1.0;
    bool dirichlet_weight = false;  // multiply by (x (x + l))^{-1/2}

    double support_lo() const { return N - G; }
    double support_hi() const { return N1 + (G_hi > 0.0 ? G_hi : G); }
};

double osc_phase(const OscIntegralSpec& s, double x);
double osc_phase_d1(const OscIntegralSpec& s, double x);
double osc_phase_d2(const OscIntegralSpec& s, double x);
double osc_weight(const OscIntegralSpec& s, double x);

struct SaddleResult {
    double x0;
    double F_at_x0;
    double Fp_at_x0;   // residual of F'(x0) = 0
    double Fpp_at_x0;
    double amplitude;  // sqrt(2 pi / F''(x0))
    double phase;      // F(x0) + pi/4
    bool inside;       // x0 in [N, N1]
    double newton_step;  // size of one Newton correction from the closed form
};

/// Root of F' from the closed form x0 = 2c / (l + sqrt(l^2 + 4c)), c = t l / (2 pi m),
/// checked by one Newton step.
SaddleResult saddle_point(const OscIntegralSpec& s);

struct StationaryPhase {
    std::complex<double> sp_value;
    std::complex<double> direct;
    double rel_gap;
    bool saddle_in_support;
    double separation;  // F''(x0) (N1 - N)^2
};

/// Leading-order stationary-phase value and direct quadrature of the integral.
StationaryPhase stationary_phase_eval(const OscIntegralSpec& s, double rel_tol = 1e-10);

/// Stationary-phase value only (no quadrature).
std::complex<double> stationary_phase_value(const OscIntegralSpec& s);

// ---------------------------------------------------------------------------

struct PipelineCell {
    std::uint64_t ell, m, k;
    int window;
    double x0;  // at t = T
    std::complex<double> sp_value;
    std::complex<double> direct;  // NaN unless requested
    double rel_gap;
    double a_contribution;  // 2 integral phi(t) Re sp(t) dt
};

struct PipelineOptions {
    double eps = 0.05;
    std::uint64_t k_cap = 50;
    double N_lo = 0.0;  // 0 selects a range covering every divisor pair of k <= k_cap
    double N_hi = 0.0;
    bool direct_cells = false;
};

struct PipelineComparison {
    double T, G, N_lo, N_hi;
    std::vector<double> boundaries;  // dyadic window boundaries
    std::vector<PipelineCell> cells;
    std::vector<double> a;  // k = 1..k_cap: saddle-point route
    std::vector<double> b;  // k = 1..k_cap: divisor-expression route (0 where no cell exists)
    std::vector<int> cell_count;
    double correlation;
    double aggregate_gap;  // |sum a - sum b| / sum |b|
    double max_term_gap;   // max_k |a_k - b_k| / max_k |b_k|
};

PipelineComparison pipeline_compare(double T, double G, const PipelineOptions& opt = {});

}  // namespace zetalab
