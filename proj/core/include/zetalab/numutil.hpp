#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zetalab {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// ---------------------------------------------------------------------------
// Divisor counts

/// Exact divisor-count table d(1..limit), built by sieve.
class DivisorTable {
public:
    static constexpr std::uint64_t kMaxLimit = 100'000'000;

    /// Throws SizeError unless 1 <= limit <= kMaxLimit.
    explicit DivisorTable(std::uint64_t limit);

    std::uint64_t limit() const noexcept { return limit_; }

    /// d(n) for 1 <= n <= limit; throws DomainError otherwise.
    std::uint32_t operator()(std::uint64_t n) const;

    std::span<const std::uint16_t> raw() const noexcept { return {d_.data() + 1, d_.size() - 1}; }

private:
    std::uint64_t limit_;
    std::vector<std::uint16_t> d_;  // d_[0] unused
};

DivisorTable divisor_sieve(std::uint64_t limit);

// ---------------------------------------------------------------------------
// Elementary kernels

/// log(x + sqrt(1 + x^2)); odd and monotone.
double arsinh(double x);

/// Distance from x to the nearest integer, in [0, 1/2].
double dist_nearest_int(double x);

struct SawtoothValue {
    double exact;        // x - floor(x) - 1/2
    double fourier;      // -(1/pi) sum_{n<=N} sin(2 pi n x)/n
    double error_bound;  // min(1, 1/(N ||x||))
    bool integral_input;
};

/// psi(x) = x - [x] - 1/2 with its truncated Fourier series.
/// N must be >= 3. At integers, exact is -1/2 and integral_input is set.
SawtoothValue sawtooth_psi(double x, int N);

/// Squarefree decomposition n = a^2 * h with h squarefree.
struct SquarefreeCore {
    std::uint64_t a;
    std::uint64_t h;
};

SquarefreeCore squarefree_core(std::uint64_t n);

/// Floor of the square root, exact for all 64-bit inputs.
std::uint64_t isqrt(std::uint64_t n);

// ---------------------------------------------------------------------------
// Compensated accumulation

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

// ---------------------------------------------------------------------------
// Smooth windows

/// C-infinity window equal to 1 on [plateau_lo, plateau_hi], falling to 0 over a
/// ramp of the given width on each side. The ramps use the normalized mollifier
/// transition s(u) = h(u) / (h(u) + h(1-u)), h(u) = exp(-1/u) for u > 0.
class SmoothWindow {
public:
    static constexpr int kMaxDerivative = 4;

    SmoothWindow(double plateau_lo, double plateau_hi, double ramp_lo, double ramp_hi);
    SmoothWindow(double plateau_lo, double plateau_hi, double ramp)
        : SmoothWindow(plateau_lo, plateau_hi, ramp, ramp) {}

    double plateau_lo() const noexcept { return plateau_lo_; }
    double plateau_hi() const noexcept { return plateau_hi_; }
    double support_lo() const noexcept { return plateau_lo_ - ramp_lo_; }
    double support_hi() const noexcept { return plateau_hi_ + ramp_hi_; }
    double ramp_lo() const noexcept { return ramp_lo_; }
    double ramp_hi() const noexcept { return ramp_hi_; }

    /// Value or derivative (order 0..4) at t. Throws DomainError for higher orders.
    double eval(double t, int derivative_order = 0) const;
    double operator()(double t) const { return eval(t, 0); }

    /// Exact integral of the window over the real line.
    double integral() const noexcept;

private:
    double plateau_lo_;
    double plateau_hi_;
    double ramp_lo_;
    double ramp_hi_;
};

/// Bump equal to 1 on [center - G, center + G], supported in [center - 2G, center + 2G].
class SmoothBump {
public:
    SmoothBump(double center, double plateau_radius);

    double center() const noexcept { return center_; }
    double plateau_radius() const noexcept { return window_.plateau_hi() - center_; }
    double support_radius() const noexcept { return 2.0 * plateau_radius(); }
    const SmoothWindow& window() const noexcept { return window_; }

    double eval(double t, int derivative_order = 0) const { return window_.eval(t, derivative_order); }
    double operator()(double t) const { return window_.eval(t, 0); }
    double integral() const noexcept { return window_.integral(); }

private:
    double center_;
    SmoothWindow window_;
};

double bump_eval(const SmoothBump& b, double t, int derivative_order);

/// Transition s(u): 0 for u <= 0, 1 for u >= 1, smooth in between.
/// Returns derivatives 0..order in out (out.size() > order).
void mollifier_transition(double u, int order, std::span<double> out);

}  // namespace zetalab
