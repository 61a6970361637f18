#include "zetalab/numutil.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "zetalab/errors.hpp"

namespace zetalab {

// ---------------------------------------------------------------------------
// Divisor counts

DivisorTable::DivisorTable(std::uint64_t limit) : limit_(limit) {
    if (limit < 1 || limit > kMaxLimit)
        throw SizeError("divisor_sieve: limit " + std::to_string(limit) + " outside [1, 1e8]");
    d_.assign(limit + 1, 0);
    for (std::uint64_t i = 1; i <= limit; ++i)
        for (std::uint64_t j = i; j <= limit; j += i) ++d_[j];
}

std::uint32_t DivisorTable::operator()(std::uint64_t n) const {
    if (n < 1 || n > limit_)
        throw DomainError("DivisorTable: index " + std::to_string(n) + " outside table");
    return d_[n];
}

DivisorTable divisor_sieve(std::uint64_t limit) { return DivisorTable(limit); }

// ---------------------------------------------------------------------------
// Elementary kernels

double arsinh(double x) {
    // log(x + sqrt(1+x^2)) loses everything to cancellation for x << 0; use oddness.
    if (x < 0.0) return -arsinh(-x);
    // Below 1 the plain log form loses about log10(1/x) digits.
    if (x < 1.0) return std::log1p(x + x * x / (1.0 + std::sqrt(1.0 + x * x)));
    return std::log(x + std::sqrt(1.0 + x * x));
}

double dist_nearest_int(double x) {
    const double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

SawtoothValue sawtooth_psi(double x, int N) {
    if (N < 3) throw DomainError("sawtooth_psi: N must be >= 3");
    SawtoothValue out{};
    const double fl = std::floor(x);
    out.integral_input = (fl == x);
    out.exact = x - fl - 0.5;

    // sin(2 pi n x) only depends on the fractional part.
    const double frac = x - fl;
    CompensatedSum s;
    for (int n = 1; n <= N; ++n) s += std::sin(kTwoPi * n * frac) / n;
    out.fourier = -s.value() / kPi;

    const double dist = dist_nearest_int(x);
    out.error_bound = dist == 0.0 ? 1.0 : std::min(1.0, 1.0 / (N * dist));
    return out;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

SquarefreeCore squarefree_core(std::uint64_t n) {
    if (n == 0) throw DomainError("squarefree_core: n must be positive");
    std::uint64_t a = 1, h = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) a *= p;
        if (e % 2) h *= p;
    }
    h *= n;  // leftover prime (or 1)
    return {a, h};
}

double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s += x;
    return s.value();
}

// ---------------------------------------------------------------------------
// Smooth windows

namespace {

constexpr int kJetOrder = SmoothWindow::kMaxDerivative + 1;

// Truncated Taylor series c_0 + c_1 e + ... + c_4 e^4.
struct Jet {
    std::array<double, kJetOrder> c{};
};

Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < kJetOrder; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < kJetOrder; ++i)
        for (int j = 0; i + j < kJetOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Jet reciprocal(const Jet& a) {
    Jet r;
    r.c[0] = 1.0 / a.c[0];
    for (int n = 1; n < kJetOrder; ++n) {
        double acc = 0.0;
        for (int k = 1; k <= n; ++k) acc += a.c[k] * r.c[n - k];
        r.c[n] = -acc / a.c[0];
    }
    return r;
}

Jet exp(const Jet& a) {
    // r' = a' r  =>  n r_n = sum_k k a_k r_{n-k}
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (int n = 1; n < kJetOrder; ++n) {
        double acc = 0.0;
        for (int k = 1; k <= n; ++k) acc += k * a.c[k] * r.c[n - k];
        r.c[n] = acc / n;
    }
    return r;
}

Jet variable(double u, double slope) {
    Jet r;
    r.c[0] = u;
    r.c[1] = slope;
    return r;
}

// exp(-1/v) as a jet; v.c[0] > 0.
Jet mollifier_h(const Jet& v) {
    Jet neg_inv = reciprocal(v);
    for (auto& x : neg_inv.c) x = -x;
    return exp(neg_inv);
}

constexpr double kFlatEdge = 1.0 / 700.0;  // exp(-700) is below any quantity we resolve

}  // namespace

void mollifier_transition(double u, int order, std::span<double> out) {
    if (order < 0 || order > SmoothWindow::kMaxDerivative)
        throw DomainError("mollifier_transition: derivative order must be in [0, 4]");
    std::fill(out.begin(), out.begin() + order + 1, 0.0);
    if (u <= kFlatEdge) return;
    if (u >= 1.0 - kFlatEdge) {
        out[0] = 1.0;
        return;
    }
    const Jet h0 = mollifier_h(variable(u, 1.0));
    const Jet h1 = mollifier_h(variable(1.0 - u, -1.0));
    const Jet s = h0 * reciprocal(h0 + h1);
    double factorial = 1.0;
    for (int j = 0; j <= order; ++j) {
        if (j > 0) factorial *= j;
        out[j] = s.c[j] * factorial;
    }
}

SmoothWindow::SmoothWindow(double plateau_lo, double plateau_hi, double ramp_lo, double ramp_hi)
    : plateau_lo_(plateau_lo), plateau_hi_(plateau_hi), ramp_lo_(ramp_lo), ramp_hi_(ramp_hi) {
    if (!(plateau_hi >= plateau_lo) || !(ramp_lo > 0.0) || !(ramp_hi > 0.0))
        throw DomainError("SmoothWindow: need plateau_lo <= plateau_hi and positive ramps");
}

double SmoothWindow::eval(double t, int derivative_order) const {
    if (derivative_order < 0 || derivative_order > kMaxDerivative)
        throw DomainError("SmoothWindow: unsupported derivative order " +
                          std::to_string(derivative_order));
    if (t <= support_lo() || t >= support_hi()) return 0.0;
    if (t >= plateau_lo_ && t <= plateau_hi_) return derivative_order == 0 ? 1.0 : 0.0;

    std::array<double, kJetOrder> s{};
    double scale;
    if (t < plateau_lo_) {
        mollifier_transition((t - support_lo()) / ramp_lo_, derivative_order, s);
        scale = 1.0 / ramp_lo_;
    } else {
        mollifier_transition((support_hi() - t) / ramp_hi_, derivative_order, s);
        scale = -1.0 / ramp_hi_;
    }
    return s[derivative_order] * std::pow(scale, derivative_order);
}

double SmoothWindow::integral() const noexcept {
    // s(u) + s(1-u) = 1, so each ramp contributes half its width.
    return (plateau_hi_ - plateau_lo_) + 0.5 * (ramp_lo_ + ramp_hi_);
}

SmoothBump::SmoothBump(double center, double plateau_radius)
    : center_(center),
      window_(center - plateau_radius, center + plateau_radius, plateau_radius) {
    if (!(plateau_radius > 0.0)) throw DomainError("SmoothBump: plateau radius must be positive");
}

double bump_eval(const SmoothBump& b, double t, int derivative_order) {
    return b.eval(t, derivative_order);
}

}  // namespace zetalab
