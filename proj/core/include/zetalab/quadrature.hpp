#pragma once

// Adaptive Gauss-Kronrod quadrature (7-point Gauss-Legendre panels with their
// 15-point Kronrod extension) and the composite Simpson cross-check rule.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "zetalab/errors.hpp"
#include "zetalab/numutil.hpp"

namespace zetalab {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    /// Measure rel_tol against the integral of |f| instead of |integral of f|.
    /// Needed for oscillatory integrands whose value is far below their size.
    bool relative_to_l1 = false;
    std::size_t max_panels = 2'000'000;
};

template <class V>
struct QuadResult {
    V value{};
    double error = 0.0;
    double l1 = 0.0;  // estimate of the integral of |f|
    std::size_t evaluations = 0;
    std::size_t panels = 0;
};

namespace detail {

// Nodes on [-1, 1] (nonnegative half) of the Kronrod rule; odd indices are the Gauss nodes.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class V>
struct Panel {
    double a, b;
    V value;
    double error;
    double l1;
};

template <class V, class F>
Panel<V> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const V fc = f(c);
    V kron = fc * kWgk[7];
    V gauss = fc * kWg[3];
    double l1 = magnitude(fc) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const V f1 = f(c - dx);
        const V f2 = f(c + dx);
        kron += (f1 + f2) * kWgk[j];
        l1 += (magnitude(f1) + magnitude(f2)) * kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    const double ah = std::fabs(h);
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * l1 * ah;
    return {a, b, kron * h, std::max(magnitude((kron - gauss) * h), roundoff), l1 * ah};
}

template <class V>
V ordered_sum(std::vector<Panel<V>>& panels) {
    std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    if constexpr (std::is_same_v<V, double>) {
        CompensatedSum s;
        for (const auto& p : panels) s += p.value;
        return s.value();
    } else {
        CompensatedSum re, im;
        for (const auto& p : panels) {
            re += p.value.real();
            im += p.value.imag();
        }
        return {re.value(), im.value()};
    }
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over consecutive breakpoints.
/// The panel with the largest error estimate is bisected until the summed
/// error meets the tolerance. Deterministic for a fixed set of breakpoints.
template <class F>
auto integrate_breaks(F f, std::span<const double> breaks, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
    using V = std::decay_t<decltype(f(0.0))>;
    using detail::Panel;
    QuadResult<V> out;
    if (breaks.size() < 2) return out;

    auto cmp = [](const Panel<V>& x, const Panel<V>& y) {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    };
    std::priority_queue<Panel<V>, std::vector<Panel<V>>, decltype(cmp)> heap(cmp);
    double total_error = 0.0, total_l1 = 0.0;
    V total{};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] == breaks[i]) continue;
        auto p = detail::gk15<V>(f, breaks[i], breaks[i + 1]);
        out.evaluations += 15;
        total_error += p.error;
        total_l1 += p.l1;
        total += p.value;
        heap.push(p);
    }

    auto target = [&] {
        const double scale = opt.relative_to_l1 ? total_l1 : detail::magnitude(total);
        return std::max(opt.abs_tol, opt.rel_tol * scale);
    };

    std::vector<Panel<V>> done;
    while (!heap.empty() && total_error > target()) {
        if (heap.size() + done.size() >= opt.max_panels) {
            std::vector<Panel<V>> all = std::move(done);
            while (!heap.empty()) {
                all.push_back(heap.top());
                heap.pop();
            }
            throw ConvergenceError("quadrature: tolerance not reached within " +
                                       std::to_string(opt.max_panels) + " panels",
                                   detail::magnitude(detail::ordered_sum(all)), total_error);
        }
        Panel<V> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            std::fabs(worst.b - worst.a) < 1e-13 * std::max(1.0, std::fabs(mid))) {
            // Panel cannot be split further in double precision; keep it as is.
            done.push_back(worst);
            total_error -= worst.error;
            continue;
        }
        auto left = detail::gk15<V>(f, worst.a, mid);
        auto right = detail::gk15<V>(f, mid, worst.b);
        out.evaluations += 30;
        total_error += left.error + right.error - worst.error;
        total_l1 += left.l1 + right.l1 - worst.l1;
        total += left.value + right.value - worst.value;
        heap.push(left);
        heap.push(right);
    }

    std::vector<Panel<V>> all = std::move(done);
    out.error = 0.0;
    while (!heap.empty()) {
        out.error += heap.top().error;
        all.push_back(heap.top());
        heap.pop();
    }
    for (const auto& p : all) out.l1 += p.l1;
    out.panels = all.size();
    out.value = detail::ordered_sum(all);
    return out;
}

/// Breakpoints a = x_0 < x_1 < ... = b with x_{i+1} - x_i <= max_width(x_i).
template <class W>
std::vector<double> scaled_breaks(double a, double b, W max_width, std::size_t max_count = 5'000'000) {
    std::vector<double> out{a};
    double x = a;
    while (x < b) {
        const double h = max_width(x);
        if (!(h > 0.0)) throw DomainError("scaled_breaks: panel width must be positive");
        x = std::min(b, x + h);
        out.push_back(x);
        if (out.size() > max_count) throw SizeError("scaled_breaks: too many initial panels");
    }
    return out;
}

template <class F>
auto integrate(F f, double a, double b, const QuadOptions& opt = {}) {
    const double br[2] = {a, b};
    return integrate_breaks(f, std::span<const double>(br, 2), opt);
}

/// Adaptive integration whose initial panels respect a local width limit.
template <class F, class W>
auto integrate_scaled(F f, double a, double b, W max_width, const QuadOptions& opt = {}) {
    const auto br = scaled_breaks(a, b, max_width);
    return integrate_breaks(f, std::span<const double>(br), opt);
}

/// Composite Simpson rule with n (even) subintervals.
template <class F>
auto simpson(F f, double a, double b, std::size_t n) {
    using V = std::decay_t<decltype(f(0.0))>;
    if (n < 2 || n % 2 != 0) throw DomainError("simpson: n must be even and >= 2");
    const double h = (b - a) / static_cast<double>(n);
    V ends = f(a) + f(b);
    V odd{}, even{};
    for (std::size_t i = 1; i < n; ++i) {
        const double x = a + h * static_cast<double>(i);
        if (i % 2) odd += f(x);
        else even += f(x);
    }
    return (ends + 4.0 * odd + 2.0 * even) * (h / 3.0);
}

struct SimpsonResult {
    double value;       // at 2n subintervals
    double difference;  // |S(2n) - S(n)|
};

/// Simpson at n and at doubled resolution 2n; the doubled value is returned.
/// The coarse rule reuses every other fine sample.
template <class F>
SimpsonResult simpson_doubled(F f, double a, double b, std::size_t n) {
    if (n < 2 || n % 2 != 0) throw DomainError("simpson: n must be even and >= 2");
    const std::size_t m = 2 * n;
    const double h = (b - a) / static_cast<double>(m);
    const double ends = f(a) + f(b);
    // Fine-grid points split by index mod 4: odd (i % 2 == 1), 2 mod 4, 0 mod 4.
    CompensatedSum odd, two, four;
    for (std::size_t i = 1; i < m; ++i) {
        const double v = f(a + h * static_cast<double>(i));
        if (i % 2) odd += v;
        else if (i % 4 == 2) two += v;
        else four += v;
    }
    const double fine = (ends + 4.0 * odd.value() + 2.0 * (two.value() + four.value())) * (h / 3.0);
    const double coarse = (ends + 4.0 * two.value() + 2.0 * four.value()) * (2.0 * h / 3.0);
    return {fine, std::fabs(fine - coarse)};
}

}  // namespace zetalab
