#include "zetalab/phase.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "zetalab/errors.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/parallel.hpp"
#include "zetalab/quadrature.hpp"
#include "zetalab/zeta.hpp"

namespace zetalab {

double f_phase(double t, double k) {
    if (!(t > 0.0) || !(k > 0.0)) throw DomainError("f_phase: requires t > 0 and k > 0");
    return 2.0 * t * arsinh(std::sqrt(kPi * k / (2.0 * t))) + std::sqrt(kTwoPi * k * t + kPi * kPi * k * k) -
           0.25 * kPi;
}

double f_phase_dt(double t, double k) {
    if (!(t > 0.0) || !(k > 0.0)) throw DomainError("f_phase_dt: requires t > 0 and k > 0");
    return 2.0 * arsinh(std::sqrt(kPi * k / (2.0 * t)));
}

std::array<double, kMaxTaylorDepth> taylor_terms(double t, double k, const PhaseModel& model) {
    const double x = k / t;
    const double lead = 2.0 * std::sqrt(kTwoPi * k * t);
    const double p3 = k * std::sqrt(k) / std::sqrt(t);  // k^{3/2} t^{-1/2}
    return {lead, model.a3 * p3, model.a5 * p3 * x, model.a7 * p3 * x * x};
}

double f_taylor(double t, double k, int depth, const PhaseModel& model) {
    if (!(t > 0.0) || !(k > 0.0)) throw DomainError("f_taylor: requires t > 0 and k > 0");
    if (depth < 1 || depth > kMaxTaylorDepth) throw DomainError("f_taylor: depth must be in [1, 4]");
    if (!(std::pow(k, 2.5) * std::pow(t, -1.5) < 1.0))
        throw DomainError("f_taylor: outside the validity window k^{5/2} t^{-3/2} < 1");
    const auto terms = taylor_terms(t, k, model);
    double s = -0.25 * kPi;
    for (int j = 0; j < depth; ++j) s += terms[j];
    return s;
}

double taylor_dominance(double t, double k, const PhaseModel& model) {
    const auto terms = taylor_terms(t, k, model);
    double worst = std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < kMaxTaylorDepth; ++j)
        worst = std::min(worst, std::fabs(terms[j]) / std::fabs(terms[j + 1]));
    return worst;
}

namespace {

using ld = long double;
constexpr ld kPiL = 3.141592653589793238462643383279502884L;

// (f_phase - first three expansion terms) / (k^{5/2} t^{-3/2}), extended precision.
ld scaled_remainder(ld t, ld k) {
    const ld f = 2 * t * std::asinh(std::sqrt(kPiL * k / (2 * t))) + std::sqrt(2 * kPiL * k * t + kPiL * kPiL * k * k) -
                 kPiL / 4;
    const ld a3 = std::sqrt(2 * kPiL * kPiL * kPiL) / 6;
    const ld head = -kPiL / 4 + 2 * std::sqrt(2 * kPiL * k * t) + a3 * k * std::sqrt(k) / std::sqrt(t);
    return (f - head) / (std::pow(k, 2.5L) * std::pow(t, -1.5L));
}

// Richardson table for a sequence whose error expands in powers of h, h halving.
ld richardson(std::vector<ld> r, ld& last_correction) {
    last_correction = 0;
    for (std::size_t m = 1; m < r.size(); ++m) {
        const ld f = std::ldexp(1.0L, static_cast<int>(m));
        for (std::size_t j = r.size() - 1; j >= m; --j) {
            const ld next = (f * r[j] - r[j - 1]) / (f - 1);
            if (j == r.size() - 1) last_correction = std::fabs(next - r[j]);
            r[j] = next;
        }
    }
    return r.back();
}

}  // namespace

TaylorFit fit_taylor_coefficients(double k, double t0, int levels) {
    if (!(k > 0.0) || !(t0 > 0.0) || levels < 2) throw DomainError("fit_taylor_coefficients: bad grid");
    if (!(k / t0 < 0.5)) throw DomainError("fit_taylor_coefficients: k / t0 must be below 1/2");
    std::vector<ld> r, x;
    for (int j = 0; j < levels; ++j) {
        const ld t = std::ldexp(static_cast<ld>(t0), j);
        r.push_back(scaled_remainder(t, k));
        x.push_back(k / t);
    }
    TaylorFit fit{};
    ld c5 = 0, c7 = 0;
    const ld a5 = richardson(r, c5);
    // (r - a5) / x expands as a7 + a9 x + ...; drop the coarsest level, whose
    // higher-order error is largest.
    std::vector<ld> r7;
    for (int j = 1; j < levels; ++j) r7.push_back((r[j] - a5) / x[j]);
    const ld a7 = richardson(r7, c7);
    fit.a5 = static_cast<double>(a5);
    fit.a7 = static_cast<double>(a7);
    fit.a5_last_correction = static_cast<double>(c5);
    fit.a7_last_correction = static_cast<double>(c7);
    return fit;
}

// ---------------------------------------------------------------------------

std::uint64_t divisor_k_max(double T, double G, double eps) {
    if (!(T > 0.0) || !(G > 0.0)) throw DomainError("divisor_k_max: requires T, G > 0");
    const double v = std::ceil(std::pow(T, 1.0 + eps) / (G * G));
    return static_cast<std::uint64_t>(std::max(1.0, v));
}

DivisorSumSpec make_divisor_spec(double T, double G, double eps) {
    DivisorSumSpec s{T, G, eps, divisor_k_max(T, G, eps)};
    if (s.k_max > 10'000'000) throw SizeError("divisor expression: k_max exceeds 1e7");
    return s;
}

double divisor_weight(double t, double k, WeightForm form) {
    const double q = t / (kTwoPi * k);
    const double base = form == WeightForm::Full ? 0.25 + q : q;
    return 1.0 / (std::sqrt(k) * std::pow(base, 0.25));
}

namespace {

const DivisorTable& divisor_table(std::uint64_t need) {
    // Grows on demand; callers only read through the returned reference, and
    // older tables stay alive so outstanding references remain valid.
    static std::mutex mu;
    static std::vector<std::unique_ptr<DivisorTable>> tables;
    std::lock_guard<std::mutex> lock(mu);
    if (tables.empty() || tables.back()->limit() < need)
        tables.push_back(std::make_unique<DivisorTable>(std::max<std::uint64_t>(need, 1024)));
    return *tables.back();
}

double sign_of(std::uint64_t k) { return (k % 2) ? -1.0 : 1.0; }

// Panels no wider than a tenth of the local period of sin f(t, k_top), nor a
// quarter of the bump ramp.
std::vector<double> oscillatory_breaks(double a, double b, double G, double k_top) {
    return scaled_breaks(a, b, [&](double t) {
        const double w = 0.1 * kTwoPi / f_phase_dt(t, k_top);
        return std::min(w, 0.25 * G);
    });
}

}  // namespace

double divisor_kernel_integral(double center, double G, std::uint64_t k, WeightForm form, double rel_tol) {
    const SmoothBump bump(center, G);
    const double kk = static_cast<double>(k);
    const auto br = oscillatory_breaks(center - 2.0 * G, center + 2.0 * G, G, kk);
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.relative_to_l1 = true;
    return integrate_breaks([&](double t) { return bump(t) * divisor_weight(t, kk, form) * std::sin(f_phase(t, kk)); },
                            std::span<const double>(br), opt)
        .value;
}

DivisorExpression divisor_expression(const DivisorSumSpec& spec, const SamplePointSet& points, WeightForm form,
                                     bool per_k, double rel_tol) {
    if (spec.k_max > 10'000'000) throw SizeError("divisor expression: k_max exceeds 1e7");
    DivisorExpression out;
    if (spec.k_max == 0 || points.centers.empty()) {
        out.k_terms.assign(per_k ? spec.k_max : 0, 0.0);
        return out;
    }
    const auto& d = divisor_table(spec.k_max);
    const double G = points.G;

    if (per_k) {
        // (k, r) pairs, reduced per k in r order.
        const std::size_t R = points.centers.size();
        auto cells = parallel_map(spec.k_max * R, [&](std::size_t idx) {
            const std::uint64_t k = idx / R + 1;
            return divisor_kernel_integral(points.centers[idx % R], G, k, form, rel_tol);
        });
        out.k_terms.assign(spec.k_max, 0.0);
        CompensatedSum total;
        for (std::uint64_t k = 1; k <= spec.k_max; ++k) {
            CompensatedSum s;
            for (std::size_t r = 0; r < R; ++r) s += cells[(k - 1) * R + r];
            out.k_terms[k - 1] = sign_of(k) * d(k) * s.value();
            total += out.k_terms[k - 1];
        }
        out.value = total.value();
        return out;
    }

    const double k_top = static_cast<double>(spec.k_max);
    auto per_point = parallel_map(points.centers.size(), [&](std::size_t r) {
        const double c = points.centers[r];
        const SmoothBump bump(c, G);
        auto integrand = [&](double t) {
            const double phi = bump(t);
            if (phi == 0.0) return 0.0;
            CompensatedSum s;
            for (std::uint64_t k = 1; k <= spec.k_max; ++k) {
                const double kk = static_cast<double>(k);
                s += sign_of(k) * d(k) * divisor_weight(t, kk, form) * std::sin(f_phase(t, kk));
            }
            return phi * s.value();
        };
        const auto br = oscillatory_breaks(c - 2.0 * G, c + 2.0 * G, G, k_top);
        QuadOptions opt;
        opt.rel_tol = rel_tol;
        opt.relative_to_l1 = true;
        return integrate_breaks(integrand, std::span<const double>(br), opt);
    });
    CompensatedSum total;
    for (const auto& r : per_point) {
        total += r.value;
        out.error_estimate += r.error;
    }
    out.value = total.value();
    return out;
}

double essential_sum(const DivisorSumSpec& spec, const SamplePointSet& points, std::span<const double> taus,
                     SumOrder order, double sin_sign) {
    const std::size_t R = points.centers.size();
    if (taus.size() != R) throw DomainError("essential_sum: one tau per point is required");
    const double G = points.G;
    for (std::size_t r = 0; r < R; ++r)
        if (!(std::fabs(taus[r] - points.centers[r]) <= 2.0 * G))
            throw DomainError("essential_sum: tau_" + std::to_string(r) + " outside its support window");
    if (R == 0 || spec.k_max == 0) return 0.0;
    const auto& d = divisor_table(spec.k_max);

    std::vector<double> outer_w(R);
    for (std::size_t r = 0; r < R; ++r)
        outer_w[r] = SmoothBump(points.centers[r], G)(taus[r]) * std::pow(taus[r], -0.25);
    auto term = [&](std::size_t r, std::uint64_t k) {
        const double kk = static_cast<double>(k);
        return d(k) * std::pow(kk, -0.25) * sin_sign * std::sin(f_phase(taus[r], kk));
    };

    CompensatedSum total;
    if (order == SumOrder::ROuter) {
        for (std::size_t r = 0; r < R; ++r) {
            CompensatedSum inner;
            for (std::uint64_t k = 1; k <= spec.k_max; ++k) inner += term(r, k);
            total += outer_w[r] * inner.value();
        }
    } else {
        for (std::uint64_t k = 1; k <= spec.k_max; ++k) {
            CompensatedSum inner;
            for (std::size_t r = 0; r < R; ++r) inner += outer_w[r] * term(r, k);
            total += inner.value();
        }
    }
    return G * total.value();
}

AtkinsonComparison atkinson_comparison(double center, double G, double eps) {
    AtkinsonComparison a{};
    SamplePointSet single;
    single.T = center;
    single.G = G;
    single.centers = {center};
    a.smoothed = interval_sums(single, 1e-11).smoothed;

    const SmoothBump bump(center, G);
    QuadOptions opt;
    opt.rel_tol = 1e-13;
    a.main_term = integrate([&](double t) { return bump(t) * (std::log(t / kTwoPi) + 2.0 * kEulerGamma); },
                            center - 2.0 * G, center + 2.0 * G, opt)
                      .value;
    const auto spec = make_divisor_spec(center, G, eps);
    a.k_max = spec.k_max;
    a.divisor_full = divisor_expression(spec, single, WeightForm::Full, false, 1e-11).value;
    a.divisor_simplified = divisor_expression(spec, single, WeightForm::Simplified, false, 1e-11).value;
    return a;
}

}  // namespace zetalab
