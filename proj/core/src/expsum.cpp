#include "zetalab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "zetalab/errors.hpp"
#include "zetalab/intervals.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/parallel.hpp"
#include "zetalab/phase.hpp"
#include "zetalab/quadrature.hpp"

namespace zetalab {

using cplx = std::complex<double>;

void validate_instance(const ExpSumInstance& inst) {
    if (!(inst.T > 0.0)) throw DomainError("exp_sum: requires T > 0");
    for (double tau : {inst.tau_r, inst.tau_s})
        if (!(tau > inst.T / 3.0 && tau < 8.0 * inst.T / 3.0))
            throw DomainError("exp_sum: tau must lie in (T/3, 8T/3)");
    if (!(inst.K >= 1 && inst.K < inst.K_prime && inst.K_prime <= 2 * inst.K))
        throw DomainError("exp_sum: requires 1 <= K < K' <= 2K");
    if (inst.K_prime > 10'000'000) throw SizeError("exp_sum: K' exceeds 1e7");
}

namespace {

/// f_phase(r, k) - f_phase(s, k) in extended precision with every difference
/// formed in closed form. In double the phases (up to ~1e5 rad) would carry
/// ~1e-11 absolute error per term.
long double phase_difference(long double r, long double s, long double k) {
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double ur = std::sqrt(pi * k / (2 * r));
    const long double us = std::sqrt(pi * k / (2 * s));
    // asinh(ur) - asinh(us) = asinh(ur sqrt(1 + us^2) - us sqrt(1 + ur^2)),
    // and ur^2 - us^2 = pi k (s - r) / (2 r s).
    const long double num = pi * k * (s - r) / (2 * r * s);
    const long double arg = num / (ur * std::sqrt(1 + us * us) + us * std::sqrt(1 + ur * ur));
    const long double a_diff = 2 * (r - s) * std::log(ur + std::sqrt(1 + ur * ur)) + 2 * s * std::log1p(arg + arg * arg / (1 + std::sqrt(1 + arg * arg)));
    const long double br = std::sqrt(2 * pi * k * r + pi * pi * k * k);
    const long double bs = std::sqrt(2 * pi * k * s + pi * pi * k * k);
    return a_diff + 2 * pi * k * (r - s) / (br + bs);
}

}  // namespace

cplx exp_sum_S(const ExpSumInstance& inst) {
    validate_instance(inst);
    CompensatedSum re, im;
    for (std::uint64_t k = inst.K + 1; k <= inst.K_prime; ++k) {
        const long double ph = phase_difference(inst.tau_r, inst.tau_s, static_cast<long double>(k));
        re += static_cast<double>(std::cos(ph));
        im += static_cast<double>(std::sin(ph));
    }
    const cplx S(re.value(), im.value());
    const double n = static_cast<double>(inst.term_count());
    if (std::abs(S) > n * (1.0 + 1e-12)) throw ConsistencyError("exp_sum: |S| exceeds the term count");
    return S;
}

cplx exp_sum_S_reference(const ExpSumInstance& inst) {
    validate_instance(inst);
    using ld = long double;
    const ld pi = 3.141592653589793238462643383279502884L;
    auto f = [&](ld t, ld k) { return 2 * t * std::asinh(std::sqrt(pi * k / (2 * t))) + std::sqrt(2 * pi * k * t + pi * pi * k * k); };
    ld re = 0, im = 0;
    for (std::uint64_t k = inst.K + 1; k <= inst.K_prime; ++k) {
        const ld kk = static_cast<ld>(k);
        const ld ph = f(inst.tau_r, kk) - f(inst.tau_s, kk);
        re += std::cos(ph);
        im += std::sin(ph);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

ExponentPairBound exponent_pair_bound(const ExpSumInstance& inst, const ExponentPair& pair) {
    validate_instance(inst);
    if (!(pair.kappa >= 0.0 && pair.kappa <= 0.5 && pair.lambda >= 0.5 && pair.lambda <= 1.0))
        throw DomainError("exponent_pair_bound: requires 0 <= kappa <= 1/2 <= lambda <= 1");
    const double K = static_cast<double>(inst.K);
    const double F = std::fabs(inst.tau_r - inst.tau_s) / std::sqrt(K * inst.T);
    if (F == 0.0) return {static_cast<double>(inst.term_count()), 0.0, true};
    return {std::pow(F, pair.kappa) * std::pow(K, pair.lambda) + 1.0 / F, F, false};
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kSamples = 2048;

double sample_weight_sup(const OscillatoryIntegrand& f) {
    if (f.weight_sup > 0.0) return f.weight_sup;
    double s = 0.0;
    for (int i = 0; i <= kSamples; ++i) s = std::max(s, std::fabs(f.weight(f.a + (f.b - f.a) * i / kSamples)));
    return s;
}

void check_integrand(const OscillatoryIntegrand& f) {
    if (!f.phase || !f.d1 || !f.weight) throw DomainError("oscillatory integrand: phase, d1 and weight are required");
    if (!(f.b > f.a)) throw DomainError("oscillatory integrand: requires a < b");
}

}  // namespace

cplx oscillatory_integral(const OscillatoryIntegrand& f, double rel_tol) {
    check_integrand(f);
    const double cap = (f.b - f.a) / 8.0;
    auto width = [&](double x) {
        double rate = std::fabs(f.d1(x));
        if (f.d2) rate = std::max(rate, std::sqrt(std::fabs(f.d2(x))));
        return rate > 0.0 ? std::min(cap, 0.1 * kTwoPi / rate) : cap;
    };
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.relative_to_l1 = true;
    return integrate_scaled([&](double x) -> cplx { return f.weight(x) * std::polar(1.0, f.phase(x)); }, f.a, f.b,
                            width, opt)
        .value;
}

DerivativeTest first_derivative_test(const OscillatoryIntegrand& f, double rel_tol) {
    check_integrand(f);
    const double ga = f.d1(f.a), gb = f.d1(f.b);
    if (!(ga * gb > 0.0)) throw DomainError("first_derivative_test: g' vanishes or changes sign");
    for (int i = 1; i < kSamples; ++i)
        if (!(f.d1(f.a + (f.b - f.a) * i / kSamples) * ga > 0.0))
            throw DomainError("first_derivative_test: g' vanishes or changes sign");
    DerivativeTest t{};
    t.m = std::min(std::fabs(ga), std::fabs(gb));
    t.bound = kFirstDerivativeC * sample_weight_sup(f) / t.m;
    t.direct = std::abs(oscillatory_integral(f, rel_tol));
    t.holds = t.direct <= t.bound;
    return t;
}

DerivativeTest second_derivative_test(const OscillatoryIntegrand& f, double rel_tol) {
    check_integrand(f);
    if (!f.d2) throw DomainError("second_derivative_test: g'' is required");
    const double s = f.d2(f.a);
    double lam = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kSamples; ++i) {
        const double v = f.d2(f.a + (f.b - f.a) * i / kSamples);
        if (!(v * s > 0.0)) throw DomainError("second_derivative_test: g'' vanishes or changes sign");
        lam = std::min(lam, std::fabs(v));
    }
    DerivativeTest t{};
    t.m = lam;
    t.bound = kSecondDerivativeC * sample_weight_sup(f) / std::sqrt(lam);
    t.direct = std::abs(oscillatory_integral(f, rel_tol));
    t.holds = t.direct <= t.bound;
    return t;
}

// ---------------------------------------------------------------------------

double Phi_weight(double x, double T) {
    return 2.0 * x * SmoothWindow(T, 2.0 * T, 0.5 * T)(x * x);
}

cplx osc_IT_stationary(double D, double E, double T) {
    if (!(D * E > 0.0)) return {0.0, 0.0};
    const double xs = std::sqrt(E / D);
    if (!(xs * xs > 0.5 * T && xs * xs < 2.5 * T)) return {0.0, 0.0};
    const double sgn = D > 0.0 ? 1.0 : -1.0;
    const double amp = std::sqrt(kPi) * std::pow(std::fabs(E), 0.25) * std::pow(std::fabs(D), -0.75);
    return std::polar(amp * Phi_weight(xs, T), sgn * (2.0 * std::sqrt(D * E) + 0.25 * kPi));
}

OscIntegralIT osc_integral_IT(double D, double E, double T, const OscRegime& regime, double rel_tol) {
    if (!(T >= 16.0)) throw DomainError("osc_integral_IT: requires T >= 16");
    if (!std::isfinite(D) || !std::isfinite(E)) throw DomainError("osc_integral_IT: D and E must be finite");
    OscIntegralIT out{};
    const double a = std::sqrt(0.5 * T), b = std::sqrt(2.5 * T);

    OscillatoryIntegrand f;
    f.phase = [=](double x) { return D * x + E / x; };
    f.d1 = [=](double x) { return D - E / (x * x); };
    f.d2 = [=](double x) { return 2.0 * E / (x * x * x); };
    f.weight = [=](double x) { return Phi_weight(x, T); };
    f.a = a;
    f.b = b;
    out.direct = oscillatory_integral(f, rel_tol);

    const bool positive = D > 0.0 && E > 0.0;
    out.saddle_bound = positive ? std::pow(E, 0.75) * std::pow(D, -1.25) : std::numeric_limits<double>::quiet_NaN();
    out.in_regime = positive && regime.C1 * E <= D * T && D * T <= regime.C2 * E;
    out.negligible = D > std::pow(T, regime.eps - 0.5) && (D * T > regime.C2 * E || D * T < regime.C1 * E);
    out.sp_reconstruction = osc_IT_stationary(D, E, T);
    out.has_saddle = out.sp_reconstruction != cplx(0.0, 0.0);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit_uniform(rng));
}

}  // namespace

ExpSumGrid exp_sum_grid(double T, std::size_t count, std::uint64_t seed, std::uint64_t K_hi, double F_lo,
                        double F_hi, const ExponentPair& pair) {
    if (!(K_hi >= 16)) throw DomainError("exp_sum_grid: requires K_hi >= 16");
    if (!(F_lo > 0.0 && F_hi > F_lo)) throw DomainError("exp_sum_grid: requires 0 < F_lo < F_hi");
    std::mt19937_64 rng(seed);
    std::vector<ExpSumInstance> insts;
    insts.reserve(count);
    while (insts.size() < count) {
        ExpSumInstance in;
        in.T = T;
        in.K = static_cast<std::uint64_t>(std::floor(log_uniform(rng, 16.0, static_cast<double>(K_hi))));
        in.K_prime = 2 * in.K;
        in.tau_s = T + T * unit_uniform(rng);
        const double F = log_uniform(rng, F_lo, F_hi);
        const double sign = unit_uniform(rng) < 0.5 ? -1.0 : 1.0;
        in.tau_r = in.tau_s + sign * F * std::sqrt(static_cast<double>(in.K) * T);
        if (!(in.tau_r > T / 3.0 && in.tau_r < 8.0 * T / 3.0)) continue;
        insts.push_back(in);
    }
    ExpSumGrid g;
    g.rows = parallel_map(insts.size(), [&](std::size_t i) {
        ExpSumGridRow row{};
        row.inst = insts[i];
        row.S = exp_sum_S(row.inst);
        const auto b = exponent_pair_bound(row.inst, pair);
        row.F = b.F;
        row.bound = b.bound;
        row.ratio = std::abs(row.S) / b.bound;
        return row;
    });
    for (const auto& r : g.rows) {
        g.max_ratio = std::max(g.max_ratio, r.ratio);
        if (std::abs(r.S) > static_cast<double>(r.inst.term_count()) * (1.0 + 1e-12)) g.triangle_ok = false;
    }
    return g;
}

// ---------------------------------------------------------------------------

ExperimentReport twelfth_moment_walkthrough(double T, double G, double eps, std::uint64_t seed) {
    if (!(T >= 1000.0 && T <= 1e5)) throw DomainError("twelfth_moment_walkthrough: requires 1e3 <= T <= 1e5");
    if (G == 0.0) G = std::cbrt(T);
    ExperimentReport rep;
    rep.config.experiment = "twelfth-moment";
    rep.config.T = T;
    rep.config.G = G;
    rep.config.eps = eps;
    rep.config.seed = seed;

    const auto pts = build_point_set(T, G, point_set_capacity(T, G), seed);
    const auto spec = make_divisor_spec(T, G, eps);
    const std::size_t R = pts.size();
    const std::uint64_t kmax = spec.k_max;
    const auto& taus = pts.centers;
    const DivisorTable d(std::max<std::uint64_t>(kmax, 1));

    // w_r = phi_r(tau_r) tau_r^{-1/4} with tau_r at the plateau centre.
    std::vector<double> w(R);
    for (std::size_t r = 0; r < R; ++r) w[r] = SmoothBump(pts.centers[r], G)(taus[r]) * std::pow(taus[r], -0.25);
    std::vector<double> f(R * kmax);
    for (std::size_t r = 0; r < R; ++r)
        for (std::uint64_t k = 1; k <= kmax; ++k) f[r * kmax + (k - 1)] = f_phase(taus[r], static_cast<double>(k));

    // Dyadic blocks (K, 2K] cut at k_max, after the single term k = 1.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
    for (std::uint64_t K = 1; K < kmax; K *= 2) blocks.emplace_back(K, std::min(2 * K, kmax));

    // Cauchy-Schwarz: |sum_k a_k Im z_k| <= (sum a_k^2)^{1/2} (sum |z_k|^2)^{1/2}.
    const double lhs = std::fabs(essential_sum(spec, pts, std::span<const double>(taus)));
    CompensatedSum a2, zsq;
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        const double dk = d(k);
        a2 += dk * dk / std::sqrt(static_cast<double>(k));
        CompensatedSum re, im;
        for (std::size_t r = 0; r < R; ++r) {
            re += w[r] * std::cos(f[r * kmax + (k - 1)]);
            im += w[r] * std::sin(f[r * kmax + (k - 1)]);
        }
        zsq += re.value() * re.value() + im.value() * im.value();
    }
    const double cs_rhs = G * std::sqrt(a2.value()) * std::sqrt(zsq.value());

    // Expansion of sum_k |z_k|^2 over pairs (r, s).
    struct PairStats {
        double off_real;
        double bound;
        std::vector<double> block_abs, block_bound;
    };
    auto per_r = parallel_map(R, [&](std::size_t r) {
        PairStats ps{0.0, 0.0, std::vector<double>(blocks.size(), 0.0), std::vector<double>(blocks.size(), 0.0)};
        CompensatedSum off, bnd;
        for (std::size_t s = 0; s < R; ++s) {
            if (s == r) continue;
            const double ws = w[r] * w[s];
            CompensatedSum tot_re;
            tot_re += std::cos(f[r * kmax] - f[s * kmax]);
            double pair_bound = 1.0;
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                CompensatedSum re, im;
                for (std::uint64_t k = blocks[j].first + 1; k <= blocks[j].second; ++k) {
                    const double ph = f[r * kmax + (k - 1)] - f[s * kmax + (k - 1)];
                    re += std::cos(ph);
                    im += std::sin(ph);
                }
                tot_re += re.value();
                ExpSumInstance in{taus[r], taus[s], blocks[j].first, blocks[j].second, T};
                const double b = exponent_pair_bound(in).bound;
                pair_bound += b;
                ps.block_abs[j] += std::hypot(re.value(), im.value());
                ps.block_bound[j] += b;
            }
            off += ws * tot_re.value();
            bnd += ws * pair_bound;
        }
        ps.off_real = off.value();
        ps.bound = bnd.value();
        return ps;
    });
    CompensatedSum diag, off, off_bound;
    for (std::size_t r = 0; r < R; ++r) {
        diag += w[r] * w[r] * static_cast<double>(kmax);
        off += per_r[r].off_real;
        off_bound += per_r[r].bound;
    }
    const double expansion_gap = std::fabs(zsq.value() - diag.value() - off.value());

    const double diag_pred = static_cast<double>(R) * std::pow(T, 0.5 + eps) / (G * G);
    const double J = std::pow(T, -eps) * G * G * G;

    rep.add("R", static_cast<double>(R), "number of well-spaced points in [T, 2T]");
    rep.add("k_max", static_cast<double>(kmax), "divisor-sum truncation T^{1+eps} G^{-2}");
    rep.add("essential_sum_abs", lhs, "G |sum_r phi_r tau_r^{-1/4} sum_k d(k) k^{-1/4} sin f|");
    rep.add("cauchy_schwarz_rhs", cs_rhs, "G (sum d(k)^2 k^{-1/2})^{1/2} (sum_k |sum_r ...|^2)^{1/2}");
    rep.add("sum_k_abs2", zsq.value(), "sum_k |sum_r phi_r tau_r^{-1/4} e^{i f(tau_r, k)}|^2");
    rep.add("diagonal", diag.value(), "r = s terms: k_max sum_r phi_r^2 tau_r^{-1/2}");
    rep.add("diagonal_predicted", diag_pred, "R T^{1/2+eps} G^{-2}");
    rep.add("diagonal_ratio", diag.value() / diag_pred, "diagonal / predicted");
    rep.add("off_diagonal", off.value(), "r != s terms, measured");
    rep.add("off_diagonal_bound", off_bound.value(), "r != s terms, exponent pair (1/2, 1/2) per dyadic block");
    rep.add("off_diagonal_ratio", off_bound.value() > 0.0 ? std::fabs(off.value()) / off_bound.value() : 0.0,
            "|off-diagonal| / exponent-pair bound");
    rep.add("expansion_gap", expansion_gap, "|sum_k |z_k|^2 - diagonal - off-diagonal|", 1e-8 * zsq.value());
    rep.add("J", J, "block length T^{-eps} G^3");
    rep.add("blocks", std::ceil(T / J), "ceil(T / J)");
    rep.add("R_bound_predicted", std::pow(T, 2.0 + eps) * std::pow(G, -6.0), "T^{2+eps} G^{-6}");
    rep.flag("cauchy_schwarz_holds", lhs <= cs_rhs * (1.0 + 1e-12), "Cauchy-Schwarz split");
    rep.flag("expansion_consistent", expansion_gap <= 1e-8 * std::max(1.0, zsq.value()), "pair expansion");

    auto& dy = rep.add_series("dyadic", "dyadic exponential sums over pairs r != s",
                              {"K", "K_prime", "mean_abs_S", "mean_bound", "ratio"});
    const double pairs = static_cast<double>(R) * static_cast<double>(R > 0 ? R - 1 : 0);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        double sa = 0.0, sb = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            sa += per_r[r].block_abs[j];
            sb += per_r[r].block_bound[j];
        }
        if (pairs > 0.0)
            dy.rows.push_back({static_cast<double>(blocks[j].first), static_cast<double>(blocks[j].second), sa / pairs,
                               sb / pairs, sb > 0.0 ? sa / sb : 0.0});
    }

    // Large values of |zeta| on one block [T, T + J], counted for a V grid.
    auto& lv = rep.add_series("large_values", "well-spaced points in [T, T + J] with |zeta| >= V",
                              {"V", "count", "count_times_blocks"});
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    const std::vector<double> Vs = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0};
    const auto counts = large_value_counts(T, T + J, Vs);
    for (std::size_t i = 0; i < Vs.size(); ++i) {
        const double c = static_cast<double>(counts[i]);
        if (c > prev) monotone = false;
        prev = c;
        lv.rows.push_back({Vs[i], c, c * (1.0 + T / J)});
    }
    rep.flag("large_value_count_nonincreasing", monotone, "count is monotone in V");
    return rep;
}

}  // namespace zetalab
