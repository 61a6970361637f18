#include "zetalab/quadruple.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "zetalab/errors.hpp"
#include "zetalab/expsum.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/parallel.hpp"
#include "zetalab/quadrature.hpp"

namespace zetalab {

using cplx = std::complex<double>;
using ld = long double;

const char* diag_class_name(DiagClass c) {
    switch (c) {
        case DiagClass::Pair: return "pair";
        case DiagClass::SwappedPair: return "swapped-pair";
        case DiagClass::SquarefreeFamily: return "squarefree-family";
        case DiagClass::NotDiagonal: return "not-diagonal";
    }
    return "?";
}

namespace {

constexpr std::uint64_t kMaxArg = 1'000'000'000;

void check_args(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t l) {
    for (auto v : {m, n, k, l})
        if (v < 1 || v > kMaxArg) throw DomainError("compute_DE: arguments must lie in [1, 1e9]");
}

// sqrt a - sqrt b with an exact numerator.
ld sqrt_diff(std::uint64_t a, std::uint64_t b) {
    if (a == b) return 0.0L;
    const ld num = static_cast<ld>(static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b));
    return num / (std::sqrt(static_cast<ld>(a)) + std::sqrt(static_cast<ld>(b)));
}

// a^{3/2} - b^{3/2} = (a^3 - b^3) / (a^{3/2} + b^{3/2}).
ld pow32_diff(std::uint64_t a, std::uint64_t b) {
    if (a == b) return 0.0L;
    const __int128 A = a, B = b;
    const __int128 num = A * A * A - B * B * B;
    const ld den = static_cast<ld>(a) * std::sqrt(static_cast<ld>(a)) + static_cast<ld>(b) * std::sqrt(static_cast<ld>(b));
    return static_cast<ld>(num) / den;
}

}  // namespace

bool exact_zero_D(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t l) {
    check_args(m, n, k, l);
    // sqrt v = a sqrt h; the sum vanishes iff the coefficients cancel for every core h.
    std::map<std::uint64_t, std::int64_t> coeff;
    const std::uint64_t v[4] = {m, n, k, l};
    for (int i = 0; i < 4; ++i) {
        const auto c = squarefree_core(v[i]);
        coeff[c.h] += (i < 2 ? 1 : -1) * static_cast<std::int64_t>(c.a);
    }
    return std::all_of(coeff.begin(), coeff.end(), [](const auto& e) { return e.second == 0; });
}

DEValue compute_DE(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t l) {
    check_args(m, n, k, l);
    DEValue out{};
    out.exact_zero = exact_zero_D(m, n, k, l);
    out.D = out.exact_zero ? 0.0 : static_cast<double>(static_cast<ld>(kDScale) * (sqrt_diff(m, k) + sqrt_diff(n, l)));
    out.E = static_cast<double>(static_cast<ld>(kEScale) * (pow32_diff(m, k) + pow32_diff(n, l)));
    return out;
}

Classification classify_diagonal(const Quadruple& q) {
    if (!exact_zero_D(q.m, q.n, q.k, q.l)) return {DiagClass::NotDiagonal, std::nullopt};
    if (q.m == q.k && q.n == q.l) return {DiagClass::Pair, std::nullopt};
    if (q.m == q.l && q.n == q.k) return {DiagClass::SwappedPair, std::nullopt};
    const auto cm = squarefree_core(q.m), cn = squarefree_core(q.n), ck = squarefree_core(q.k),
               cl = squarefree_core(q.l);
    if (cm.h == cn.h && cm.h == ck.h && cm.h == cl.h && cm.a + cn.a == ck.a + cl.a)
        return {DiagClass::SquarefreeFamily, DiagonalFamilyWitness{cm.h, cm.a, cn.a, ck.a, cl.a}};
    throw ConsistencyError("classify_diagonal: D = 0 without a witness for (" + std::to_string(q.m) + "," +
                           std::to_string(q.n) + "," + std::to_string(q.k) + "," + std::to_string(q.l) + ")");
}

std::vector<Quadruple> brute_force_diagonal(std::uint64_t K, std::uint64_t K_prime) {
    if (!(K_prime > K && K_prime <= 2 * K && 2 * K <= 400))
        throw DomainError("brute_force_diagonal: requires K < K' <= 2K <= 400");
    struct PairSum {
        ld s;
        std::uint64_t m, n;
    };
    std::vector<PairSum> sums;
    for (std::uint64_t m = K + 1; m <= K_prime; ++m)
        for (std::uint64_t n = K + 1; n <= K_prime; ++n)
            sums.push_back({std::sqrt(static_cast<ld>(m)) + std::sqrt(static_cast<ld>(n)), m, n});
    std::sort(sums.begin(), sums.end(), [](const PairSum& a, const PairSum& b) {
        return a.s != b.s ? a.s < b.s : (a.m != b.m ? a.m < b.m : a.n < b.n);
    });

    // Equal sums differ by rounding only (~1e-17); distinct sums of square roots
    // below 400 are separated by far more than the grouping tolerance.
    constexpr ld kTol = 1e-9L;
    std::vector<Quadruple> out;
    for (std::size_t i = 0; i < sums.size();) {
        std::size_t j = i + 1;
        while (j < sums.size() && sums[j].s - sums[j - 1].s <= kTol) ++j;
        for (std::size_t p = i; p < j; ++p)
            for (std::size_t q = i; q < j; ++q)
                if (exact_zero_D(sums[p].m, sums[p].n, sums[q].m, sums[q].n))
                    out.push_back({sums[p].m, sums[p].n, sums[q].m, sums[q].n});
        i = j;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Quadruple> enumerate_diagonal_families(std::uint64_t K, std::uint64_t K_prime) {
    if (!(K_prime > K)) throw DomainError("enumerate_diagonal_families: requires K < K'");
    std::set<Quadruple> all;
    for (std::uint64_t m = K + 1; m <= K_prime; ++m)
        for (std::uint64_t n = K + 1; n <= K_prime; ++n) {
            all.insert({m, n, m, n});
            all.insert({m, n, n, m});
        }
    for (std::uint64_t h = 1; h <= K_prime; ++h) {
        if (squarefree_core(h).a != 1) continue;  // h not squarefree
        std::vector<std::uint64_t> roots;
        for (std::uint64_t a = 1; a * a * h <= K_prime; ++a)
            if (a * a * h > K) roots.push_back(a);
        if (roots.empty()) continue;
        const std::set<std::uint64_t> in(roots.begin(), roots.end());
        for (auto al : roots)
            for (auto be : roots)
                for (auto ga : roots) {
                    if (al + be <= ga) continue;
                    const auto de = al + be - ga;
                    if (in.count(de)) all.insert({al * al * h, be * be * h, ga * ga * h, de * de * h});
                }
    }
    return {all.begin(), all.end()};
}

// ---------------------------------------------------------------------------

double d_window(std::uint64_t K, double eta) {
    return eta / (std::sqrt(static_cast<double>(K)) * kDScale);
}

namespace {

ld partial_s(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
    return std::sqrt(static_cast<ld>(m)) + std::sqrt(static_cast<ld>(n)) - std::sqrt(static_cast<ld>(k));
}

bool in_window(ld s, std::uint64_t l, ld half) { return std::fabs(s - std::sqrt(static_cast<ld>(l))) <= half; }

}  // namespace

std::vector<std::uint64_t> ell_scan(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t K,
                                    std::uint64_t K_prime, double eta) {
    const ld s = partial_s(m, n, k);
    const ld half = d_window(K, eta);
    std::vector<std::uint64_t> out;
    for (std::uint64_t l = K + 1; l <= K_prime; ++l)
        if (in_window(s, l, half)) out.push_back(l);
    return out;
}

EllCandidate ell_uniqueness(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t K, std::uint64_t K_prime,
                            double eta) {
    if (!(K >= 1 && K_prime > K)) throw DomainError("ell_uniqueness: requires 1 <= K < K'");
    if (!(eta > 0.0)) throw DomainError("ell_uniqueness: requires eta > 0");
    const ld s = partial_s(m, n, k);
    const ld half = d_window(K, eta);
    EllCandidate out{std::nullopt, 0.0, false};
    if (s + half <= 0.0L) return out;

    // Any admissible l satisfies |l - s^2| <= 2 s h + h^2.
    const ld rem = 2.0L * std::fabs(s) * half + half * half;
    out.remainder = static_cast<double>(rem);
    if (rem < 1.0L / 3.0L && s > 0.0L) {
        const ld s2 = s * s;  // m + n + k + 2(sqrt(mn) - sqrt(mk) - sqrt(nk))
        const ld r = std::nearbyint(s2);
        if (r >= static_cast<ld>(K + 1) && r <= static_cast<ld>(K_prime)) {
            const auto l = static_cast<std::uint64_t>(r);
            if (in_window(s, l, half)) out.ell = l;
        }
        return out;
    }
    out.used_fallback = true;
    const auto found = ell_scan(m, n, k, K, K_prime, eta);
    if (found.size() > 1) throw ConsistencyError("ell_uniqueness: two admissible l");
    if (!found.empty()) out.ell = found.front();
    return out;
}

double near_integer_distance(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
    const ld x = 2.0L * std::sqrt(static_cast<ld>(k)) * (std::sqrt(static_cast<ld>(m)) + std::sqrt(static_cast<ld>(n))) -
                 2.0L * std::sqrt(static_cast<ld>(m) * static_cast<ld>(n));
    return static_cast<double>(std::fabs(x - std::nearbyint(x)));
}

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t draw_in(std::mt19937_64& rng, std::uint64_t K) {
    return K + 1 + std::min<std::uint64_t>(K - 1, static_cast<std::uint64_t>(unit_uniform(rng) * static_cast<double>(K)));
}

}  // namespace

NearIntegerResult near_integer_count(std::uint64_t K, double delta, std::size_t samples, std::uint64_t seed) {
    if (!(delta > 0.0 && delta < 0.5)) throw DomainError("near_integer_count: requires 0 < delta < 1/2");
    if (!(K >= 1 && K <= 1'000'000)) throw DomainError("near_integer_count: requires 1 <= K <= 1e6");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> mn(samples);
    for (auto& p : mn) {
        p.first = draw_in(rng, K);
        p.second = draw_in(rng, K);
    }
    struct Count {
        std::uint64_t direct, floors;
    };
    auto counts = parallel_map(samples, [&](std::size_t i) {
        const auto [m, n] = mn[i];
        const ld sm = std::sqrt(static_cast<ld>(m)) + std::sqrt(static_cast<ld>(n));
        const ld c0 = 2.0L * std::sqrt(static_cast<ld>(m) * static_cast<ld>(n));
        Count c{0, 0};
        for (std::uint64_t k = K + 1; k <= 2 * K; ++k) {
            const ld x = 2.0L * std::sqrt(static_cast<ld>(k)) * sm - c0;
            if (std::fabs(x - std::nearbyint(x)) < delta) ++c.direct;
            c.floors += static_cast<std::uint64_t>(std::floor(x + delta) - std::floor(x - delta));
        }
        return c;
    });
    NearIntegerResult out{};
    out.K = K;
    out.delta = delta;
    out.floor_identity_ok = true;
    double sum = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        out.samples.push_back({mn[i].first, mn[i].second, counts[i].direct});
        out.max_count = std::max(out.max_count, static_cast<double>(counts[i].direct));
        sum += static_cast<double>(counts[i].direct);
        if (counts[i].direct != counts[i].floors) out.floor_identity_ok = false;
    }
    out.mean_count = samples ? sum / static_cast<double>(samples) : 0.0;
    const double Kd = static_cast<double>(K);
    out.bound = Kd * delta + std::pow(Kd, 2.0 / 3.0);
    out.ratio = out.max_count / out.bound;
    return out;
}

WindowStats d_window_scan(std::uint64_t K, double eta, std::size_t triples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    WindowStats st{};
    const double Kd = static_cast<double>(K);
    for (std::size_t i = 0; i < triples; ++i) {
        const auto m = draw_in(rng, K), n = draw_in(rng, K), k = draw_in(rng, K);
        const auto e = ell_uniqueness(m, n, k, K, 2 * K, eta);
        if (!e.ell) continue;
        const auto de = compute_DE(m, n, k, *e.ell);
        if (de.exact_zero) continue;
        ++st.admissible;
        st.max_near_ratio = std::max(st.max_near_ratio, near_integer_distance(m, n, k) / (std::fabs(de.D) * std::sqrt(Kd)));
        st.max_E_scaled = std::max(st.max_E_scaled, std::fabs(de.E) / std::pow(Kd, 1.5));
    }
    return st;
}

// ---------------------------------------------------------------------------

double moment_weight(double t, double T) { return SmoothWindow(T, 2.0 * T, 0.5 * T)(t); }

namespace {

struct KTerms {
    std::vector<double> amp, root, cube;  // (-1)^k d(k) k^{-1/4}, 2 sqrt(2 pi k), c k^{3/2}
};

KTerms k_terms(std::uint64_t K, std::uint64_t K_prime) {
    KTerms kt;
    if (K_prime <= K) return kt;
    const DivisorTable d(K_prime);
    for (std::uint64_t k = K + 1; k <= K_prime; ++k) {
        const double kk = static_cast<double>(k);
        kt.amp.push_back((k % 2 ? -1.0 : 1.0) * d(k) * std::pow(kk, -0.25));
        kt.root.push_back(2.0 * std::sqrt(kTwoPi * kk));
        kt.cube.push_back(kEScale * kk * std::sqrt(kk));
    }
    return kt;
}

}  // namespace

double moment_rhs(double T, std::uint64_t K, int M, double V, std::uint64_t K_prime, double rel_tol) {
    if (!(T >= 100.0 && T <= 1e5)) throw DomainError("moment_rhs: requires 100 <= T <= 1e5");
    if (M != 1 && M != 2) throw DomainError("moment_rhs: M must be 1 or 2");
    if (K_prime == 0) K_prime = 2 * K;
    if (V > 0.0 && static_cast<double>(K) > std::pow(T, 1.05) * std::pow(V, -4.0))
        throw DomainError("moment_rhs: requires K <= T^1.05 V^-4");
    const auto kt = k_terms(K, K_prime);
    if (kt.amp.empty()) return 0.0;

    auto integrand = [&](double t) {
        const double w = moment_weight(t, T);
        if (w == 0.0) return 0.0;
        const double st = std::sqrt(t), ist = 1.0 / st;
        CompensatedSum re, im;
        for (std::size_t i = 0; i < kt.amp.size(); ++i) {
            const double th = kt.root[i] * st + kt.cube[i] * ist;
            re += kt.amp[i] * std::cos(th);
            im += kt.amp[i] * std::sin(th);
        }
        const double a2 = re.value() * re.value() + im.value() * im.value();
        return w * (M == 1 ? a2 : a2 * a2);
    };
    const double top = std::sqrt(kTwoPi * static_cast<double>(K_prime));
    auto width = [&](double t) { return std::min(T / 16.0, 0.1 * kTwoPi / (2.0 * M * top / std::sqrt(t))); };
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    return integrate_scaled(integrand, 0.5 * T, 2.5 * T, width, opt).value;
}

M1Decomposition moment_rhs_m1_decomposition(double T, std::uint64_t K, std::uint64_t K_prime) {
    if (K_prime == 0) K_prime = 2 * K;
    const auto kt = k_terms(K, K_prime);
    const double phi_int = SmoothWindow(T, 2.0 * T, 0.5 * T).integral();
    M1Decomposition out{};
    out.bounds_hold = true;
    CompensatedSum diag;
    for (double a : kt.amp) diag += a * a * phi_int;
    out.diagonal = diag.value();

    struct PairValue {
        double value, bound;
        bool holds;
    };
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < kt.amp.size(); ++i)
        for (std::size_t j = i + 1; j < kt.amp.size(); ++j) pairs.emplace_back(i, j);
    auto vals = parallel_map(pairs.size(), [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        const double dr = kt.root[i] - kt.root[j], dc = kt.cube[i] - kt.cube[j];
        OscillatoryIntegrand f;
        f.phase = [=](double t) { return dr * std::sqrt(t) + dc / std::sqrt(t); };
        f.d1 = [=](double t) { return 0.5 * dr / std::sqrt(t) - 0.5 * dc / (t * std::sqrt(t)); };
        f.d2 = [=](double t) { return -0.25 * dr / (t * std::sqrt(t)) + 0.75 * dc / (t * t * std::sqrt(t)); };
        f.weight = [=](double t) { return moment_weight(t, T); };
        f.weight_sup = 1.0;
        f.a = 0.5 * T;
        f.b = 2.5 * T;
        const auto test = first_derivative_test(f, 1e-11);
        const double amp = 2.0 * kt.amp[i] * kt.amp[j];
        return PairValue{amp * oscillatory_integral(f, 1e-11).real(), std::fabs(amp) * test.bound, test.holds};
    });
    CompensatedSum off, bound;
    for (const auto& v : vals) {
        off += v.value;
        bound += v.bound;
        out.bounds_hold = out.bounds_hold && v.holds;
    }
    out.off_diagonal = off.value();
    out.off_bound = bound.value();
    out.total = out.diagonal + out.off_diagonal;
    out.direct = moment_rhs(T, K, 1, 0.0, K_prime, 1e-11);
    out.rel_gap = std::fabs(out.total - out.direct) / std::fabs(out.direct);
    return out;
}

// ---------------------------------------------------------------------------

QuadrupleSum quadruple_moment_sum(double T, std::uint64_t K, std::size_t cap) {
    if (!(K >= 1 && K <= 60)) throw DomainError("quadruple_moment_sum: requires 1 <= K <= 60");
    if (!(T >= 100.0 && T <= 1e5)) throw DomainError("quadruple_moment_sum: requires 100 <= T <= 1e5");
    const std::uint64_t Kp = 2 * K;
    const DivisorTable d(Kp);
    const double phi_int = SmoothWindow(T, 2.0 * T, 0.5 * T).integral();

    const std::uint64_t span = K;
    const std::uint64_t total = span * span * span * span;
    QuadrupleSum out{};
    out.partial = total > cap;
    const std::uint64_t count = std::min<std::uint64_t>(total, cap);

    auto coef = [&](std::uint64_t v) { return d(v) * std::pow(static_cast<double>(v), -0.25); };
    struct Partial {
        CompensatedSum diag, fam_re, fam_im, off_re, off_im;
        std::size_t dcount = 0, fcount = 0;
    };
    constexpr std::uint64_t kChunk = 64;
    const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
    auto parts = parallel_map(chunks, [&](std::size_t c) {
        Partial p;
        for (std::uint64_t idx = c * kChunk; idx < std::min(count, (c + 1) * kChunk); ++idx) {
            // Lexicographic order over (m, n, k, l).
            std::uint64_t r = idx;
            const std::uint64_t l = K + 1 + r % span;
            r /= span;
            const std::uint64_t k = K + 1 + r % span;
            r /= span;
            const std::uint64_t n = K + 1 + r % span;
            r /= span;
            const std::uint64_t m = K + 1 + r;
            const double sign = ((m + n + k + l) % 2) ? -1.0 : 1.0;
            const double w = sign * coef(m) * coef(n) * coef(k) * coef(l);
            const auto cls = classify_diagonal({m, n, k, l}).cls;
            if (cls == DiagClass::Pair || cls == DiagClass::SwappedPair) {
                p.diag += w * phi_int;
                ++p.dcount;
                continue;
            }
            const auto de = compute_DE(m, n, k, l);
            const auto I = osc_integral_IT(de.D, de.E, T, {}, 1e-11).direct;
            if (cls == DiagClass::SquarefreeFamily) {
                p.fam_re += w * I.real();
                p.fam_im += w * I.imag();
                ++p.fcount;
            } else {
                p.off_re += w * I.real();
                p.off_im += w * I.imag();
            }
        }
        return p;
    });
    CompensatedSum diag, fre, fim, ore, oim;
    for (const auto& p : parts) {
        diag += p.diag.value();
        fre += p.fam_re.value();
        fim += p.fam_im.value();
        ore += p.off_re.value();
        oim += p.off_im.value();
        out.diagonal_count += p.dcount;
        out.family_count += p.fcount;
    }
    out.evaluated = count;
    out.diagonal = diag.value();
    out.family = {fre.value(), fim.value()};
    out.off_diagonal = {ore.value(), oim.value()};
    out.total = out.diagonal + out.family + out.off_diagonal;
    return out;
}

RestrictedSum restricted_saddle_sum(double T, std::uint64_t K, double eta, double C1, double C2, double C_near) {
    if (!(K >= 1 && K <= 1000)) throw DomainError("restricted_saddle_sum: requires 1 <= K <= 1000");
    if (!(C1 > 0.0 && C2 > C1)) throw DomainError("restricted_saddle_sum: requires 0 < C1 < C2");
    const std::uint64_t Kp = 2 * K;
    const DivisorTable d(Kp);
    const double sqrtK = std::sqrt(static_cast<double>(K));
    auto coef = [&](std::uint64_t v) { return d(v) * std::pow(static_cast<double>(v), -0.25); };

    auto stripes = parallel_map(K, [&](std::size_t i) {
        const std::uint64_t m = K + 1 + i;
        std::vector<RestrictedTerm> terms;
        for (std::uint64_t n = K + 1; n <= Kp; ++n)
            for (std::uint64_t k = K + 1; k <= Kp; ++k) {
                const auto e = ell_uniqueness(m, n, k, K, Kp, eta);
                if (!e.ell) continue;
                const std::uint64_t l = *e.ell;
                const auto de = compute_DE(m, n, k, l);
                if (de.exact_zero || !(de.D > 0.0 && de.E > 0.0)) continue;
                if (!(C1 * de.E <= de.D * T && de.D * T <= C2 * de.E)) continue;
                if (!(near_integer_distance(m, n, k) <= C_near * de.D * sqrtK)) continue;
                RestrictedTerm t{};
                t.q = {m, n, k, l};
                t.D = de.D;
                t.E = de.E;
                t.weight = (((m + n + k + l) % 2) ? -1.0 : 1.0) * coef(m) * coef(n) * coef(k) * coef(l);
                const double amp = Phi_weight(std::sqrt(de.E / de.D), T) * std::pow(de.E, 0.25) * std::pow(de.D, -0.75);
                t.term = t.weight * std::polar(amp, 2.0 * std::sqrt(de.D * de.E));
                terms.push_back(t);
            }
        return terms;
    });
    RestrictedSum out{};
    CompensatedSum re, im, ab;
    for (auto& s : stripes)
        for (auto& t : s) {
            re += t.term.real();
            im += t.term.imag();
            ab += std::abs(t.term);
            out.terms.push_back(t);
        }
    out.value = {re.value(), im.value()};
    out.abs_sum = ab.value();
    out.count = out.terms.size();
    return out;
}

}  // namespace zetalab
