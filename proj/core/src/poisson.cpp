#include "zetalab/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zetalab/errors.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/parallel.hpp"
#include "zetalab/phase.hpp"
#include "zetalab/quadrature.hpp"

namespace zetalab {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Test functions

double TestFunction::support_lo() const {
    return kind == TestFunctionKind::Bump ? center - width : center - 5.0 * width;
}

double TestFunction::support_hi() const {
    return kind == TestFunctionKind::Bump ? center + width : center + 5.0 * width;
}

double TestFunction::operator()(double x) const {
    if (kind == TestFunctionKind::Bump)
        return scale * SmoothWindow(center - 0.5 * width, center + 0.5 * width, 0.5 * width)(x);
    const double z = (x - center) / width;
    return scale * std::exp(-0.5 * z * z) * SmoothWindow(center - 3.0 * width, center + 3.0 * width, 2.0 * width)(x);
}

std::string TestFunction::label() const {
    const char* k = kind == TestFunctionKind::Bump ? "bump" : "gaussian";
    return std::string(k) + "(c=" + std::to_string(center) + ",w=" + std::to_string(width) + ")";
}

std::vector<TestFunction> builtin_test_functions() {
    using K = TestFunctionKind;
    return {
        {K::Bump, 0.5, 0.3, 1.0},               // support (0.2, 0.8): no lattice points
        {K::Bump, 3.0, 0.1, 1.0},               // one lattice point
        {K::Bump, 5.0, 4.5, 1.0},               // generic bump on (0.5, 9.5)
        {K::Bump, 7.3, 2.2, 0.7},
        {K::TruncatedGaussian, 4.3, 0.6, 1.0},  // support (1.3, 7.3)
        {K::TruncatedGaussian, 12.0, 1.5, 2.0},
    };
}

namespace {

// 1 + 2 sum_{nu <= N} cos(2 pi nu r) = sin((2N+1) pi r) / sin(pi r), |r| <= 1/2.
double dirichlet_kernel(double r, std::uint64_t N) {
    const double M = 2.0 * static_cast<double>(N) + 1.0;
    if (std::fabs(r) < 1e-12) return M;
    return std::sin(M * kPi * r) / std::sin(kPi * r);
}

// Integral of f(n + r) g(r) over the support, split into unit cells around
// each integer n so the fast factor only ever sees the small exact offset r.
template <class Kernel>
QuadResult<double> integrate_by_cells(const TestFunction& f, Kernel g, double width, const QuadOptions& opt) {
    const double lo = f.support_lo(), hi = f.support_hi();
    QuadResult<double> total{};
    CompensatedSum value, l1;
    for (double n = std::nearbyint(lo); n <= std::nearbyint(hi); n += 1.0) {
        const double a = std::max(lo - n, -0.5), b = std::min(hi - n, 0.5);
        if (!(b > a)) continue;
        const auto br = scaled_breaks(a, b, [&](double) { return width; }, opt.max_panels);
        const auto r = integrate_breaks([&](double x) { return f(n + x) * g(x); }, std::span<const double>(br), opt);
        value += r.value;
        l1 += r.l1;
        total.error += r.error;
        total.evaluations += r.evaluations;
        total.panels += r.panels;
    }
    total.value = value.value();
    total.l1 = l1.value();
    return total;
}

}  // namespace

PoissonCheck poisson_check(const TestFunction& f, std::uint64_t n_max) {
    if (n_max < 1) throw DomainError("poisson_check: n_max must be >= 1");
    const double lo = f.support_lo(), hi = f.support_hi();
    if (!(lo > 0.0)) throw DomainError("poisson_check: test function must be supported in (0, inf)");

    PoissonCheck out{};
    CompensatedSum lhs;
    for (auto n = static_cast<std::uint64_t>(std::ceil(lo)); static_cast<double>(n) <= hi; ++n)
        if (n >= 1) lhs += f(static_cast<double>(n));
    out.lhs = lhs.value();

    // A quarter period of the kernel's carrier per panel.
    const double nu = static_cast<double>(n_max);
    const double w = 1.0 / (4.0 * nu);
    QuadOptions opt;
    opt.rel_tol = 1e-13;
    opt.relative_to_l1 = true;
    opt.max_panels = 20'000'000;
    const auto rhs = integrate_by_cells(f, [&](double r) { return dirichlet_kernel(r, n_max); }, w, opt);
    out.rhs = rhs.value;
    out.quad_error = rhs.error;
    const auto last = integrate_by_cells(f, [&](double r) { return std::cos(kTwoPi * nu * r); }, w, opt);
    out.truncation = 2.0 * std::fabs(last.value);
    return out;
}

// ---------------------------------------------------------------------------

DirichletMeanSquare dirichlet_poly_meansq(double T, double G, double N, double N1, double rel_tol) {
    if (!(G > 0.0) || !(T > 4.0 * G)) throw DomainError("dirichlet_poly_meansq: requires 0 < 4G < T");
    if (!(N >= std::pow(G, 1.05) * (1.0 - 1e-12) && N <= std::sqrt(T)))
        throw DomainError("dirichlet_poly_meansq: requires G^1.05 <= N <= sqrt(T)");
    if (!(N1 >= N && N1 <= 2.0 * N)) throw DomainError("dirichlet_poly_meansq: requires N <= N1 <= 2N");

    DirichletMeanSquare out{};
    out.n_lo = static_cast<std::uint64_t>(std::ceil(N));
    out.n_hi = static_cast<std::uint64_t>(std::floor(N1));
    const SmoothBump phi(T, G);
    out.phi_integral = phi.integral();
    if (out.n_hi < out.n_lo) return out;

    std::vector<double> log_n, amp;
    CompensatedSum inv;
    for (auto n = out.n_lo; n <= out.n_hi; ++n) {
        log_n.push_back(std::log(static_cast<double>(n)));
        amp.push_back(1.0 / std::sqrt(static_cast<double>(n)));
        inv += 1.0 / static_cast<double>(n);
    }
    out.diagonal = out.phi_integral * inv.value();

    auto integrand = [&](double t) {
        const double w = phi(t);
        if (w == 0.0) return 0.0;
        CompensatedSum re, im;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            const double a = t * log_n[i];
            re += amp[i] * std::cos(a);
            im += -amp[i] * std::sin(a);
        }
        return w * (re.value() * re.value() + im.value() * im.value());
    };
    const double spread = log_n.back() - log_n.front();
    const double width = spread > 0.0 ? std::min(0.25 * G, 0.1 * kTwoPi / spread) : 0.25 * G;
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    const auto r = integrate_scaled(integrand, T - 2.0 * G, T + 2.0 * G, [&](double) { return width; }, opt);
    out.value = r.value;
    out.off_diagonal = out.value - out.diagonal;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

SmoothWindow osc_window(const OscIntegralSpec& s) {
    return SmoothWindow(s.N, s.N1, s.G, s.G_hi > 0.0 ? s.G_hi : s.G);
}

void check_spec(const OscIntegralSpec& s) {
    if (!(s.t > 0.0) || s.ell < 1 || s.m < 1) throw DomainError("oscillatory integral: requires t > 0, l, m >= 1");
    if (!(s.N1 >= s.N) || !(s.G > 0.0) || !(s.N - s.G > 0.0))
        throw DomainError("oscillatory integral: requires 0 < N - G and N <= N1");
}

}  // namespace

double osc_phase(const OscIntegralSpec& s, double x) {
    const double l = static_cast<double>(s.ell);
    return s.t * std::log1p(l / x) + kTwoPi * static_cast<double>(s.m) * x;
}

double osc_phase_d1(const OscIntegralSpec& s, double x) {
    const double l = static_cast<double>(s.ell);
    return -s.t * l / (x * (x + l)) + kTwoPi * static_cast<double>(s.m);
}

double osc_phase_d2(const OscIntegralSpec& s, double x) {
    const double l = static_cast<double>(s.ell);
    // 1/x^2 - 1/(x+l)^2 = l (2x + l) / (x^2 (x+l)^2)
    return s.t * l * (2.0 * x + l) / (x * x * (x + l) * (x + l));
}

double osc_weight(const OscIntegralSpec& s, double x) {
    double w = s.weight_scale * osc_window(s)(x);
    if (s.dirichlet_weight && w != 0.0) w /= std::sqrt(x * (x + static_cast<double>(s.ell)));
    return w;
}

SaddleResult saddle_point(const OscIntegralSpec& s) {
    check_spec(s);
    const double l = static_cast<double>(s.ell);
    const double c = s.t * l / (kTwoPi * static_cast<double>(s.m));
    const double disc = l * l + 4.0 * c;
    if (!(disc > 0.0)) throw ConsistencyError("saddle_point: negative discriminant");
    SaddleResult r{};
    r.x0 = 2.0 * c / (l + std::sqrt(disc));
    r.Fp_at_x0 = osc_phase_d1(s, r.x0);
    r.Fpp_at_x0 = osc_phase_d2(s, r.x0);
    r.newton_step = -r.Fp_at_x0 / r.Fpp_at_x0;
    r.F_at_x0 = osc_phase(s, r.x0);
    r.amplitude = std::sqrt(kTwoPi / r.Fpp_at_x0);
    r.phase = r.F_at_x0 + 0.25 * kPi;
    r.inside = r.x0 >= s.N && r.x0 <= s.N1;
    return r;
}

std::complex<double> stationary_phase_value(const OscIntegralSpec& s) {
    const auto sp = saddle_point(s);
    if (!(sp.x0 > s.support_lo() && sp.x0 < s.support_hi())) return {0.0, 0.0};
    return std::polar(sp.amplitude * osc_weight(s, sp.x0), sp.phase);
}

StationaryPhase stationary_phase_eval(const OscIntegralSpec& s, double rel_tol) {
    check_spec(s);
    const auto sp = saddle_point(s);
    StationaryPhase out{};
    out.saddle_in_support = sp.x0 > s.support_lo() && sp.x0 < s.support_hi();
    out.sp_value = stationary_phase_value(s);
    out.separation = sp.Fpp_at_x0 * (s.N1 - s.N) * (s.N1 - s.N);

    const double ramp = std::min(s.G, s.G_hi > 0.0 ? s.G_hi : s.G);
    const double cap = std::min(ramp / 8.0, s.N1 > s.N ? (s.N1 - s.N) / 8.0 : ramp / 8.0);
    auto width = [&](double x) {
        const double rate = std::max(std::fabs(osc_phase_d1(s, x)), std::sqrt(osc_phase_d2(s, x)));
        return std::min(cap, 0.1 * kTwoPi / rate);
    };
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.relative_to_l1 = true;
    const auto r = integrate_scaled([&](double x) -> cplx { return osc_weight(s, x) * std::polar(1.0, osc_phase(s, x)); },
                                    s.support_lo(), s.support_hi(), width, opt);
    out.direct = r.value;
    const double d = std::abs(out.direct);
    out.rel_gap = d > 0.0 ? std::abs(out.sp_value - out.direct) / d : std::numeric_limits<double>::infinity();
    return out;
}

// ---------------------------------------------------------------------------

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    if (a.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

PipelineComparison pipeline_compare(double T, double G, const PipelineOptions& opt) {
    if (!(T > 0.0 && T <= 1e6)) throw DomainError("pipeline_compare: requires 0 < T <= 1e6");
    if (!(G > 0.0) || !(T > 4.0 * G)) throw DomainError("pipeline_compare: requires 0 < 4G < T");
    if (opt.k_cap < 1) throw DomainError("pipeline_compare: k_cap must be >= 1");

    PipelineComparison out{};
    out.T = T;
    out.G = G;
    const double kc = static_cast<double>(opt.k_cap);
    out.N_lo = opt.N_lo > 0.0 ? opt.N_lo : 0.5 * std::sqrt(T / (kTwoPi * kc));
    out.N_hi = opt.N_hi > 0.0 ? opt.N_hi : 2.0 * std::sqrt(T * kc / kTwoPi);
    if (!(out.N_hi > out.N_lo)) throw DomainError("pipeline_compare: empty N range");

    // Window j rises on [0.75 b_j, 1.25 b_j] and falls on [1.5 b_j, 2.5 b_j];
    // neighbouring transitions coincide, so the windows sum to 1 in between.
    for (double b = out.N_lo; ; b *= 2.0) {
        out.boundaries.push_back(b);
        if (b >= out.N_hi) break;
    }
    std::vector<SmoothWindow> windows;
    for (std::size_t j = 0; j + 1 < out.boundaries.size(); ++j) {
        const double b = out.boundaries[j];
        windows.emplace_back(1.25 * b, 1.5 * b, 0.5 * b, b);
    }

    const double ell_cap = std::pow(out.N_hi, 1.0 + opt.eps) / G;
    const double t_lo = T - 2.0 * G, t_hi = T + 2.0 * G;
    auto x0_at = [](double t, double l, double m) {
        const double c = t * l / (kTwoPi * m);
        return 2.0 * c / (l + std::sqrt(l * l + 4.0 * c));
    };

    struct CellKey {
        std::uint64_t ell, m;
        int window;
    };
    std::vector<CellKey> keys;
    for (std::uint64_t l = 1; l <= opt.k_cap && static_cast<double>(l) <= ell_cap; ++l) {
        for (std::uint64_t m = 1; l * m <= opt.k_cap; ++m) {
            const double lo = x0_at(t_lo, l, m), hi = x0_at(t_hi, l, m);
            for (std::size_t j = 0; j < windows.size(); ++j) {
                const auto& w = windows[j];
                if (hi <= w.support_lo() || lo >= w.support_hi()) continue;
                const double n_edge = w.support_lo();
                if (static_cast<double>(m) > std::pow(T, 1.0 + opt.eps) * static_cast<double>(l) / (n_edge * n_edge))
                    continue;
                keys.push_back({l, m, static_cast<int>(j)});
            }
        }
    }

    out.cells = parallel_map(keys.size(), [&](std::size_t i) {
        const auto key = keys[i];
        const auto& w = windows[static_cast<std::size_t>(key.window)];
        const double l = static_cast<double>(key.ell), m = static_cast<double>(key.m);
        OscIntegralSpec spec;
        spec.ell = key.ell;
        spec.m = key.m;
        spec.N = w.plateau_lo();
        spec.N1 = w.plateau_hi();
        spec.G = w.ramp_lo();
        spec.G_hi = w.ramp_hi();
        spec.dirichlet_weight = true;

        const SmoothBump phi(T, G);
        auto re_sp = [&](double t) {
            const double p = phi(t);
            if (p == 0.0) return 0.0;
            spec.t = t;
            return p * stationary_phase_value(spec).real();
        };
        auto width = [&](double t) { return std::min(0.25 * G, 0.1 * kTwoPi / std::log1p(l / x0_at(t, l, m))); };
        QuadOptions qo;
        qo.rel_tol = 1e-10;
        qo.relative_to_l1 = true;
        PipelineCell c{};
        c.ell = key.ell;
        c.m = key.m;
        c.k = key.ell * key.m;
        c.window = key.window;
        c.a_contribution = 2.0 * integrate_scaled(re_sp, t_lo, t_hi, width, qo).value;

        spec.t = T;
        c.x0 = x0_at(T, l, m);
        c.sp_value = stationary_phase_value(spec);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        c.direct = {nan, nan};
        c.rel_gap = nan;
        if (opt.direct_cells) {
            const auto e = stationary_phase_eval(spec);
            c.direct = e.direct;
            c.rel_gap = e.rel_gap;
        }
        return c;
    });

    out.a.assign(opt.k_cap, 0.0);
    out.b.assign(opt.k_cap, 0.0);
    out.cell_count.assign(opt.k_cap, 0);
    for (const auto& c : out.cells) {
        out.a[c.k - 1] += c.a_contribution;
        out.cell_count[c.k - 1] += 1;
    }
    const DivisorTable d(opt.k_cap);
    auto b_terms = parallel_map(opt.k_cap, [&](std::size_t i) {
        const std::uint64_t k = i + 1;
        if (out.cell_count[i] == 0) return 0.0;
        const double sign = (k % 2) ? -1.0 : 1.0;
        return -std::sqrt(2.0) * sign * d(k) * divisor_kernel_integral(T, G, k, WeightForm::Simplified);
    });
    out.b = std::move(b_terms);

    double sa = 0, sb = 0, sab = 0, max_gap = 0, max_b = 0;
    for (std::size_t i = 0; i < opt.k_cap; ++i) {
        sa += out.a[i];
        sb += out.b[i];
        sab += std::fabs(out.b[i]);
        max_gap = std::max(max_gap, std::fabs(out.a[i] - out.b[i]));
        max_b = std::max(max_b, std::fabs(out.b[i]));
    }
    out.aggregate_gap = sab > 0.0 ? std::fabs(sa - sb) / sab : 0.0;
    out.max_term_gap = max_b > 0.0 ? max_gap / max_b : 0.0;
    out.correlation = pearson(out.a, out.b);
    return out;
}

}  // namespace zetalab
