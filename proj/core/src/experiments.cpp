#include "zetalab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "zetalab/errors.hpp"
#include "zetalab/expsum.hpp"
#include "zetalab/intervals.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/parallel.hpp"
#include "zetalab/poisson.hpp"
#include "zetalab/quadrature.hpp"
#include "zetalab/quadruple.hpp"
#include "zetalab/zeta.hpp"

namespace zetalab {

using cplx = std::complex<double>;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Platform-independent draws; std distributions are implementation-defined.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }
double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit_uniform(rng));
}
std::uint64_t uniform_int(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return lo + rng() % (hi - lo + 1);
}

double d(std::uint64_t v) { return static_cast<double>(v); }

struct Defaults {
    double T = 0.0, G = 0.0, V = 0.0;
    std::uint64_t K = 0, count = 0;
    int M = 0;
};

const std::map<std::string, Defaults>& default_table() {
    // G = 0 after resolution means "T^{1/3}" where the experiment uses a bump radius.
    static const std::map<std::string, Defaults> t = {
        {"zeta-check", {1e5, 0, 0, 0, 1000, 0}},
        {"error-term", {1e4, 0, 0, 0, 0, 0}},
        {"smoothed-vs-classical", {1e4, 20, 0, 8, 100, 0}},
        {"large-values", {1e4, 0, 3, 0, 0, 0}},
        {"atkinson", {1e4, 0, 0, 0, 8, 0}},
        {"fit-taylor", {0, 0, 0, 0, 9, 0}},
        {"taylor-dominance", {1e8, 0, 0, 0, 400, 0}},
        {"poisson", {0, 0, 0, 0, 10000, 0}},
        {"saddle", {1e6, 0, 0, 0, 8, 0}},
        {"dirichlet-meansq", {1e4, 0, 0, 0, 0, 0}},
        {"pipeline", {1e5, 0, 0, 50, 0, 0}},
        {"derivative-tests", {1e4, 0, 0, 0, 1000, 0}},
        {"exp-sum-grid", {1e5, 0, 0, 4096, 500, 0}},
        {"oscillatory-integral", {1e4, 0, 0, 0, 12, 0}},
        {"twelfth-moment", {1e4, 0, 0, 0, 0, 0}},
        {"diagonal", {0, 0, 0, 200, 0, 0}},
        {"ell-uniqueness", {0, 0, 0, 10000, 10000, 0}},
        {"near-integer", {0, 0, 0, 100000, 200, 0}},
        {"moment-rhs", {1e4, 0, 0, 16, 0, 1}},
        {"quadruple-sum", {1e4, 0, 0, 8, 200000, 2}},
        {"restricted-sum", {1e5, 0, 0, 200, 0, 0}},
    };
    return t;
}

// ---------------------------------------------------------------------------

ExperimentReport zeta_check(const ExperimentConfig& c) {
    ExperimentReport rep;
    std::mt19937_64 rng(c.seed);
    std::vector<double> ts(c.count);
    for (auto& t : ts) t = uniform(rng, 10.0, c.T);

    struct Row { double t, rs, em; };
    const auto rows = parallel_map(ts.size(), [&](std::size_t i) {
        const double z = riemann_siegel_z(ts[i]);
        return Row{ts[i], z * z, zeta_abs2_euler_maclaurin(ts[i])};
    });
    auto& s = rep.add_series("samples", "random heights: Riemann-Siegel vs Euler-Maclaurin |zeta|^2",
                             {"t", "rs_abs2", "em_abs2", "abs_error"});
    double max_err = 0.0, worst_t = kNaN;
    for (const auto& r : rows) {
        const double e = std::fabs(r.rs - r.em);
        if (!(e <= max_err)) worst_t = r.t;
        max_err = std::max(max_err, e);
        s.rows.push_back({r.t, r.rs, r.em, e});
    }
    rep.add("rs_max_abs_error", max_err, "max |Z(t)^2 - |zeta_EM|^2| over the random sample", 1e-6);
    rep.add("rs_worst_t", worst_t, "height of the largest deviation");
    rep.flag("rs_matches_em", max_err <= 1e-6, "Riemann-Siegel vs Euler-Maclaurin, 1e-6 absolute");

    // The production evaluator below the switch height, against Euler-Maclaurin with doubled length.
    double disp_err = 0.0;
    for (double t = 10.0; t <= kRiemannSiegelMinHeight + 50.0; t += 1.0) {
        const double ref = zeta_abs2_euler_maclaurin(t, 2 * static_cast<std::size_t>(t) + 200);
        disp_err = std::max(disp_err, std::fabs(zeta_abs2_critical(t) - ref));
    }
    rep.add("dispatcher_max_abs_error", disp_err, "zeta_abs2_critical on [10, 250] vs long Euler-Maclaurin", 1e-6);
    rep.flag("dispatcher_matches_em", disp_err <= 1e-6, "dispatching evaluator, 1e-6 absolute");

    double chi_err = 0.0;
    auto& cs = rep.add_series("chi", "|chi(1/2 + it)| on a log grid", {"t", "abs_chi"});
    for (int i = 0; i <= 200; ++i) {
        const double t = std::pow(10.0, 4.0 * i / 200.0);
        const double m = chi_modulus_check(t);
        chi_err = std::max(chi_err, std::fabs(m - 1.0));
        cs.rows.push_back({t, m});
    }
    rep.add("chi_max_deviation", chi_err, "max ||chi(1/2+it)| - 1| for 1 <= t <= 1e4", 1e-8);
    rep.flag("chi_unit_modulus", chi_err <= 1e-8, "functional-equation factor has modulus one");

    // First zero: bisection on Z built from the Euler-Maclaurin value.
    auto Z = [](double t) {
        const cplx z = zeta_euler_maclaurin(cplx(0.5, t));
        return (std::polar(1.0, rs_theta(t)) * z).real();
    };
    double lo = 14.0, hi = 14.3;
    const bool bracket = Z(lo) * Z(hi) < 0.0;
    for (int i = 0; bracket && i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (Z(lo) * Z(mid) <= 0.0 ? hi : lo) = mid;
    }
    const double root = 0.5 * (lo + hi);
    const double at_root = zeta_abs2_critical(root);
    rep.add("first_zero", root, "bisection root of Z near 14.1347");
    rep.add("abs2_at_first_zero", at_root, "|zeta|^2 at the bisected root", 1e-8);
    rep.flag("first_zero_found", bracket && at_root < 1e-8, "sign change of Z brackets the first zero");
    return rep;
}

ExperimentReport error_term_experiment(const ExperimentConfig& c) {
    ExperimentReport rep;
    auto& s = rep.add_series("heights", "E(T) by two quadrature schemes",
                             {"T", "integral_gk", "integral_simpson", "main_term", "E_gk", "E_simpson", "rel_gap"});
    double max_gap = 0.0;
    for (double T : {50.0, 1e2, 1e3, 1e4, 1e5}) {
        if (T > c.T) break;
        const auto a = error_term(T, QuadratureScheme::GaussKronrod);
        const auto b = error_term(T, QuadratureScheme::Simpson);
        const double gap = std::fabs(a.integral - b.integral) / std::fabs(b.integral);
        max_gap = std::max(max_gap, gap);
        s.rows.push_back({T, a.integral, b.integral, a.main_term, a.e_value, b.e_value, gap});
    }
    rep.add("max_scheme_gap", max_gap, "max relative gap, Gauss-Kronrod vs doubled Simpson", 1e-6);
    rep.flag("schemes_agree", max_gap <= 1e-6, "two quadrature schemes agree to 1e-6 relative");

    const double hi = std::min(2000.0, std::max(c.T, 100.0));
    const auto series = error_term_series(10.0, hi, 5.0);
    auto& es = rep.add_series("series", "E(T) on a uniform grid", {"T", "E"});
    int changes = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        es.rows.push_back({series[i].T, series[i].e_value});
        if (i > 0 && (series[i].e_value > 0.0) != (series[i - 1].e_value > 0.0)) ++changes;
    }
    rep.add("sign_changes", changes, "sign changes of E on the grid over [10, " + std::to_string(int(hi)) + "]");
    rep.flag("sign_change", changes >= 1, "E changes sign");
    return rep;
}

ExperimentReport smoothed_vs_classical(const ExperimentConfig& c) {
    ExperimentReport rep;
    auto& s = rep.add_series("sets", "per point set: smoothed and classical sums",
                             {"seed", "R", "smoothed", "classical", "margin"});
    bool major = true, disjoint = true, valid = true;
    double total_s = 0.0, total_c = 0.0;
    const auto sums = parallel_map(c.count, [&](std::size_t i) {
        const auto p = build_point_set(c.T, c.G, c.K, c.seed + i);
        return std::make_tuple(p, interval_sums(p, c.tol));
    });
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const auto& [p, r] = sums[i];
        major = major && r.classical <= r.smoothed;
        disjoint = disjoint && supports_disjoint(p);
        valid = valid && validate_point_set(p).ok;
        total_s += r.smoothed;
        total_c += r.classical;
        s.rows.push_back({d(c.seed + i), d(p.size()), r.smoothed, r.classical, r.smoothed - r.classical});
    }
    rep.add("sets", d(c.count), "seeded point sets");
    rep.add("smoothed_total", total_s, "sum over sets of sum_r integral phi_r |zeta|^2");
    rep.add("classical_total", total_c, "sum over sets of sum_r integral over [t_r - G, t_r + G]");
    rep.flag("majorization", major, "classical sum <= smoothed sum on every set");
    rep.flag("supports_disjoint", disjoint, "supports [t_r - 2G, t_r + 2G] pairwise disjoint");
    rep.flag("point_sets_valid", valid, "spacing, range and G window");
    return rep;
}

ExperimentReport large_values(const ExperimentConfig& c) {
    ExperimentReport rep;
    const auto set = select_large_values(c.T, c.V);
    bool sound = true, spaced = true;
    for (std::size_t i = 0; i < set.points.size(); ++i) {
        const double check = std::sqrt(zeta_abs2_euler_maclaurin(set.points[i]));
        sound = sound && check >= c.V * (1.0 - 1e-9);
        if (i > 0) spaced = spaced && set.points[i] - set.points[i - 1] >= 1.0;
    }
    rep.add("count", d(set.points.size()), "greedy well-spaced points in [T, 2T] with |zeta| >= V");
    rep.add("radius", large_value_radius(c.V, c.T, c.eps), "grouping radius V^2 T^{-eps}");
    rep.flag("values_recheck", sound, "every point re-evaluated by Euler-Maclaurin has |zeta| >= V");
    rep.flag("unit_spacing", spaced, "selected points at mutual distance >= 1");
    auto& ps = rep.add_series("points", "selected large values", {"t", "abs_zeta"});
    for (std::size_t i = 0; i < set.points.size(); ++i) ps.rows.push_back({set.points[i], set.values[i]});

    const std::vector<double> Vs = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0};
    const auto counts = large_value_counts(c.T, 2.0 * c.T, Vs);
    auto& cs = rep.add_series("counts", "count against threshold", {"V", "count"});
    bool mono = true;
    for (std::size_t i = 0; i < Vs.size(); ++i) {
        cs.rows.push_back({Vs[i], d(counts[i])});
        if (i > 0 && counts[i] > counts[i - 1]) mono = false;
    }
    rep.flag("count_nonincreasing", mono, "count is non-increasing in V");

    // Local bound |zeta|^2 <= C log t (integral over [t-1, t+1] + 1).
    std::mt19937_64 rng(c.seed);
    const std::size_t n = 200;
    std::vector<double> ts(n);
    for (auto& t : ts) t = uniform(rng, 100.0, std::min(c.T, 1e4));
    const auto b = parallel_map(n, [&](std::size_t i) { return local_mean_square_bound(ts[i]); });
    double max_ratio = 0.0;
    for (const auto& x : b) max_ratio = std::max(max_ratio, x.ratio);
    rep.add("local_bound_max_ratio", max_ratio, "max |zeta|^2 / (log t (integral over [t-1,t+1] + 1))", 2.0);
    rep.flag("local_bound", max_ratio < 2.0, "local mean-square bound ratio below 2");
    return rep;
}

ExperimentReport atkinson(const ExperimentConfig& c) {
    ExperimentReport rep;
    std::mt19937_64 rng(c.seed);
    std::vector<double> centers(c.count);
    for (auto& x : centers) x = uniform(rng, c.T, 2.0 * c.T);
    const auto rows = parallel_map(centers.size(), [&](std::size_t i) {
        const auto a = atkinson_comparison(centers[i], c.G, c.eps);
        SamplePointSet single;
        single.T = centers[i];
        single.G = c.G;
        single.centers = {centers[i]};
        const auto spec = make_divisor_spec(centers[i], c.G, c.eps);
        const auto full = divisor_expression(spec, single, WeightForm::Full, true, 1e-11);
        const auto simp = divisor_expression(spec, single, WeightForm::Simplified, true, 1e-11);
        double l1 = 0.0, diff = 0.0;
        for (std::size_t k = 0; k < full.k_terms.size(); ++k) {
            l1 += std::fabs(full.k_terms[k]);
            diff += full.k_terms[k] - simp.k_terms[k];
        }
        return std::make_tuple(a, std::fabs(diff) / l1);
    });
    auto& s = rep.add_series("centers", "smoothed integral against the divisor expression",
                             {"center", "k_max", "smoothed", "main_term", "divisor_full", "divisor_simplified",
                              "remainder_scaled", "form_gap", "form_gap_bound"});
    bool rem_ok = true, form_ok = true;
    double max_rem = 0.0, max_form = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [a, form_gap] = rows[i];
        const double res = a.smoothed - a.main_term + std::sqrt(2.0) * a.divisor_full;
        const double scaled = std::fabs(res) / (c.G * std::pow(centers[i], 0.05));
        const double form_bound = 3.0 * d(a.k_max) / centers[i];
        max_rem = std::max(max_rem, scaled);
        max_form = std::max(max_form, form_gap / form_bound);
        rem_ok = rem_ok && scaled <= kAtkinsonRemainderC;
        form_ok = form_ok && form_gap <= form_bound;
        s.rows.push_back({centers[i], d(a.k_max), a.smoothed, a.main_term, a.divisor_full, a.divisor_simplified,
                          scaled, form_gap, form_bound});
    }
    rep.add("max_remainder_scaled", max_rem,
            "max |smoothed - main + sqrt2 divisor_full| / (G T^0.05)", kAtkinsonRemainderC);
    rep.add("max_form_gap_ratio", max_form, "max (|full - simplified| / l1 of k-terms) / (3 k_max / T)", 1.0);
    rep.flag("remainder_within_budget", rem_ok, "remainder within the fitted budget C G T^0.05");
    rep.flag("forms_agree", form_ok, "full and simplified weights agree to 3 k_max / T");
    return rep;
}

ExperimentReport fit_taylor(const ExperimentConfig& c) {
    ExperimentReport rep;
    const int levels = static_cast<int>(c.count);
    const auto a = fit_taylor_coefficients(1.0, 10.0, levels);
    const auto b = fit_taylor_coefficients(3.0, 37.0, levels);
    const double gap5 = std::fabs(a.a5 - b.a5) / std::fabs(b.a5);
    const double gap7 = std::fabs(a.a7 - b.a7) / std::fabs(b.a7);
    rep.add("a5_grid1", a.a5, "Richardson fit, k = 1, t = 10 * 2^j");
    rep.add("a5_grid2", b.a5, "Richardson fit, k = 3, t = 37 * 2^j");
    rep.add("a7_grid1", a.a7, "Richardson fit, k = 1");
    rep.add("a7_grid2", b.a7, "Richardson fit, k = 3");
    rep.add("a5_grid_gap", gap5, "relative a5 change between the disjoint grids", 1e-6);
    rep.add("a7_grid_gap", gap7, "relative a7 change between the disjoint grids");
    rep.add("a5_frozen_gap", std::fabs(a.a5 - kTaylorA5) / std::fabs(kTaylorA5), "fit vs frozen a5", 1e-6);
    rep.add("a7_frozen_gap", std::fabs(a.a7 - kTaylorA7) / std::fabs(kTaylorA7), "fit vs frozen a7", 1e-4);
    rep.flag("a5_stable", gap5 < 1e-6, "a5 refits agree to 1e-6");
    rep.flag("a5_matches_frozen", std::fabs(a.a5 - kTaylorA5) < 1e-6 * std::fabs(kTaylorA5), "frozen a5 reproduced");
    rep.flag("a7_matches_frozen", std::fabs(a.a7 - kTaylorA7) < 1e-4 * std::fabs(kTaylorA7), "frozen a7 reproduced");
    return rep;
}

ExperimentReport taylor_dominance_exp(const ExperimentConfig& c, const PhaseModel& model) {
    ExperimentReport rep;
    auto& s = rep.add_series("grid", "expansion terms on the window k^{5/2} t^{-3/2} <= 1e-2",
                             {"t", "k", "min_ratio", "err_depth2", "bound_depth2", "err_depth3", "bound_depth3"});
    const std::size_t side = static_cast<std::size_t>(std::max(2.0, std::floor(std::sqrt(d(c.count)))));
    double min_ratio = std::numeric_limits<double>::infinity();
    double worst2 = 0.0, worst3 = 0.0;
    for (std::size_t i = 0; i < side; ++i) {
        const double t = std::pow(10.0, 3.0 + (std::log10(c.T) - 3.0) * d(i) / d(side - 1));
        const double k_hi = std::floor(std::pow(1e-2 * std::pow(t, 1.5), 0.4));
        if (k_hi < 1.0) continue;
        for (std::size_t j = 0; j < side; ++j) {
            const double k = std::max(1.0, std::round(std::pow(k_hi, d(j) / d(side - 1))));
            const double r = taylor_dominance(t, k, model);
            const double f = f_phase(t, k);
            // Roundoff floor of the comparison: a few ulps of the phase itself.
            const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(f);
            const double e2 = std::fabs(f - f_taylor(t, k, 2, model));
            const double e3 = std::fabs(f - f_taylor(t, k, 3, model));
            const double b2 = 2.0 * std::pow(k, 2.5) * std::pow(t, -1.5) + floor;
            const double b3 = 2.0 * std::fabs(kTaylorA7) * std::pow(k, 3.5) * std::pow(t, -2.5) + floor;
            min_ratio = std::min(min_ratio, r);
            worst2 = std::max(worst2, e2 / b2);
            worst3 = std::max(worst3, e3 / b3);
            s.rows.push_back({t, k, r, e2, b2, e3, b3});
        }
    }
    rep.add("a5_used", model.a5, "a5 coefficient under test");
    rep.add("min_term_ratio", min_ratio, "min |term_j / term_{j+1}| over the window", 5.0);
    rep.add("worst_depth2_ratio", worst2, "max |f - f_taylor(2)| / (2 k^{5/2} t^{-3/2})", 1.0);
    rep.add("worst_depth3_ratio", worst3, "max |f - f_taylor(3)| / (2 |a7| k^{7/2} t^{-5/2})", 1.0);
    rep.flag("terms_descend", min_ratio >= 5.0, "successive terms shrink by at least 5");
    rep.flag("depth2_remainder", worst2 <= 1.0, "three displayed terms leave at most 2 k^{5/2} t^{-3/2}");
    rep.flag("depth3_remainder", worst3 <= 1.0, "adding a5 leaves at most twice the a7 term");
    return rep;
}

ExperimentReport poisson_exp(const ExperimentConfig& c) {
    ExperimentReport rep;
    auto fns = builtin_test_functions();
    const auto res = parallel_map(fns.size(), [&](std::size_t i) { return poisson_check(fns[i], c.count); });
    auto& s = rep.add_series("functions", "Poisson summation, both sides",
                             {"index", "center", "width", "lhs", "rhs", "abs_gap", "truncation"});
    double worst = 0.0;
    for (std::size_t i = 0; i < fns.size(); ++i) {
        const double gap = std::fabs(res[i].lhs - res[i].rhs);
        worst = std::max(worst, gap);
        s.rows.push_back({d(i), fns[i].center, fns[i].width, res[i].lhs, res[i].rhs, gap, res[i].truncation});
        rep.notes.push_back("function " + std::to_string(i) + ": " + fns[i].label());
    }
    rep.add("max_abs_gap", worst, "max |sum f(n) - (integral f + 2 sum integral f cos)|", 1e-8);
    rep.flag("poisson_identity", worst <= 1e-8, "Poisson identity on every built-in test function");
    return rep;
}

ExperimentReport saddle_exp(const ExperimentConfig& c) {
    ExperimentReport rep;
    // Residual of the closed form.
    OscIntegralSpec s;
    s.t = c.T;
    s.ell = 2;
    s.m = 3;
    s.N = 200;
    s.N1 = 400;
    s.G = 50;
    const auto r = saddle_point(s);
    const double resid = std::fabs(r.Fp_at_x0) / (r.Fpp_at_x0 * r.x0);
    rep.add("residual", resid, "|F'(x0)| / (F''(x0) x0), l = 2, m = 3", 1e-9);
    rep.flag("residual_small", resid <= 1e-9, "closed-form saddle is a root of F'");

    OscIntegralSpec big = s;
    big.t = 1e8;
    big.ell = 1;
    big.m = 1;
    const auto rb = saddle_point(big);
    const double ratio = rb.x0 / std::sqrt(big.t / kTwoPi);
    const double fpp = rb.Fpp_at_x0 * std::pow(rb.x0, 3) / big.t;
    rep.add("x0_ratio", ratio, "x0 / sqrt(l t / 2 pi m) at t = 1e8");
    rep.add("fpp_ratio", fpp, "F''(x0) x0^3 / (t l) at t = 1e8 (limit 2)");
    rep.flag("x0_asymptotic", ratio >= 0.99 && ratio <= 1.01, "x0 ratio in [0.99, 1.01]");
    rep.flag("fpp_asymptotic", fpp / 2.0 >= 0.9 && fpp / 2.0 <= 1.1, "half the F'' ratio in [0.9, 1.1]");

    // Well-separated saddles centred in the plateau.
    auto& sp = rep.add_series("separated", "stationary phase vs direct quadrature",
                              {"t", "ell", "m", "x0", "separation", "rel_gap"});
    double worst = 0.0;
    const std::size_t n = c.count;
    const auto rows = parallel_map(n, [&](std::size_t i) {
        OscIntegralSpec w;
        w.t = c.T * (1.0 + 0.25 * d(i % 4));
        w.ell = 1 + i % 3;
        w.m = 1 + (i / 3) % 2;
        w.N = 2.0;
        w.N1 = 3.0;
        w.G = 1.0;
        const double x0 = saddle_point(w).x0;
        const double half = 0.08 * x0;
        w.N = x0 - half;
        w.N1 = x0 + half;
        w.G = half / 2.0;
        w.dirichlet_weight = i % 2 == 1;
        const auto e = stationary_phase_eval(w, c.tol);
        return std::make_tuple(w, x0, e);
    });
    for (const auto& [w, x0, e] : rows) {
        worst = std::max(worst, e.rel_gap);
        sp.rows.push_back({w.t, d(w.ell), d(w.m), x0, e.separation, e.rel_gap});
    }
    rep.add("max_sp_gap", worst, "max |sp - direct| / |direct| over separated saddles", 0.05);
    rep.flag("stationary_phase", worst <= 0.05, "stationary phase within 5% of quadrature");

    // Saddle far outside the support: non-stationary decay.
    OscIntegralSpec far;
    far.t = c.T;
    far.ell = 1;
    far.m = 1;
    far.N = 2.0;
    far.N1 = 3.0;
    far.G = 1.0;
    const double x0 = saddle_point(far).x0;
    far.m = 3;
    far.N = x0 - 80.0;
    far.N1 = x0 + 80.0;
    far.G = 40.0;
    const auto fe = stationary_phase_eval(far, c.tol);
    const double far_ratio = std::abs(fe.direct) / (far.N1 - far.N);
    rep.add("far_direct_scaled", far_ratio, "|direct| / (N1 - N), saddle outside the support", 1e-6);
    rep.flag("far_decay", !fe.saddle_in_support && far_ratio <= 1e-6, "non-stationary integral is negligible");
    return rep;
}

ExperimentReport dirichlet_meansq(const ExperimentConfig& c) {
    ExperimentReport rep;
    const double N = std::ceil(std::pow(c.G, 1.05));
    const auto n_lo = static_cast<std::uint64_t>(N), n_hi = static_cast<std::uint64_t>(2.0 * N);
    auto& s = rep.add_series("radii", "smoothed mean square against the bump radius",
                             {"G", "N", "N1", "value", "diagonal", "off_diagonal", "off_scaled", "pair_mass"});
    // Pair (m, n) contributes (mn)^{-1/2} times the transform of phi at
    // log(n/m). The total oscillates in G; the sum of the absolute pair
    // kernels is what the first-derivative test says must shrink.
    auto pair_mass = [&](double g) {
        const SmoothBump phi(c.T, g);
        QuadOptions qo;
        qo.relative_to_l1 = true;
        CompensatedSum acc;
        for (auto m = n_lo; m <= n_hi; ++m)
            for (auto n = m + 1; n <= n_hi; ++n) {
                const double xi = std::log(d(n) / d(m));
                const auto r = integrate_scaled(
                    [&](double t) -> cplx { return phi(t) * std::polar(1.0, t * xi); }, c.T - 2.0 * g,
                    c.T + 2.0 * g, [&](double) { return std::min(0.25 * g, 0.6 / xi); }, qo);
                acc += std::abs(r.value) / std::sqrt(d(m) * d(n));
            }
        return acc.value() / phi.integral();
    };
    double prev = std::numeric_limits<double>::infinity(), last_scaled = 0.0;
    bool decays = true, diag_ok = true, within_mass = true;
    for (double g : {c.G / 4.0, c.G / 2.0, c.G}) {
        const auto r = dirichlet_poly_meansq(c.T, g, N, 2.0 * N);
        const double scaled = std::fabs(r.off_diagonal) / r.phi_integral;
        const double mass = pair_mass(g);
        s.rows.push_back({g, N, 2.0 * N, r.value, r.diagonal, r.off_diagonal, scaled, mass});
        decays = decays && mass < prev;
        within_mass = within_mass && scaled <= 2.0 * mass * (1.0 + 1e-8);
        prev = mass;
        last_scaled = scaled;
        diag_ok = diag_ok && r.value <= r.diagonal + std::fabs(r.off_diagonal) * (1.0 + 1e-12) && r.value >= 0.0;
    }
    const auto single = dirichlet_poly_meansq(c.T, c.G, N, N);
    const double single_gap = std::fabs(single.value - single.phi_integral / N) / (single.phi_integral / N);
    rep.add("single_term_gap", single_gap, "N1 = N against integral phi / N", 1e-10);
    rep.add("off_diagonal_scaled", last_scaled, "|off-diagonal| / integral phi at G");
    rep.add("pair_mass", prev, "sum of |pair kernels| / integral phi at G");
    rep.flag("single_term", single_gap <= 1e-10, "single-term identity");
    rep.flag("diagonal_bound", diag_ok, "value <= diagonal + |off-diagonal|");
    rep.flag("off_diagonal_within_mass", within_mass, "|off-diagonal| <= 2 x pair mass");
    rep.flag("off_diagonal_decays", decays, "pair mass decreases as G grows");
    return rep;
}

ExperimentReport pipeline_exp(const ExperimentConfig& c) {
    ExperimentReport rep;
    PipelineOptions po;
    po.eps = c.eps;
    po.k_cap = c.K;
    const auto p = pipeline_compare(c.T, c.G, po);
    auto& ks = rep.add_series("k_series", "saddle-point route against divisor route per k", {"k", "a", "b", "cells"});
    for (std::size_t k = 0; k < p.a.size(); ++k) ks.rows.push_back({d(k + 1), p.a[k], p.b[k], d(p.cell_count[k])});
    auto& cs = rep.add_series("cells", "(l, m) cells", {"ell", "m", "k", "window", "x0", "sp_re", "sp_im", "a_contribution"});
    for (const auto& cell : p.cells)
        cs.rows.push_back({d(cell.ell), d(cell.m), d(cell.k), d(cell.window), cell.x0, cell.sp_value.real(),
                           cell.sp_value.imag(), cell.a_contribution});
    rep.add("correlation", p.correlation, "Pearson correlation of the two k-series", 0.9);
    rep.add("aggregate_gap", p.aggregate_gap, "|sum a - sum b| / sum |b|");
    rep.add("max_term_gap", p.max_term_gap, "max |a_k - b_k| / max |b_k|");
    rep.flag("correlated", p.correlation >= 0.9, "k-series correlation >= 0.9");
    return rep;
}

// Random admissible derivative-test instances. The phases are differences of
// the Atkinson phase (first test) or the phase itself (second test); weights
// are constant, monotone or a bump, all nonnegative.
OscillatoryIntegrand random_instance(std::mt19937_64& rng, double T, bool second) {
    OscillatoryIntegrand f;
    const double a = uniform(rng, T, 2.0 * T);
    const double len = log_uniform(rng, 1.0, T / 4.0);
    f.a = a;
    f.b = a + len;
    const double k = std::floor(log_uniform(rng, 1.0, 400.0));
    double m = std::floor(log_uniform(rng, 1.0, 400.0));
    if (m == k) m = k + 1.0;
    if (second && uniform(rng, 0.0, 1.0) < 0.5) m = 0.0;  // single phase
    f.phase = [k, m](double t) { return f_phase(t, k) - (m > 0 ? f_phase(t, m) : 0.0); };
    f.d1 = [k, m](double t) { return f_phase_dt(t, k) - (m > 0 ? f_phase_dt(t, m) : 0.0); };
    auto dd = [](double t, double kk) {
        // d/dt 2 arsinh(sqrt(pi k / 2t)) = -sqrt(pi k / 2) t^{-3/2} / sqrt(1 + pi k / 2t)
        const double u = kPi * kk / (2.0 * t);
        return -std::sqrt(kPi * kk / 2.0) * std::pow(t, -1.5) / std::sqrt(1.0 + u);
    };
    f.d2 = [k, m, dd](double t) { return dd(t, k) - (m > 0 ? dd(t, m) : 0.0); };
    const int kind = static_cast<int>(rng() % 3);
    const double scale = log_uniform(rng, 0.1, 10.0);
    if (kind == 0) {
        f.weight = [scale](double) { return scale; };
    } else if (kind == 1) {
        const double p = uniform(rng, -1.0, 1.0);
        f.weight = [scale, p, a](double t) { return scale * std::pow(t / a, p); };
    } else {
        const SmoothWindow w(a + 0.25 * len, a + 0.75 * len, 0.25 * len);
        f.weight = [scale, w](double t) { return scale * w(t); };
    }
    return f;
}

ExperimentReport derivative_tests(const ExperimentConfig& c) {
    ExperimentReport rep;
    for (int which = 1; which <= 2; ++which) {
        std::mt19937_64 rng(c.seed * 2 + static_cast<std::uint64_t>(which));
        std::vector<OscillatoryIntegrand> insts;
        insts.reserve(c.count);
        for (std::size_t i = 0; i < c.count; ++i) insts.push_back(random_instance(rng, c.T, which == 2));
        const auto res = parallel_map(insts.size(), [&](std::size_t i) {
            return which == 1 ? first_derivative_test(insts[i], 1e-10) : second_derivative_test(insts[i], 1e-10);
        });
        const std::string tag = which == 1 ? "first" : "second";
        auto& s = rep.add_series(tag, tag + "-derivative test instances", {"a", "b", "m", "direct", "bound", "ratio"});
        std::size_t violations = 0;
        double worst = 0.0;
        for (std::size_t i = 0; i < res.size(); ++i) {
            if (!res[i].holds) ++violations;
            worst = std::max(worst, res[i].direct / res[i].bound);
            s.rows.push_back({insts[i].a, insts[i].b, res[i].m, res[i].direct, res[i].bound, res[i].direct / res[i].bound});
        }
        rep.add(tag + "_violations", d(violations), tag + "-derivative test: instances with direct > bound", 0.0);
        rep.add(tag + "_max_ratio", worst, "max direct / bound");
        rep.flag(tag + "_test_holds", violations == 0, tag + "-derivative bound holds on every instance");
    }
    return rep;
}

ExperimentReport exp_sum_grid_exp(const ExperimentConfig& c) {
    ExperimentReport rep;
    const auto g1 = exp_sum_grid(c.T, c.count, c.seed, c.K);
    const auto g2 = exp_sum_grid(c.T, c.count, c.seed + 1'000'003, c.K);
    double dual = 0.0;
    bool tri = g1.triangle_ok && g2.triangle_ok, trivial_ok = true;
    for (const auto* g : {&g1, &g2}) {
        const auto refs = parallel_map(g->rows.size(), [&](std::size_t i) { return exp_sum_S_reference(g->rows[i].inst); });
        for (std::size_t i = 0; i < refs.size(); ++i) {
            dual = std::max(dual, std::abs(g->rows[i].S - refs[i]) / std::abs(refs[i]));
            const double trivial = exponent_pair_bound(g->rows[i].inst, {0.0, 1.0}).bound;
            trivial_ok = trivial_ok && std::abs(g->rows[i].S) <= trivial;
        }
    }
    // The worked instance: tau_r - tau_s = 10, K = 1000.
    const ExpSumInstance wi{1.5 * c.T + 10.0, 1.5 * c.T, 1000, 2000, c.T};
    const double wgap = std::abs(exp_sum_S(wi) - exp_sum_S_reference(wi)) / std::abs(exp_sum_S_reference(wi));
    dual = std::max(dual, wgap);

    const double r1 = g1.max_ratio, r2 = g2.max_ratio;
    const double spread = std::fabs(r1 - r2) / std::min(r1, r2);
    for (int j = 0; j < 2; ++j) {
        const auto& g = j == 0 ? g1 : g2;
        auto& s = rep.add_series(j == 0 ? "grid1" : "grid2", "instances and ratio |S| / (F^{1/2} K^{1/2} + 1/F)",
                                 {"tau_r", "tau_s", "K", "F", "abs_S", "bound", "ratio"});
        for (const auto& r : g.rows)
            s.rows.push_back({r.inst.tau_r, r.inst.tau_s, d(r.inst.K), r.F, std::abs(r.S), r.bound, r.ratio});
    }
    rep.add("dual_max_rel_gap", dual, "max |S - S_ref| / |S_ref| over both grids and the worked instance", 1e-10);
    rep.add("C_grid1", r1, "max ratio on grid 1");
    rep.add("C_grid2", r2, "max ratio on grid 2");
    rep.add("C_spread", spread, "|C1 - C2| / min(C1, C2)", 0.2);
    rep.flag("dual_agree", dual <= 1e-10, "two implementations agree to 1e-10 relative");
    rep.flag("triangle", tri, "|S| <= number of terms");
    rep.flag("trivial_pair", trivial_ok, "(0, 1) pair bound dominates |S|");
    rep.flag("constant_stable", spread <= 0.2, "fitted constant stable within 20% across grids");
    return rep;
}

ExperimentReport oscillatory_integral_exp(const ExperimentConfig& c) {
    ExperimentReport rep;
    const double T = c.T;
    const std::size_t n = c.count;
    // E = 0: first-derivative bound with min |g'| = D and sup Phi = 2 sqrt(2T).
    auto& lin = rep.add_series("linear", "E = 0: |I| against 4 sup Phi / D", {"D", "abs_I", "bound", "negligible"});
    bool lin_ok = true;
    std::vector<double> Ds(n);
    for (std::size_t i = 0; i < n; ++i) Ds[i] = std::pow(10.0, -1.3 + 2.6 * d(i) / d(n - 1));
    const auto lres = parallel_map(n, [&](std::size_t i) { return osc_integral_IT(Ds[i], 0.0, T, {0.5, 8.0, c.eps}, c.tol); });
    const double sup = 2.0 * std::sqrt(2.0 * T);
    bool neg_ok = true, decay_ok = true;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(lres[i].direct);
        const double b = kFirstDerivativeC * sup / Ds[i];
        lin_ok = lin_ok && a <= b;
        lin.rows.push_back({Ds[i], a, b, lres[i].negligible ? 1.0 : 0.0});
        if (lres[i].negligible) {
            if (Ds[i] * std::sqrt(T) >= 300.0) neg_ok = neg_ok && a <= 1e-3 * std::sqrt(T);
            // Below D sqrt(T) ~ 30 the phase turns less than a few times over the ramps.
            if (Ds[i] * std::sqrt(T) >= 30.0) {
                decay_ok = decay_ok && a <= prev;
                prev = a;
            }
        }
    }
    rep.flag("linear_bound", lin_ok, "E = 0: first-derivative bound holds");
    rep.flag("negligible_small", neg_ok, "negligible regime with D sqrt(T) >= 300: |I| <= 1e-3 sqrt(T)");
    rep.flag("negligible_decay", decay_ok, "|I| decreases along D once D sqrt(T) >= 30");

    // Saddle regime: D T / E from C1 to C2 over a D grid.
    auto& sad = rep.add_series("saddle", "C1 E <= D T <= C2 E: |I| against E^{3/4} D^{-5/4}",
                               {"D", "E", "abs_I", "saddle_bound", "ratio", "sp_gap"});
    std::vector<std::pair<double, double>> de;
    for (std::size_t i = 0; i < n; ++i)
        for (double q : {0.6, 1.0, 1.5, 2.0, 3.0, 5.0, 7.5}) {
            const double D = std::pow(10.0, -1.0 + 1.6 * d(i) / d(n - 1));
            de.emplace_back(D, D * T / q);
        }
    const auto sres = parallel_map(de.size(), [&](std::size_t i) {
        return osc_integral_IT(de[i].first, de[i].second, T, {0.5, 8.0, c.eps}, c.tol);
    });
    double C = 0.0, C_all = 0.0, worst_sp = 0.0;
    bool all_in = true;
    for (std::size_t i = 0; i < de.size(); ++i) {
        const double a = std::abs(sres[i].direct);
        const double ratio = a / sres[i].saddle_bound;
        const double gap = sres[i].has_saddle ? std::abs(sres[i].sp_reconstruction - sres[i].direct) / a : kNaN;
        C_all = std::max(C_all, ratio);
        // With D sqrt(T) below 10 the phase barely oscillates and the integral is just its size.
        if (de[i].first * std::sqrt(T) >= 10.0) C = std::max(C, ratio);
        all_in = all_in && sres[i].in_regime;
        sad.rows.push_back({de[i].first, de[i].second, a, sres[i].saddle_bound, ratio, gap});
        // Leading-order stationary phase is meaningful where the saddle sits on the plateau.
        const double xs = std::sqrt(de[i].second / de[i].first);
        if (xs * xs >= 1.2 * T && xs * xs <= 1.8 * T && de[i].first * std::sqrt(T) >= 30.0)
            worst_sp = std::max(worst_sp, gap);
    }
    rep.add("C_saddle", C, "max |I| / (E^{3/4} D^{-5/4}) on the saddle regime, D sqrt(T) >= 10", kSaddleRegimeC);
    rep.add("C_saddle_all", C_all, "same ratio over the whole grid");
    rep.add("sp_gap_plateau", worst_sp, "max stationary-phase gap, saddle on the plateau");
    rep.flag("saddle_regime_members", all_in, "grid lies in the regime");
    rep.flag("saddle_bound", C <= kSaddleRegimeC, "fitted constant within the frozen value");
    return rep;
}

ExperimentReport twelfth_moment(const ExperimentConfig& c) {
    const double T2 = 4.0 * c.T;
    auto rep = twelfth_moment_walkthrough(c.T, c.G, c.eps, c.seed);
    rep.notes.push_back("walkthrough at T; the regression also uses 4T with G = (4T)^{1/3}");
    const auto rep2 = twelfth_moment_walkthrough(T2, std::cbrt(T2) * c.G / std::cbrt(c.T), c.eps, c.seed);
    const double measured = std::log(rep2.scalar("diagonal") / rep.scalar("diagonal")) / std::log(4.0);
    const double predicted =
        std::log(rep2.scalar("diagonal_predicted") / rep.scalar("diagonal_predicted")) / std::log(4.0);
    rep.add("diagonal_exponent", measured, "log-log slope of the diagonal between T and 4T");
    rep.add("diagonal_exponent_predicted", predicted, "slope of R T^{1/2+eps} G^{-2}");
    rep.flag("diagonal_exponent_matches", std::fabs(measured - predicted) <= 0.15, "slopes agree within 0.15");
    const double J1 = std::pow(c.T, -c.eps) * c.G * c.G * c.G;
    const double J2 = std::pow(c.T, -c.eps) * 8.0 * c.G * c.G * c.G;
    rep.add("J_doubling_ratio", J2 / J1, "J(2G) / J(G)", 8.0);
    rep.flag("J_scales_by_8", J2 / J1 == 8.0, "doubling G multiplies J by 8");
    rep.flag("cauchy_schwarz_holds_4T", rep2.flag_value("cauchy_schwarz_holds"), "Cauchy-Schwarz split at 4T");
    return rep;
}

ExperimentReport diagonal(const ExperimentConfig& c) {
    ExperimentReport rep;
    auto& s = rep.add_series("counts", "D = 0 quadruples in (K, 2K]^4",
                             {"K", "brute_force", "families", "pairs", "swapped", "squarefree_family", "mismatches"});
    std::vector<double> lk, lc;
    std::size_t total_mismatch = 0;
    for (std::uint64_t K : {25, 50, 100, 200}) {
        if (K > c.K) break;
        const auto bf = brute_force_diagonal(K, 2 * K);
        const auto fam = enumerate_diagonal_families(K, 2 * K);
        std::vector<Quadruple> only_a, only_b;
        std::set_difference(bf.begin(), bf.end(), fam.begin(), fam.end(), std::back_inserter(only_a));
        std::set_difference(fam.begin(), fam.end(), bf.begin(), bf.end(), std::back_inserter(only_b));
        std::size_t counts[3] = {0, 0, 0};
        for (const auto& q : bf) {
            const auto cl = classify_diagonal(q);
            if (cl.cls != DiagClass::NotDiagonal) ++counts[static_cast<int>(cl.cls)];
        }
        const std::size_t mism = only_a.size() + only_b.size();
        total_mismatch += mism;
        s.rows.push_back({d(K), d(bf.size()), d(fam.size()), d(counts[0]), d(counts[1]), d(counts[2]), d(mism)});
        if (K >= 50) {
            lk.push_back(std::log(d(K)));
            lc.push_back(std::log(d(bf.size())));
        }
    }
    rep.add("mismatches", d(total_mismatch), "quadruples in one set but not the other", 0.0);
    rep.flag("families_exhaustive", total_mismatch == 0, "brute force equals the three-family classification");
    if (lk.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lk.size(); ++i) { mx += lk[i]; my += lc[i]; }
        mx /= d(lk.size());
        my /= d(lk.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lk.size(); ++i) {
            sxy += (lk[i] - mx) * (lc[i] - my);
            sxx += (lk[i] - mx) * (lk[i] - mx);
        }
        const double slope = sxy / sxx;
        rep.add("count_exponent", slope, "least-squares slope of log count against log K, K >= 50");
        rep.flag("count_exponent_range", slope >= 1.8 && slope <= 2.3, "count exponent in [1.8, 2.3]");
    }
    return rep;
}

ExperimentReport ell_uniqueness_exp(const ExperimentConfig& c) {
    ExperimentReport rep;
    auto& s = rep.add_series("scales", "random (m, n, k) triples",
                             {"K", "triples", "with_ell", "mismatches", "fallbacks", "admissible", "max_near_ratio", "max_E_scaled"});
    std::size_t total_mism = 0;
    for (std::uint64_t K : {100ull, 1000ull, 10000ull}) {
        if (K > c.K) break;
        std::mt19937_64 rng(c.seed + K);
        std::vector<std::array<std::uint64_t, 3>> tr(c.count);
        for (auto& t : tr)
            for (auto& v : t) v = uniform_int(rng, K + 1, 2 * K);
        struct R { bool has, mism, fb; };
        const auto res = parallel_map(tr.size(), [&](std::size_t i) {
            const auto e = ell_uniqueness(tr[i][0], tr[i][1], tr[i][2], K, 2 * K, c.eta);
            const auto scan = ell_scan(tr[i][0], tr[i][1], tr[i][2], K, 2 * K, c.eta);
            const bool match = e.ell ? (scan.size() == 1 && scan[0] == *e.ell) : scan.empty();
            return R{e.ell.has_value(), !match, e.used_fallback};
        });
        std::size_t has = 0, mism = 0, fb = 0;
        for (const auto& r : res) { has += r.has; mism += r.mism; fb += r.fb; }
        total_mism += mism;
        const auto ws = d_window_scan(K, c.eta, c.count, c.seed + 7 * K);
        s.rows.push_back({d(K), d(c.count), d(has), d(mism), d(fb), d(ws.admissible), ws.max_near_ratio, ws.max_E_scaled});
    }
    rep.add("mismatches", d(total_mism), "triples where rounding and the scan disagree", 0.0);
    rep.flag("ell_unique_and_matches_scan", total_mism == 0, "at most one l, equal to the brute-force scan");
    return rep;
}

ExperimentReport near_integer(const ExperimentConfig& c) {
    ExperimentReport rep;
    auto& s = rep.add_series("scales", "max count / (K delta + K^{2/3}), delta = K^{-1/3}",
                             {"K", "delta", "max_count", "mean_count", "bound", "ratio"});
    std::vector<double> ratios;
    bool floor_ok = true;
    for (std::uint64_t K : {1000ull, 10000ull, 100000ull}) {
        if (K > c.K) break;
        const double delta = std::pow(d(K), -1.0 / 3.0);
        const auto r = near_integer_count(K, delta, c.count, c.seed);
        floor_ok = floor_ok && r.floor_identity_ok;
        ratios.push_back(r.ratio);
        s.rows.push_back({d(K), delta, r.max_count, r.mean_count, r.bound, r.ratio});
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    rep.add("ratio_min", lo, "smallest ratio across K");
    rep.add("ratio_max", hi, "largest ratio across K");
    rep.add("ratio_spread", hi / lo, "max ratio / min ratio", 1.5);
    rep.flag("ratio_stable", hi <= 1.5 * lo, "ratio stable within 50% across K");
    rep.flag("floor_identity", floor_ok, "counts equal the floor-difference sums");
    return rep;
}

ExperimentReport moment_rhs_exp(const ExperimentConfig& c) {
    ExperimentReport rep;
    const auto m1 = moment_rhs_m1_decomposition(c.T, c.K);
    rep.add("direct", m1.direct, "integral phi |sum (-1)^k d(k) k^{-1/4} e^{i ...}|^2 by quadrature");
    rep.add("diagonal", m1.diagonal, "sum d(k)^2 k^{-1/2} integral phi");
    rep.add("off_diagonal", m1.off_diagonal, "pair integrals j != k");
    rep.add("off_bound", m1.off_bound, "sum of first-derivative-test bounds");
    rep.add("rel_gap", m1.rel_gap, "|diagonal + off-diagonal - direct| / direct", 0.05);
    rep.flag("decomposition_matches", m1.rel_gap <= 0.05, "decomposition within 5% of the direct value");
    rep.flag("pair_bounds_hold", m1.bounds_hold, "every pair integral within its first-derivative bound");
    if (c.M == 2) {
        const double v2 = moment_rhs(c.T, c.K, 2, c.V);
        rep.add("M2_value", v2, "same integral with the fourth power");
    }
    // Single-k identity.
    const double single = moment_rhs(c.T, 12, 1, 0.0, 13);
    const double phi = SmoothWindow(c.T, 2.0 * c.T, c.T / 2.0).integral();
    const double expect13 = 4.0 / std::sqrt(13.0) * phi;  // d(13)^2 = 4
    const double sgap = std::fabs(single - expect13) / expect13;
    rep.add("single_k_gap", sgap, "k = 13 only: against d(k)^2 k^{-1/2} integral phi", 1e-8);
    rep.flag("single_k_identity", sgap <= 1e-8, "single-term identity");
    return rep;
}

ExperimentReport quadruple_sum(const ExperimentConfig& c) {
    ExperimentReport rep;
    const auto q = quadruple_moment_sum(c.T, c.K, c.count);
    rep.partial = q.partial;
    const double rhs = moment_rhs(c.T, c.K, 2, 0.0, 0, 1e-11);
    const double gap = std::fabs(q.total.real() - rhs) / rhs;
    const double imag = std::fabs(q.total.imag()) / std::fabs(q.total.real());
    rep.add("total_re", q.total.real(), "signed quadruple sum, real part");
    rep.add("total_im", q.total.imag(), "signed quadruple sum, imaginary part");
    rep.add("diagonal", q.diagonal, "E = 0 diagonal: weight times integral phi");
    rep.add("family_re", q.family.real(), "D = 0, E != 0 family members");
    rep.add("off_diagonal_re", q.off_diagonal.real(), "D != 0");
    rep.add("evaluated", d(q.evaluated), "quadruples evaluated");
    rep.add("rhs_direct", rhs, "integral phi |sum|^4 by quadrature");
    rep.add("rel_gap", gap, "|sum - direct| / direct", 0.02);
    rep.add("imag_ratio", imag, "|Im| / |Re|", 1e-8);
    rep.flag("two_routes_agree", !q.partial && gap <= 0.02, "quadruple sum equals the direct integral within 2%");
    rep.flag("imaginary_negligible", imag <= 1e-8, "conjugate symmetry");
    rep.flag("diagonal_nonnegative", q.diagonal >= 0.0, "diagonal part real and nonnegative");
    return rep;
}

ExperimentReport restricted_sum(const ExperimentConfig& c) {
    ExperimentReport rep;
    const auto r = restricted_saddle_sum(c.T, c.K, c.eta);
    // Direct per-quadruple integrals for the same terms.
    const auto direct = parallel_map(r.terms.size(), [&](std::size_t i) {
        const auto& t = r.terms[i];
        return t.weight * osc_integral_IT(t.D, t.E, c.T, {0.5, 8.0, c.eps}, 1e-9).direct;
    });
    cplx sum_direct = 0.0, diff = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) {
        sum_direct += direct[i];
        diff += r.terms[i].term - direct[i];
        l1 += std::abs(direct[i]);
    }
    const double gap_l1 = l1 > 0 ? std::abs(diff) / l1 : 0.0;
    const double gap_signed = std::abs(sum_direct) > 0 ? std::abs(diff) / std::abs(sum_direct) : 0.0;
    rep.add("count", d(r.count), "starred quadruples");
    rep.add("value_re", r.value.real(), "stationary-phase sum, real part");
    rep.add("value_im", r.value.imag(), "stationary-phase sum, imaginary part");
    rep.add("abs_sum", r.abs_sum, "triangle-inequality majorant");
    rep.add("direct_re", sum_direct.real(), "sum of direct integrals, real part");
    rep.add("gap_l1", gap_l1, "|sum (sp - direct)| / sum |direct|", 0.10);
    rep.add("gap_signed", gap_signed, "|sum (sp - direct)| / |sum direct|");
    rep.flag("triangle", std::abs(r.value) <= r.abs_sum * (1.0 + 1e-12), "|sum| <= majorant");
    rep.flag("sp_matches_direct", gap_l1 <= 0.10, "stationary phase within 10% (l1-normalised)");
    const auto tiny = restricted_saddle_sum(c.T, std::min<std::uint64_t>(c.K, 50), 1e-9);
    rep.flag("tiny_eta_empty", tiny.count == 0, "eta -> 0 leaves no terms");
    auto& s = rep.add_series("terms", "starred quadruples",
                             {"m", "n", "k", "l", "D", "E", "weight", "sp_re", "sp_im", "direct_re", "direct_im"});
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
        const auto& t = r.terms[i];
        s.rows.push_back({d(t.q.m), d(t.q.n), d(t.q.k), d(t.q.l), t.D, t.E, t.weight, t.term.real(), t.term.imag(),
                          direct[i].real(), direct[i].imag()});
    }
    return rep;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentConfig resolve_defaults(const ExperimentConfig& in) {
    validate_config(in);
    ExperimentConfig c = in;
    const auto& def = default_table().at(c.experiment);
    if (c.T == 0.0) c.T = def.T;
    if (c.V == 0.0) c.V = def.V;
    if (c.K == 0) c.K = def.K;
    if (c.count == 0) c.count = def.count;
    if (c.M == 0) c.M = def.M;
    if (c.G == 0.0) c.G = def.G != 0.0 ? def.G : (c.T > 0.0 ? std::cbrt(c.T) : 0.0);
    return c;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

void validate_ranges(const ExperimentConfig& c) {
    const auto& e = c.experiment;
    if (e == "zeta-check") require(c.T >= 10.0 && c.T <= 1e6 && c.count <= 100000, "zeta-check: T in [10, 1e6], count <= 1e5");
    if (e == "error-term") require(c.T >= 50.0 && c.T <= 1e5, "error-term: T in [50, 1e5]");
    if (e == "smoothed-vs-classical")
        require(c.T >= 100.0 && c.T <= 1e6 && c.K >= 1 && c.count <= 10000, "smoothed-vs-classical: T in [100, 1e6], K >= 1");
    if (e == "large-values") require(c.T >= 100.0 && c.T <= 1e6 && c.V > 0.0, "large-values: T in [100, 1e6], V > 0");
    if (e == "atkinson") require(c.T >= 1e3 && c.T <= 1e6 && c.count >= 1 && c.count <= 1000, "atkinson: T in [1e3, 1e6]");
    if (e == "fit-taylor") require(c.count >= 3 && c.count <= 14, "fit-taylor: count (levels) in [3, 14]");
    if (e == "taylor-dominance") require(c.T >= 1e4 && c.T <= 1e12, "taylor-dominance: T in [1e4, 1e12]");
    if (e == "poisson") require(c.count >= 1 && c.count <= 100000, "poisson: count (n_max) in [1, 1e5]");
    if (e == "saddle") require(c.T >= 1e4 && c.T <= 1e8 && c.count >= 1, "saddle: T in [1e4, 1e8]");
    if (e == "dirichlet-meansq") require(c.T >= 1e3 && c.T <= 1e6, "dirichlet-meansq: T in [1e3, 1e6]");
    if (e == "pipeline") require(c.T >= 1e4 && c.T <= 1e6 && c.K >= 2 && c.K <= 500, "pipeline: T in [1e4, 1e6], K in [2, 500]");
    if (e == "derivative-tests") require(c.T >= 100.0 && c.T <= 1e7, "derivative-tests: T in [100, 1e7]");
    if (e == "exp-sum-grid") require(c.T >= 1e3 && c.T <= 1e7 && c.K >= 16 && c.K <= 1'000'000, "exp-sum-grid: T in [1e3, 1e7], K in [16, 1e6]");
    if (e == "oscillatory-integral") require(c.T >= 1e3 && c.T <= 1e6 && c.count >= 2, "oscillatory-integral: T in [1e3, 1e6], count >= 2");
    if (e == "twelfth-moment") require(c.T >= 1e3 && c.T <= 2.5e4, "twelfth-moment: T in [1e3, 2.5e4] (4T is also run)");
    if (e == "diagonal") require(c.K >= 25 && c.K <= 200, "diagonal: K in [25, 200]");
    if (e == "ell-uniqueness") require(c.K >= 100 && c.K <= 1'000'000, "ell-uniqueness: K in [1e2, 1e6]");
    if (e == "near-integer") require(c.K >= 1000 && c.K <= 1'000'000 && c.count >= 1, "near-integer: K in [1e3, 1e6]");
    if (e == "moment-rhs") require(c.T >= 100.0 && c.T <= 1e5 && c.K >= 1, "moment-rhs: T in [100, 1e5]");
    if (e == "quadruple-sum") require(c.T >= 100.0 && c.T <= 1e5 && c.K >= 1 && c.K <= 60, "quadruple-sum: T in [100, 1e5], K <= 60");
    if (e == "restricted-sum") require(c.T >= 1e3 && c.T <= 1e5 && c.K >= 1 && c.K <= 1000, "restricted-sum: T in [1e3, 1e5], K <= 1000");
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& in, const RunOptions& opt) {
    const ExperimentConfig c = resolve_defaults(in);
    validate_ranges(c);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    const auto& e = c.experiment;
    if (e == "zeta-check") rep = zeta_check(c);
    else if (e == "error-term") rep = error_term_experiment(c);
    else if (e == "smoothed-vs-classical") rep = smoothed_vs_classical(c);
    else if (e == "large-values") rep = large_values(c);
    else if (e == "atkinson") rep = atkinson(c);
    else if (e == "fit-taylor") rep = fit_taylor(c);
    else if (e == "taylor-dominance") rep = taylor_dominance_exp(c, opt.model);
    else if (e == "poisson") rep = poisson_exp(c);
    else if (e == "saddle") rep = saddle_exp(c);
    else if (e == "dirichlet-meansq") rep = dirichlet_meansq(c);
    else if (e == "pipeline") rep = pipeline_exp(c);
    else if (e == "derivative-tests") rep = derivative_tests(c);
    else if (e == "exp-sum-grid") rep = exp_sum_grid_exp(c);
    else if (e == "oscillatory-integral") rep = oscillatory_integral_exp(c);
    else if (e == "twelfth-moment") rep = twelfth_moment(c);
    else if (e == "diagonal") rep = diagonal(c);
    else if (e == "ell-uniqueness") rep = ell_uniqueness_exp(c);
    else if (e == "near-integer") rep = near_integer(c);
    else if (e == "moment-rhs") rep = moment_rhs_exp(c);
    else if (e == "quadruple-sum") rep = quadruple_sum(c);
    else if (e == "restricted-sum") rep = restricted_sum(c);
    rep.config = c;
    rep.notes.insert(rep.notes.begin(), "C1 = 0.5, C2 = 8, eta = " + std::to_string(c.eta) + ", eps = " + std::to_string(c.eps));
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConvergenceError*>(&e)) return 2;
    if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const SizeError*>(&e) || dynamic_cast<const PrecisionError*>(&e))
        return 1;
    return 3;
}

// ---------------------------------------------------------------------------

std::vector<SuiteCase> suite_cases(SuiteLevel level) {
    auto cfg = [](std::string name, double T = 0, std::uint64_t K = 0, std::uint64_t count = 0, double G = 0) {
        ExperimentConfig c;
        c.experiment = std::move(name);
        c.T = T;
        c.K = K;
        c.count = count;
        c.G = G;
        return c;
    };
    if (level == SuiteLevel::Smoke) {
        return {
            {"zeta-check", cfg("zeta-check", 1e4, 0, 100)},
            {"error-term", cfg("error-term", 1e3)},
            {"smoothed-vs-classical", cfg("smoothed-vs-classical", 1e3, 4, 10, 8)},
            {"large-values", cfg("large-values", 2e3)},
            {"atkinson", cfg("atkinson", 1e4, 0, 2)},
            {"fit-taylor", cfg("fit-taylor", 0, 0, 9)},
            {"taylor-dominance", cfg("taylor-dominance", 1e8, 0, 100)},
            {"poisson", cfg("poisson", 0, 0, 1000)},
            {"saddle", cfg("saddle", 1e6, 0, 2)},
            {"dirichlet-meansq", cfg("dirichlet-meansq", 1e4)},
            {"pipeline", cfg("pipeline", 1e4, 12)},
            {"derivative-tests", cfg("derivative-tests", 1e4, 0, 100)},
            {"exp-sum-grid", cfg("exp-sum-grid", 1e5, 1024, 100)},
            {"oscillatory-integral", cfg("oscillatory-integral", 1e4, 0, 6)},
            {"twelfth-moment", cfg("twelfth-moment", 2e3)},
            {"diagonal", cfg("diagonal", 0, 50)},
            {"ell-uniqueness", cfg("ell-uniqueness", 0, 1000, 1000)},
            {"near-integer", cfg("near-integer", 0, 10000, 30)},
            {"moment-rhs", cfg("moment-rhs", 1e3, 8)},
            {"quadruple-sum", cfg("quadruple-sum", 1e3, 4)},
            {"restricted-sum", cfg("restricted-sum", 1e5, 60)},
        };
    }
    auto desk = std::vector<SuiteCase>{};
    for (const auto& name : experiment_names()) desk.push_back({name, cfg(name)});
    desk.push_back({"twelfth-moment-high", cfg("twelfth-moment", 2.5e4)});
    desk.push_back({"atkinson-low", cfg("atkinson", 1e3, 0, 8)});
    desk.push_back({"exp-sum-grid-1e4", cfg("exp-sum-grid", 1e4, 2048, 500)});
    desk.push_back({"saddle-1e8", cfg("saddle", 1e8, 0, 8)});
    return desk;
}

SuiteResult run_suite(SuiteLevel level, const RunOptions& opt, const std::string& out_dir,
                      const std::function<void(const SuiteCaseResult&)>& on_case) {
    SuiteResult out;
    for (const auto& sc : suite_cases(level)) {
        SuiteCaseResult r;
        r.id = sc.id;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            auto c = sc.config;
            if (!out_dir.empty()) c.out = out_dir + "/" + sc.id;
            const auto rep = run_experiment(c, opt);
            for (const auto& f : rep.flags)
                if (!f.value) r.failed_flags.push_back(f.name);
            r.passed = rep.passed() && !rep.partial;
            r.exit_code = r.passed ? 0 : 3;
            if (!out_dir.empty()) write_report(rep, c.out);
        } catch (const std::exception& e) {
            r.passed = false;
            r.exit_code = exit_code_for(e);
            r.error = e.what();
        }
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.passed = out.passed && r.passed;
        out.exit_code = std::max(out.exit_code, r.exit_code);
        if (on_case) on_case(r);
        out.cases.push_back(std::move(r));
    }
    return out;
}

}  // namespace zetalab
