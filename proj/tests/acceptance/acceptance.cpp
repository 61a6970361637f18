// Acceptance run: one PASS/FAIL line per criterion, exit 0 only if all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "zetalab/errors.hpp"
#include "zetalab/experiments.hpp"
#include "zetalab/parallel.hpp"
#include "zetalab/report.hpp"

using namespace zetalab;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void need(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

ExperimentConfig cfg(const std::string& e) {
    ExperimentConfig c;
    c.experiment = e;
    return c;
}

void need_flags(Outcome& o, const ExperimentReport& r, std::initializer_list<const char*> names) {
    for (const char* n : names) o.need(r.flag_value(n), r.config.experiment + ":" + n);
}

bool column_has(const ReportSeries& s, std::size_t col, std::initializer_list<double> values) {
    for (double v : values) {
        bool found = false;
        for (const auto& row : s.rows) found = found || row[col] == v;
        if (!found) return false;
    }
    return true;
}

Outcome zeta_evaluator() {
    Outcome o;
    auto c = cfg("zeta-check");
    c.T = 1e5;
    c.count = 1000;
    const auto r = run_experiment(c);
    need_flags(o, r, {"rs_matches_em", "chi_unit_modulus"});
    o.need(r.get_series("samples").rows.size() == 1000, "1000 random heights");
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |RS - EM| = %.2e", r.scalar("rs_max_abs_error"));
    if (o.ok) o.detail = buf;
    return o;
}

Outcome error_term_machinery() {
    Outcome o;
    const auto r = run_experiment(cfg("error-term"));
    need_flags(o, r, {"schemes_agree", "sign_change"});
    o.need(column_has(r.get_series("heights"), 0, {50.0, 100.0, 1e3, 1e4}), "heights 50, 1e2, 1e3, 1e4");
    char buf[96];
    std::snprintf(buf, sizeof buf, "scheme gap %.2e, %g sign changes", r.scalar("max_scheme_gap"),
                  r.scalar("sign_changes"));
    if (o.ok) o.detail = buf;
    return o;
}

Outcome majorization() {
    Outcome o;
    auto c = cfg("smoothed-vs-classical");
    c.count = 100;
    const auto r = run_experiment(c);
    need_flags(o, r, {"majorization", "supports_disjoint", "point_sets_valid"});
    o.need(r.scalar("sets") == 100.0, "100 point sets");
    return o;
}

Outcome pipeline() {
    Outcome o;
    need_flags(o, run_experiment(cfg("poisson")), {"poisson_identity"});
    need_flags(o, run_experiment(cfg("saddle")), {"residual_small", "stationary_phase"});
    auto p = cfg("pipeline");
    p.T = 1e5;
    const auto r = run_experiment(p);
    need_flags(o, r, {"correlated"});
    char buf[64];
    std::snprintf(buf, sizeof buf, "k-series correlation %.6f", r.scalar("correlation"));
    if (o.ok) o.detail = buf;
    return o;
}

Outcome derivative_tests() {
    Outcome o;
    auto c = cfg("derivative-tests");
    c.count = 1000;
    const auto r = run_experiment(c);
    need_flags(o, r, {"first_test_holds", "second_test_holds"});
    o.need(r.get_series("first").rows.size() == 1000 && r.get_series("second").rows.size() == 1000,
           "1000 instances each");
    return o;
}

Outcome exponential_sum() {
    Outcome o;
    auto c = cfg("exp-sum-grid");
    c.T = 1e5;
    c.count = 500;
    const auto r = run_experiment(c);
    need_flags(o, r, {"dual_agree", "triangle", "constant_stable"});
    char buf[96];
    std::snprintf(buf, sizeof buf, "dual gap %.1e, C = %.3f / %.3f", r.scalar("dual_max_rel_gap"),
                  r.scalar("C_grid1"), r.scalar("C_grid2"));
    if (o.ok) o.detail = buf;
    return o;
}

Outcome diagonal() {
    Outcome o;
    auto c = cfg("diagonal");
    c.K = 200;
    const auto r = run_experiment(c);
    need_flags(o, r, {"families_exhaustive"});
    o.need(column_has(r.get_series("counts"), 0, {25.0, 50.0, 100.0, 200.0}), "K = 25, 50, 100, 200");
    o.need(r.scalar("mismatches") == 0.0, "zero mismatches");
    return o;
}

Outcome ell_uniqueness() {
    Outcome o;
    auto c = cfg("ell-uniqueness");
    c.K = 10000;
    c.count = 10000;
    c.eta = 0.1;
    const auto r = run_experiment(c);
    need_flags(o, r, {"ell_unique_and_matches_scan"});
    o.need(column_has(r.get_series("scales"), 0, {1e2, 1e3, 1e4}), "K = 1e2, 1e3, 1e4");
    return o;
}

Outcome near_integer() {
    Outcome o;
    auto c = cfg("near-integer");
    c.K = 100000;
    const auto r = run_experiment(c);
    need_flags(o, r, {"ratio_stable"});
    o.need(column_has(r.get_series("scales"), 0, {1e3, 1e4, 1e5}), "K = 1e3, 1e4, 1e5");
    char buf[64];
    std::snprintf(buf, sizeof buf, "ratio %.3f .. %.3f", r.scalar("ratio_min"), r.scalar("ratio_max"));
    if (o.ok) o.detail = buf;
    return o;
}

Outcome two_routes() {
    Outcome o;
    auto q = cfg("quadruple-sum");
    q.T = 1e4;
    q.K = 8;
    q.M = 2;
    const auto rq = run_experiment(q);
    need_flags(o, rq, {"two_routes_agree"});
    auto m = cfg("moment-rhs");
    m.T = 1e4;
    m.K = 8;
    m.M = 1;
    const auto rm = run_experiment(m);
    need_flags(o, rm, {"decomposition_matches"});
    char buf[96];
    std::snprintf(buf, sizeof buf, "gaps %.1e (M = 2), %.1e (M = 1)", rq.scalar("rel_gap"), rm.scalar("rel_gap"));
    if (o.ok) o.detail = buf;
    return o;
}

// Every smoke case at pool widths 1 and 3, then width 1 again.
Outcome determinism() {
    Outcome o;
    std::size_t compared = 0;
    for (const auto& sc : suite_cases(SuiteLevel::Smoke)) {
        std::string first;
        for (std::size_t width : {1, 3, 1}) {
            set_worker_count(width);
            const auto r = run_experiment(sc.config);
            std::string text = r.to_json();
            for (const auto& s : r.series) text += series_to_csv(s);
            if (first.empty())
                first = text;
            else
                o.need(text == first, sc.id + " differs at width " + std::to_string(width));
        }
        ++compared;
    }
    set_worker_count(0);
    if (o.ok) o.detail = std::to_string(compared) + " experiments identical at widths 1, 3, 1";
    return o;
}

struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> all = {
        {"zeta evaluator", 60, zeta_evaluator},
        {"error term machinery", 600, error_term_machinery},
        {"majorization", 1200, majorization},
        {"Poisson to stationary phase pipeline", 1200, pipeline},
        {"derivative tests", 300, derivative_tests},
        {"exponential sum", 900, exponential_sum},
        {"diagonal classification", 1800, diagonal},
        {"l uniqueness", 300, ell_uniqueness},
        {"near-integer counting", 600, near_integer},
        {"two-route identity", 1800, two_routes},
        {"determinism", 1e9, determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[i].run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > all[i].limit_s) {
            o.ok = false;
            o.detail += " (over the time limit)";
        }
        failed += !o.ok;
        std::printf("%s  A%-2zu %-38s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", i + 1, all[i].name, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", all.size() - failed, all.size());
    return failed == 0 ? 0 : 3;
}
