#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "zetalab/errors.hpp"
#include "zetalab/experiments.hpp"
#include "zetalab/phase.hpp"
#include "zetalab/report.hpp"

namespace zl = zetalab;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw zl::ValidationError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void print_summary(const zl::ExperimentReport& r) {
    std::printf("%s: %s\n", r.config.experiment.c_str(), r.passed() ? "pass" : "FAIL");
    for (const auto& s : r.scalars) std::printf("  %-28s %.10g\n", s.name.c_str(), s.value);
    for (const auto& f : r.flags) std::printf("  [%s] %s\n", f.value ? "ok" : "FAIL", f.name.c_str());
    if (r.partial) std::printf("  partial result (enumeration cap reached)\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments on mean values of the zeta function"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(zl::version_string()));

    zl::ExperimentConfig cfg;
    std::string config_path;
    auto* run = app.add_subcommand("run", "run one experiment and write <out>.json and <out>.<series>.csv");
    run->add_option("--config", config_path, "JSON config; flags given on the command line override it");
    run->add_option("--experiment", cfg.experiment, "experiment name")
        ->check(CLI::IsMember(zl::experiment_names()));
    run->add_option("--T", cfg.T, "height");
    run->add_option("--G", cfg.G, "bump radius (0: experiment default)");
    run->add_option("--K", cfg.K, "length / range parameter");
    run->add_option("--V", cfg.V, "large-value threshold");
    run->add_option("--M", cfg.M, "moment index (1 or 2)");
    run->add_option("--eta", cfg.eta, "D-window width");
    run->add_option("--eps", cfg.eps, "epsilon exponent in (0, 0.2]");
    run->add_option("--seed", cfg.seed, "random seed");
    run->add_option("--tol", cfg.tol, "quadrature tolerance");
    run->add_option("--count", cfg.count, "sample count / size knob");
    run->add_option("--out", cfg.out, "output prefix (no files written when empty)");

    std::string level = "smoke", out_dir;
    auto* suite = app.add_subcommand("suite", "run the release gate");
    suite->add_option("--level", level, "smoke or desk")->check(CLI::IsMember({"smoke", "desk"}));
    suite->add_option("--out", out_dir, "directory for per-case reports");
    double corrupt_a5 = 1.0;
    suite->add_option("--scale-a5", corrupt_a5, "multiply the a5 coefficient (fault injection)");

    double k = 1.0, t0 = 10.0;
    int levels = 9;
    auto* fit = app.add_subcommand("fit-taylor", "refit a5, a7 by Richardson extrapolation");
    fit->add_option("--k", k, "k held fixed");
    fit->add_option("--t0", t0, "first height; the grid is t0 * 2^j");
    fit->add_option("--levels", levels, "number of heights");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            zl::ExperimentConfig c = cfg;
            if (!config_path.empty()) {
                c = zl::config_from_json(read_file(config_path));
                // Command-line values win over the file.
                for (const auto* opt : run->get_options()) {
                    if (opt->count() == 0) continue;
                    const auto n = opt->get_name();
                    if (n == "--experiment") c.experiment = cfg.experiment;
                    if (n == "--T") c.T = cfg.T;
                    if (n == "--G") c.G = cfg.G;
                    if (n == "--K") c.K = cfg.K;
                    if (n == "--V") c.V = cfg.V;
                    if (n == "--M") c.M = cfg.M;
                    if (n == "--eta") c.eta = cfg.eta;
                    if (n == "--eps") c.eps = cfg.eps;
                    if (n == "--seed") c.seed = cfg.seed;
                    if (n == "--tol") c.tol = cfg.tol;
                    if (n == "--count") c.count = cfg.count;
                    if (n == "--out") c.out = cfg.out;
                }
            }
            if (c.experiment.empty()) throw zl::ValidationError("--experiment is required");
            const auto rep = zl::run_experiment(c);
            if (!c.out.empty()) zl::write_report(rep, c.out);
            print_summary(rep);
            return rep.passed() && !rep.partial ? 0 : 3;
        }
        if (*suite) {
            zl::RunOptions opt;
            opt.model.a5 *= corrupt_a5;
            const auto lv = level == "desk" ? zl::SuiteLevel::Desk : zl::SuiteLevel::Smoke;
            const auto res = zl::run_suite(lv, opt, out_dir, [](const zl::SuiteCaseResult& r) {
                std::printf("%-24s %s  %7.2fs", r.id.c_str(), r.passed ? "PASS" : "FAIL", r.wall_time);
                for (const auto& f : r.failed_flags) std::printf("  !%s", f.c_str());
                if (!r.error.empty()) std::printf("  error(%d): %s", r.exit_code, r.error.c_str());
                std::printf("\n");
                std::fflush(stdout);
            });
            std::size_t failed = 0;
            for (const auto& r : res.cases) failed += !r.passed;
            std::printf("%s suite: %zu/%zu passed\n", level.c_str(), res.cases.size() - failed, res.cases.size());
            return res.exit_code;
        }
        if (*fit) {
            const auto f = zl::fit_taylor_coefficients(k, t0, levels);
            std::printf("a5 = %.17g  (last correction %.3g)\n", f.a5, f.a5_last_correction);
            std::printf("a7 = %.17g  (last correction %.3g)\n", f.a7, f.a7_last_correction);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return zl::exit_code_for(e);
    }
    return 0;
}
