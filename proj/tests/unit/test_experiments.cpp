#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zetalab/errors.hpp"
#include "zetalab/experiments.hpp"
#include "zetalab/parallel.hpp"
#include "zetalab/report.hpp"

using namespace zetalab;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig named(const std::string& e) {
    ExperimentConfig c;
    c.experiment = e;
    return c;
}

}  // namespace

TEST_CASE("config JSON round trip") {
    ExperimentConfig c;
    c.experiment = "pipeline";
    c.T = 12345.5;
    c.G = 17.25;
    c.K = 33;
    c.V = 2.5;
    c.M = 2;
    c.eta = 0.07;
    c.eps = 0.06;
    c.seed = 99;
    c.tol = 1e-9;
    c.count = 7;
    c.out = "/tmp/x";
    CHECK(config_from_json(config_to_json(c)) == c);
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(validate_config(named("no-such-experiment")), ValidationError);
    CHECK_THROWS_AS(run_experiment(named("no-such-experiment")), ValidationError);
    CHECK_THROWS_AS(config_from_json("{not json"), ValidationError);
    auto neg = named("zeta-check");
    neg.T = -5.0;
    CHECK_THROWS_AS(run_experiment(neg), ValidationError);
    CHECK(exit_code_for(ValidationError("x")) == 1);
    CHECK(exit_code_for(DomainError("x")) == 1);
    CHECK(exit_code_for(ConvergenceError("x", 0.0, 0.0)) == 2);
    CHECK(exit_code_for(ConsistencyError("x")) == 3);
}

TEST_CASE("every experiment name has defaults") {
    for (const auto& e : experiment_names()) {
        const auto c = resolve_defaults(named(e));
        CHECK(c.experiment == e);
    }
}

TEST_CASE("smoothed-vs-classical report carries both sums and the majorization flag") {
    auto c = named("smoothed-vs-classical");
    c.T = 1e4;
    c.count = 5;
    const auto r = run_experiment(c);
    CHECK(r.scalar("smoothed_total") >= r.scalar("classical_total"));
    CHECK(r.flag_value("majorization"));
    CHECK(r.config.T == 1e4);
}

TEST_CASE("reports are byte-identical across reruns and pool widths") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "zetalab_unit_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto c = named("exp-sum-grid");
    c.T = 1e4;
    c.count = 40;
    c.K = 512;
    std::string first;
    for (std::size_t width : {1, 3, 1}) {
        set_worker_count(width);
        const auto r = run_experiment(c);
        const auto prefix = (dir / ("w" + std::to_string(width))).string();
        write_report(r, prefix);
        std::string json = slurp(prefix + ".json");
        const auto at = json.find("\"wall_time_s\"");
        REQUIRE(at != std::string::npos);
        json.erase(at, json.find('\n', at) - at);
        const std::string text = r.to_json() + json + slurp(prefix + ".grid1.csv") + slurp(prefix + ".grid2.csv");
        if (first.empty()) first = text;
        CHECK(text == first);
    }
    set_worker_count(0);
    fs::remove_all(dir);
}

TEST_CASE("atomic write leaves no temporary files") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "zetalab_unit_atomic";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file_atomic((dir / "a.txt").string(), "one");
    write_file_atomic((dir / "a.txt").string(), "two");
    CHECK(slurp(dir / "a.txt") == "two");
    CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
    fs::remove_all(dir);
}

TEST_CASE("CSV output") {
    ReportSeries s{"x", "label", {"a", "b"}, {{1.0, 0.5}, {2.0, std::nan("")}}};
    const auto csv = series_to_csv(s);
    CHECK(csv.rfind("a,b\n", 0) == 0);
    CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("taylor-dominance detects a corrupted a5") {
    auto c = named("taylor-dominance");
    CHECK(run_experiment(c).passed());
    RunOptions bad;
    bad.model.a5 *= 1.5;
    CHECK_FALSE(run_experiment(c, bad).passed());
}

TEST_CASE("suite ids: desk contains smoke") {
    const auto smoke = suite_cases(SuiteLevel::Smoke), desk = suite_cases(SuiteLevel::Desk);
    for (const auto& s : smoke) {
        bool found = false;
        for (const auto& d : desk) found = found || d.id == s.id;
        CHECK_MESSAGE(found, s.id);
    }
    CHECK(desk.size() > smoke.size());
}
