#include "zetalab/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "zetalab/errors.hpp"

#ifndef ZETALAB_VERSION
#define ZETALAB_VERSION "0.0.0"
#endif

namespace zetalab {

using ojson = nlohmann::ordered_json;

const char* version_string() { return ZETALAB_VERSION; }

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "zeta-check",       "error-term",        "smoothed-vs-classical", "large-values",
        "atkinson",         "fit-taylor",        "taylor-dominance",      "poisson",
        "saddle",           "dirichlet-meansq",  "pipeline",              "derivative-tests",
        "exp-sum-grid",     "oscillatory-integral", "twelfth-moment",     "diagonal",
        "ell-uniqueness",   "near-integer",      "moment-rhs",          "quadruple-sum",
        "restricted-sum",
    };
    return names;
}

void validate_config(const ExperimentConfig& c) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end())
        throw ValidationError("unknown experiment '" + c.experiment + "'");
    auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
    if (!finite_nonneg(c.T)) throw ValidationError("T must be finite and >= 0");
    if (!finite_nonneg(c.G)) throw ValidationError("G must be finite and >= 0");
    if (!finite_nonneg(c.V)) throw ValidationError("V must be finite and >= 0");
    if (c.M < 0 || c.M > 2) throw ValidationError("M must be 1 or 2 (0 selects the default)");
    if (!(c.eps > 0.0 && c.eps <= 0.2)) throw ValidationError("eps must lie in (0, 0.2]");
    if (!(c.eta > 0.0 && c.eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
    if (!(c.tol > 0.0 && c.tol <= 1e-2)) throw ValidationError("tol must lie in (0, 1e-2]");
}

std::string config_to_json(const ExperimentConfig& c) {
    ojson j;
    j["experiment"] = c.experiment;
    j["T"] = c.T;
    j["G"] = c.G;
    j["K"] = c.K;
    j["V"] = c.V;
    j["M"] = c.M;
    j["eta"] = c.eta;
    j["eps"] = c.eps;
    j["seed"] = c.seed;
    j["tol"] = c.tol;
    j["count"] = c.count;
    j["out"] = c.out;
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    ExperimentConfig c;
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) throw ValidationError("config JSON must be an object");
        for (const auto& [key, _] : j.items()) {
            static const char* known[] = {"experiment", "T", "G", "K", "V", "M", "eta", "eps", "seed", "tol", "count", "out"};
            if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
                throw ValidationError("unknown config key '" + key + "'");
        }
        c.experiment = j.value("experiment", c.experiment);
        c.T = j.value("T", c.T);
        c.G = j.value("G", c.G);
        c.K = j.value("K", c.K);
        c.V = j.value("V", c.V);
        c.M = j.value("M", c.M);
        c.eta = j.value("eta", c.eta);
        c.eps = j.value("eps", c.eps);
        c.seed = j.value("seed", c.seed);
        c.tol = j.value("tol", c.tol);
        c.count = j.value("count", c.count);
        c.out = j.value("out", c.out);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config JSON: ") + e.what());
    }
    return c;
}

// ---------------------------------------------------------------------------

void ExperimentReport::add(std::string name, double value, std::string label, double tolerance) {
    scalars.push_back({std::move(name), value, std::move(label), tolerance});
}

void ExperimentReport::flag(std::string name, bool value, std::string label) {
    flags.push_back({std::move(name), value, std::move(label)});
}

ReportSeries& ExperimentReport::add_series(std::string name, std::string label, std::vector<std::string> columns) {
    series.push_back({std::move(name), std::move(label), std::move(columns), {}});
    return series.back();
}

double ExperimentReport::scalar(const std::string& name) const {
    for (const auto& s : scalars)
        if (s.name == name) return s.value;
    throw ValidationError("report has no scalar '" + name + "'");
}

bool ExperimentReport::flag_value(const std::string& name) const {
    for (const auto& f : flags)
        if (f.name == name) return f.value;
    throw ValidationError("report has no flag '" + name + "'");
}

const ReportSeries& ExperimentReport::get_series(const std::string& name) const {
    for (const auto& s : series)
        if (s.name == name) return s;
    throw ValidationError("report has no series '" + name + "'");
}

bool ExperimentReport::passed() const {
    return std::all_of(flags.begin(), flags.end(), [](const ReportFlag& f) { return f.value; });
}

namespace {

ojson number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return nullptr;
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

std::string ExperimentReport::to_json(bool with_wall_time) const {
    ojson j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool_version"] = version_string();
    j["config"] = ojson::parse(config_to_json(config));
    j["partial"] = partial;
    if (with_wall_time) j["wall_time_s"] = wall_time;
    j["passed"] = passed();
    ojson sc = ojson::array();
    for (const auto& s : scalars) {
        ojson e;
        e["name"] = s.name;
        e["value"] = number(s.value);
        e["label"] = s.label;
        e["tolerance"] = number(s.tolerance);
        sc.push_back(std::move(e));
    }
    j["scalars"] = std::move(sc);
    ojson fl = ojson::array();
    for (const auto& f : flags) fl.push_back({{"name", f.name}, {"value", f.value}, {"label", f.label}});
    j["flags"] = std::move(fl);
    ojson se = ojson::array();
    for (const auto& s : series) {
        ojson e;
        e["name"] = s.name;
        e["label"] = s.label;
        e["columns"] = s.columns;
        e["rows"] = s.rows.size();
        se.push_back(std::move(e));
    }
    j["series"] = std::move(se);
    j["notes"] = notes;
    return j.dump(2) + "\n";
}

std::string series_to_csv(const ReportSeries& s) {
    std::ostringstream os;
    for (std::size_t i = 0; i < s.columns.size(); ++i) os << (i ? "," : "") << s.columns[i];
    os << '\n';
    char buf[40];
    for (const auto& row : s.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            os << (i ? "," : "") << buf;
        }
        os << '\n';
    }
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    static std::atomic<unsigned> counter{0};
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot open '" + tmp.string() + "' for writing");
        f << content;
        f.flush();
        if (!f) throw ValidationError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw ValidationError("cannot move output into '" + path + "': " + ec.message());
    }
}

void write_report(const ExperimentReport& r, const std::string& out_prefix) {
    for (const auto& s : r.series) write_file_atomic(out_prefix + "." + s.name + ".csv", series_to_csv(s));
    write_file_atomic(out_prefix + ".json", r.to_json(true));
}

}  // namespace zetalab
