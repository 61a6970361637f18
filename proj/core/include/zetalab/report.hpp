#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace zetalab {

inline constexpr int kReportSchemaVersion = 1;
const char* version_string();

/// Parameters shared by every experiment. Zero means "use the experiment's default".
struct ExperimentConfig {
    std::string experiment;
    double T = 0.0;
    double G = 0.0;
    std::uint64_t K = 0;
    double V = 0.0;
    int M = 0;
    double eta = 0.1;
    double eps = 0.05;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    std::uint64_t count = 0;
    std::string out;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Names accepted by ExperimentConfig::experiment.
const std::vector<std::string>& experiment_names();

/// Throws ValidationError naming the first failed check.
void validate_config(const ExperimentConfig& c);

std::string config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const std::string& text);

struct ReportScalar {
    std::string name;
    double value;
    std::string label;  // which formula or oracle the value comes from
    double tolerance = std::numeric_limits<double>::quiet_NaN();
};

struct ReportFlag {
    std::string name;
    bool value;
    std::string label;
};

struct ReportSeries {
    std::string name;
    std::string label;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ReportScalar> scalars;
    std::vector<ReportFlag> flags;
    std::vector<ReportSeries> series;
    std::vector<std::string> notes;
    bool partial = false;
    double wall_time = 0.0;

    void add(std::string name, double value, std::string label,
             double tolerance = std::numeric_limits<double>::quiet_NaN());
    void flag(std::string name, bool value, std::string label);
    ReportSeries& add_series(std::string name, std::string label, std::vector<std::string> columns);

    /// Throws ValidationError if the name is absent.
    double scalar(const std::string& name) const;
    bool flag_value(const std::string& name) const;
    const ReportSeries& get_series(const std::string& name) const;

    /// All flags true.
    bool passed() const;

    /// Wall time is omitted unless requested, so reports of identical runs compare equal.
    std::string to_json(bool with_wall_time = false) const;
};

std::string series_to_csv(const ReportSeries& s);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

/// Writes <out>.json and one <out>.<series>.csv per series.
void write_report(const ExperimentReport& r, const std::string& out_prefix);

}  // namespace zetalab
