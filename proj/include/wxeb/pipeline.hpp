#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wxeb/types.hpp"

namespace wxeb {

struct ExperimentConfig {
    int n = 12;
    std::uint64_t master_seed = 1;  // mandatory, no wall-clock seeding
    int circuits = 10;
    std::string noise = "google:phi=0.4";
    std::int64_t shots = 500000;

    bool run_estimators = true;
    bool run_profile = true;
    bool run_fit_sq = true;

    // q used by the secondary-signal estimators; negative means "take the
    // readout rate from the noise spec, falling back to 0.038"
    double q_secondary = -1.0;

    // inputs to the a priori fidelity prediction
    std::vector<double> one_gate_errors;
    std::vector<double> two_gate_errors;
    std::vector<double> readout_errors;

    int threads = 1;
    bool keep_stream = false;
    std::string out_dir;  // empty = no files, report returned only

    std::string canonical_string() const;
    std::uint64_t hash() const;  // FNV-1a of canonical_string()
};

struct CircuitRow {
    int index = 0;
    double formula77 = 1.0;
    EstimatorReport estimators;
    DegreeProfile profile;
    SQFit sq;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<CircuitRow> rows;
    // column order matches the CSV schema
    std::vector<std::string> aggregate_columns;
    std::vector<double> mean;
    std::vector<double> stddev;  // n-1 denominator
    std::string provenance_version;
    std::uint64_t config_hash = 0;
};

RunReport run_pipeline(const ExperimentConfig& config);

/// Scalar columns of one row, in CSV order (formula77..q_fit).
std::vector<double> report_row_values(const CircuitRow& row);

std::string report_to_json(const RunReport& report);
std::string report_to_csv(const RunReport& report);
std::string profiles_to_csv(const RunReport& report);

/// Writes report.json / report.csv / profiles.csv under config.out_dir
/// according to `format` ("json", "csv", or "both").
void emit_report(const RunReport& report, const std::string& format);

}  // namespace wxeb
