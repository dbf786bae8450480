#include "wxeb/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "wxeb/analysis.hpp"
#include "wxeb/estimators.hpp"
#include "wxeb/noise.hpp"
#include "wxeb/rng.hpp"

namespace wxeb {

namespace {

constexpr const char* kVersionString = "wxeb 1.0.0";

using nlohmann::ordered_json;

double nan_to_json_safe(double v) { return std::isfinite(v) ? v : 0.0; }

ordered_json scalar_json(const ScalarEstimate& e) {
    ordered_json j;
    j["value"] = nan_to_json_safe(e.value);
    j["status"] = to_string(e.status);
    if (!e.reason.empty()) j["reason"] = e.reason;
    return j;
}

}  // namespace

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "n=" << n << ";seed=" << master_seed << ";circuits=" << circuits << ";noise=" << noise
       << ";shots=" << shots << ";est=" << run_estimators << ";profile=" << run_profile
       << ";fit_sq=" << run_fit_sq << ";q=" << q_secondary << ";stream=" << keep_stream;
    os << ";e1=";
    for (double e : one_gate_errors) os << e << ",";
    os << ";e2=";
    for (double e : two_gate_errors) os << e << ",";
    os << ";eq=";
    for (double e : readout_errors) os << e << ",";
    return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
    // FNV-1a; threads and out_dir are deliberately excluded so the hash pins
    // only the numerics
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : canonical_string()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

CircuitRow run_one_circuit(const ExperimentConfig& config, const NoiseModelSpec& spec, double q, int index) {
    CircuitRow row;
    row.index = index;

    const std::uint64_t circuit_seed = derive_seed(config.master_seed, RngPurpose::TableGen,
                                                   static_cast<std::uint64_t>(index));
    const std::uint64_t sample_seed = derive_seed(config.master_seed, RngPurpose::Sampling,
                                                  static_cast<std::uint64_t>(index));

    const ProbabilityTable ideal = generate_porter_thomas(config.n, circuit_seed);
    const ProbabilityTable noisy = apply_noise_model(ideal, spec);
    const SampleSet samples = draw_samples(noisy, config.shots, sample_seed, config.keep_stream);

    row.formula77 = formula77(config.one_gate_errors, config.two_gate_errors, config.readout_errors);
    if (samples.total > 0) {
        if (config.run_estimators) row.estimators = estimate_all(ideal, samples, q);
        if (config.run_profile) row.profile = lambda_profile(ideal, samples);
        if (config.run_fit_sq) row.sq = fit_sq(ideal, samples);
    } else {
        // analysis still "ran"; estimators are per-estimator degenerate
        row.estimators.v = {0.0, EstimatorStatus::Degenerate, "empty_sample_set"};
        row.estimators.mle = {0.0, EstimatorStatus::Degenerate, "empty_sample_set"};
        row.estimators.s_squared = {0.0, EstimatorStatus::Degenerate, "empty_sample_set"};
        row.estimators.phi_ro_corr = {0.0, EstimatorStatus::Degenerate, "empty_sample_set"};
        row.estimators.phi_ro_mle.status = EstimatorStatus::Degenerate;
        row.estimators.phi_ro_mle.reason = "empty_sample_set";
    }
    return row;
}

}  // namespace

std::vector<double> report_row_values(const CircuitRow& row) {
    const EstimatorReport& e = row.estimators;
    return {row.formula77, e.u,      e.v.value, e.mle.value,        e.t,     e.s,
            e.alt_phi,     e.phi_ro_mle.phi_ro, row.sq.s,           row.sq.q};
}

RunReport run_pipeline(const ExperimentConfig& config) {
    if (config.circuits < 0) throw std::invalid_argument("pipeline: circuit count must be >= 0");
    const NoiseModelSpec spec = parse_noise_spec(config.noise);
    double q = config.q_secondary;
    if (q < 0.0) {
        q = readout_rate_of(spec);
        if (q <= 0.0) q = 0.038;
    }

    RunReport report;
    report.config = config;
    report.config_hash = config.hash();
    report.provenance_version = kVersionString;
    report.rows.resize(static_cast<std::size_t>(config.circuits));

    if (config.threads > 1 && config.circuits > 1) {
        std::vector<std::future<CircuitRow>> futures;
        futures.reserve(static_cast<std::size_t>(config.circuits));
        for (int i = 0; i < config.circuits; ++i)
            futures.push_back(std::async(std::launch::async, run_one_circuit, std::cref(config),
                                         std::cref(spec), q, i));
        for (int i = 0; i < config.circuits; ++i) report.rows[static_cast<std::size_t>(i)] = futures[i].get();
    } else {
        for (int i = 0; i < config.circuits; ++i)
            report.rows[static_cast<std::size_t>(i)] = run_one_circuit(config, spec, q, i);
    }

    report.aggregate_columns = {"formula77", "U", "V", "MLE", "T", "S", "alt_phi", "phi_ro", "s_fit", "q_fit"};
    const std::size_t cols = report.aggregate_columns.size();
    report.mean.assign(cols, 0.0);
    report.stddev.assign(cols, 0.0);
    const double count = static_cast<double>(report.rows.size());
    if (!report.rows.empty()) {
        for (const CircuitRow& row : report.rows) {
            const std::vector<double> vals = report_row_values(row);
            for (std::size_t c = 0; c < cols; ++c) report.mean[c] += vals[c];
        }
        for (std::size_t c = 0; c < cols; ++c) report.mean[c] /= count;
        if (report.rows.size() > 1) {
            for (const CircuitRow& row : report.rows) {
                const std::vector<double> vals = report_row_values(row);
                for (std::size_t c = 0; c < cols; ++c) {
                    const double d = vals[c] - report.mean[c];
                    report.stddev[c] += d * d;
                }
            }
            for (std::size_t c = 0; c < cols; ++c) report.stddev[c] = std::sqrt(report.stddev[c] / (count - 1.0));
        }
    }
    return report;
}

std::string report_to_json(const RunReport& report) {
    ordered_json j;
    j["provenance"]["version"] = report.provenance_version;
    j["provenance"]["master_seed"] = report.config.master_seed;
    j["provenance"]["config"] = report.config.canonical_string();
    j["provenance"]["config_hash"] = report.config_hash;

    j["circuits"] = ordered_json::array();
    for (const CircuitRow& row : report.rows) {
        ordered_json c;
        c["index"] = row.index;
        c["formula77"] = row.formula77;
        const EstimatorReport& e = row.estimators;
        c["U"] = nan_to_json_safe(e.u);
        c["V"] = scalar_json(e.v);
        c["MLE"] = scalar_json(e.mle);
        c["T_squared"] = nan_to_json_safe(e.t_squared);
        c["T"] = e.t;
        c["S_squared"] = scalar_json(e.s_squared);
        c["S"] = e.s;
        c["phi_ro_corr"] = scalar_json(e.phi_ro_corr);
        c["phi_ro_mle"] = {{"phi", e.phi_ro_mle.phi},
                           {"phi_ro", e.phi_ro_mle.phi_ro},
                           {"status", to_string(e.phi_ro_mle.status)},
                           {"boundary_active", e.phi_ro_mle.boundary_active}};
        c["alt_phi"] = e.alt_phi;
        if (!row.profile.lambda.empty()) {
            ordered_json prof = ordered_json::array();
            for (int k = 1; k <= row.profile.n; ++k)
                prof.push_back({{"k", k},
                                {"lambda", nan_to_json_safe(row.profile.lambda[k - 1])},
                                {"stderr", nan_to_json_safe(row.profile.stderr_jk[k - 1])},
                                {"unstable", static_cast<bool>(row.profile.unstable[k - 1])}});
            c["degree_profile"] = prof;
        }
        c["sq_fit"] = {{"s", row.sq.s},
                       {"q", row.sq.q},
                       {"log_likelihood", nan_to_json_safe(row.sq.log_likelihood)},
                       {"status", to_string(row.sq.status)}};
        j["circuits"].push_back(c);
    }

    j["aggregates"]["columns"] = report.aggregate_columns;
    j["aggregates"]["mean"] = report.mean;
    j["aggregates"]["std"] = report.stddev;
    return j.dump(2);
}

std::string report_to_csv(const RunReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "n,file,formula77,U,V,MLE,T,S,alt_phi,phi_ro,s_fit,q_fit\n";
    for (const CircuitRow& row : report.rows) {
        os << report.config.n << "," << row.index;
        for (double v : report_row_values(row)) os << "," << v;
        os << "\n";
    }
    os << report.config.n << ",Avg";
    for (double v : report.mean) os << "," << v;
    os << "\n" << report.config.n << ",Std";
    for (double v : report.stddev) os << "," << v;
    os << "\n";
    return os.str();
}

std::string profiles_to_csv(const RunReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "file,k,lambda,stderr,unstable\n";
    for (const CircuitRow& row : report.rows) {
        for (int k = 1; k <= row.profile.n; ++k)
            os << row.index << "," << k << "," << row.profile.lambda[k - 1] << ","
               << row.profile.stderr_jk[k - 1] << "," << (row.profile.unstable[k - 1] ? 1 : 0) << "\n";
    }
    return os.str();
}

void emit_report(const RunReport& report, const std::string& format) {
    if (report.config.out_dir.empty()) throw std::runtime_error("emit_report: no output directory configured");
    namespace fs = std::filesystem;
    fs::create_directories(report.config.out_dir);
    auto write = [&](const std::string& name, const std::string& body) {
        const fs::path path = fs::path(report.config.out_dir) / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
        out << body;
        if (!out) throw std::runtime_error(path.string() + ": write failed");
    };
    const bool json = format == "json" || format == "both";
    const bool csv = format == "csv" || format == "both";
    if (!json && !csv) throw std::invalid_argument("emit_report: format must be json, csv, or both");
    if (json) write("report.json", report_to_json(report));
    if (csv) {
        write("report.csv", report_to_csv(report));
        write("profiles.csv", profiles_to_csv(report));
    }
}

}  // namespace wxeb
