#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "wxeb/analysis.hpp"
#include "wxeb/estimators.hpp"
#include "wxeb/io.hpp"
#include "wxeb/noise.hpp"
#include "wxeb/pipeline.hpp"
#include "wxeb/walsh.hpp"

namespace {

using namespace wxeb;

int run(int argc, char** argv) {
    CLI::App app{"Fourier-Walsh statistical toolkit for noisy random-circuit-sampling data"};
    app.require_subcommand(1);

    // gen-pt
    auto* gen = app.add_subcommand("gen-pt", "Generate a Porter-Thomas probability table");
    int gen_n = 12;
    std::uint64_t gen_seed = 0;
    std::string gen_out, gen_format = "binary";
    gen->add_option("--n", gen_n, "Qubit count")->required();
    gen->add_option("--seed", gen_seed, "Master seed")->required();
    gen->add_option("--out", gen_out, "Output path")->required();
    gen->add_option("--format", gen_format, "text|binary");

    // corrupt
    auto* corrupt = app.add_subcommand("corrupt", "Apply a noise model to a probability table");
    std::string cor_in, cor_out, cor_noise, cor_format = "binary";
    corrupt->add_option("--in", cor_in)->required();
    corrupt->add_option("--noise", cor_noise, "e.g. google:phi=0.4 | symro:s=0.5,q=0.038")->required();
    corrupt->add_option("--out", cor_out)->required();
    corrupt->add_option("--format", cor_format, "text|binary");

    // sample
    auto* sample = app.add_subcommand("sample", "Draw seeded bitstring samples from a table");
    std::string smp_in, smp_out, smp_tformat = "binary", smp_sformat = "counts";
    std::int64_t smp_shots = 500000;
    std::uint64_t smp_seed = 0;
    bool smp_stream = false;
    sample->add_option("--in", smp_in)->required();
    sample->add_option("--shots", smp_shots)->required();
    sample->add_option("--seed", smp_seed)->required();
    sample->add_option("--out", smp_out)->required();
    sample->add_option("--format", smp_sformat, "bitstrings|counts");
    sample->add_option("--table-format", smp_tformat, "text|binary");
    sample->add_flag("--stream", smp_stream, "Keep the ordered stream (implied by bitstrings format)");

    // estimate
    auto* est = app.add_subcommand("estimate", "Compute the fidelity/readout estimator family");
    std::string est_p, est_samples, est_tformat = "binary", est_sformat = "counts";
    double est_q = 0.038;
    est->add_option("--p", est_p, "Ideal probability table")->required();
    est->add_option("--samples", est_samples)->required();
    est->add_option("--q", est_q, "Readout rate for secondary-signal estimators");
    est->add_option("--table-format", est_tformat, "text|binary");
    est->add_option("--format", est_sformat, "bitstrings|counts");

    // fourier
    auto* fourier = app.add_subcommand("fourier", "Spectrum diagnostics of a table (degree energies, histogram)");
    std::string fo_in, fo_tformat = "binary";
    int fo_bins = 50;
    fourier->add_option("--in", fo_in)->required();
    fourier->add_option("--bins", fo_bins, "Histogram bins");
    fourier->add_option("--table-format", fo_tformat, "text|binary");

    // fit-sq
    auto* fsq = app.add_subcommand("fit-sq", "MLE fit of s*T_{1-2q}(P) + (1-s)/M");
    std::string fs_p, fs_samples, fs_tformat = "binary", fs_sformat = "counts";
    fsq->add_option("--p", fs_p)->required();
    fsq->add_option("--samples", fs_samples)->required();
    fsq->add_option("--table-format", fs_tformat, "text|binary");
    fsq->add_option("--format", fs_sformat, "bitstrings|counts");

    // drift
    auto* drift = app.add_subcommand("drift", "Split-half non-stationarity check per Fourier degree");
    std::string dr_p, dr_samples, dr_tformat = "binary";
    int dr_trials = 100;
    std::uint64_t dr_seed = 0;
    drift->add_option("--p", dr_p)->required();
    drift->add_option("--samples", dr_samples, "bitstrings-format sample file (ordered)")->required();
    drift->add_option("--trials", dr_trials);
    drift->add_option("--seed", dr_seed)->required();
    drift->add_option("--table-format", dr_tformat, "text|binary");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Generate, corrupt, sample, and analyze many circuits");
    ExperimentConfig config;
    std::string pipe_format = "both";
    pipe->add_option("--n", config.n)->required();
    pipe->add_option("--seed", config.master_seed)->required();
    pipe->add_option("--circuits", config.circuits);
    pipe->add_option("--noise", config.noise)->required();
    pipe->add_option("--shots", config.shots);
    pipe->add_option("--q", config.q_secondary, "Secondary-signal q (default: from noise spec)");
    pipe->add_option("--threads", config.threads);
    pipe->add_option("--out", config.out_dir)->required();
    pipe->add_option("--format", pipe_format, "json|csv|both");
    pipe->add_flag("--stream", config.keep_stream);
    pipe->add_flag("!--no-profile", config.run_profile, "Skip the degree profile");
    pipe->add_flag("!--no-fit-sq", config.run_fit_sq, "Skip the (s,q) fit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*gen) {
        save_probability_table(generate_porter_thomas(gen_n, gen_seed), gen_out, parse_table_format(gen_format));
    } else if (*corrupt) {
        const ProbabilityTable p = load_probability_table(cor_in, parse_table_format(cor_format));
        save_probability_table(apply_noise_model(p, parse_noise_spec(cor_noise)), cor_out,
                               parse_table_format(cor_format));
    } else if (*sample) {
        const SampleFormat sf = parse_sample_format(smp_sformat);
        const ProbabilityTable p = load_probability_table(smp_in, parse_table_format(smp_tformat));
        const bool keep = smp_stream || sf == SampleFormat::Bitstrings;
        save_samples(draw_samples(p, smp_shots, smp_seed, keep), smp_out, sf);
    } else if (*est) {
        const ProbabilityTable p = load_probability_table(est_p, parse_table_format(est_tformat));
        const SampleSet samples = load_samples(est_samples, parse_sample_format(est_sformat));
        const EstimatorReport r = estimate_all(p, samples, est_q);
        std::printf("U        %.6f\n", r.u);
        std::printf("V        %.6f  (%s)\n", r.v.value, to_string(r.v.status).c_str());
        std::printf("MLE      %.6f  (%s)\n", r.mle.value, to_string(r.mle.status).c_str());
        std::printf("T^2      %.6f   T %.6f\n", r.t_squared, r.t);
        std::printf("S^2      %.6f   S %.6f  (%s)\n", r.s_squared.value, r.s, to_string(r.s_squared.status).c_str());
        std::printf("phi_ro   %.6f  (corr, %s)\n", r.phi_ro_corr.value, to_string(r.phi_ro_corr.status).c_str());
        std::printf("phi_ro   %.6f  phi %.6f  (joint MLE, %s)\n", r.phi_ro_mle.phi_ro, r.phi_ro_mle.phi,
                    to_string(r.phi_ro_mle.status).c_str());
        std::printf("alt-phi  %.6f\n", r.alt_phi);
    } else if (*fourier) {
        const ProbabilityTable p = load_probability_table(fo_in, parse_table_format(fo_tformat));
        const auto gamma = degree_energies(wht_forward(p));
        std::printf("k,gamma_k\n");
        for (std::size_t k = 0; k < gamma.size(); ++k) std::printf("%zu,%.17g\n", k, gamma[k]);
        const CoefficientHistogram h = coefficient_histogram(p, fo_bins);
        std::printf("# coefficient moments: mean %.6g var %.6g skew %.6g exkurt %.6g\n", h.mean, h.variance,
                    h.skewness, h.excess_kurtosis);
    } else if (*fsq) {
        const ProbabilityTable p = load_probability_table(fs_p, parse_table_format(fs_tformat));
        const SampleSet samples = load_samples(fs_samples, parse_sample_format(fs_sformat));
        const SQFit fit = fit_sq(p, samples);
        std::printf("s %.6f\nq %.6f\nlog_likelihood %.6f\nstatus %s\n", fit.s, fit.q, fit.log_likelihood,
                    to_string(fit.status).c_str());
    } else if (*drift) {
        const ProbabilityTable p = load_probability_table(dr_p, parse_table_format(dr_tformat));
        const SampleSet samples = load_samples(dr_samples, SampleFormat::Bitstrings);
        const DriftReport r = split_half_drift(p, samples, dr_trials, dr_seed);
        std::printf("k,chrono_distance,p_value\n");
        for (int k = 1; k <= r.n; ++k)
            std::printf("%d,%.17g,%.6f\n", k, r.chrono_distance[k - 1], r.p_value[k - 1]);
    } else if (*pipe) {
        const RunReport report = run_pipeline(config);
        emit_report(report, pipe_format);
        std::printf("wrote report for %d circuits to %s\n", config.circuits, config.out_dir.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
