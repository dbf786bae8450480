#pragma once

#include <cstdint>
#include <vector>

#include "wxeb/types.hpp"

namespace wxeb {

/// Lambda_k = sum_{|S|=k} A_hat(S) P_hat(S) / (N gamma_k), with jackknife
/// standard errors over `blocks` sample blocks. Calibrated so that fractional
/// counts A = N*P give Lambda_k = 1 for every k.
DegreeProfile lambda_profile(const ProbabilityTable& p, const SampleSet& samples, int blocks = 50);

/// Same estimator on an arbitrary real-valued count function (no stderr).
std::vector<double> lambda_from_counts(const ProbabilityTable& p, const std::vector<double>& count_fn,
                                       double n_samples);

/// Per-degree XEB contributions u_k with sum_k u_k == xeb_u exactly.
std::vector<double> xeb_degree_decomposition(const ProbabilityTable& p, const SampleSet& samples);

/// MLE fit of s T_{1-2q} P + (1-s)/M over s in [0,1], q in [0, 1/2).
SQFit fit_sq(const ProbabilityTable& p, const SampleSet& samples);

/// Exhaustive grid evaluation used as the fit_sq ground-truth oracle.
SQFit fit_sq_grid_oracle(const ProbabilityTable& p, const SampleSet& samples, int grid_s = 200,
                         int grid_q = 200);

double sq_log_likelihood(const ProbabilityTable& p, const SampleSet& samples, double s, double q);

/// k -> s (1-2q)^k for k = 1..n.
std::vector<double> reference_curve(double s, double q, int n);

struct DriftReport {
    int n = 0;
    int trials = 0;
    std::vector<double> chrono_distance;  // index k-1 holds degree k
    std::vector<double> p_value;          // empirical rank of the chronological split
};

/// Per-degree spectral l2 distance between first/second half count functions,
/// compared against `trials` random partitions of the stream.
DriftReport split_half_drift(const ProbabilityTable& p, const SampleSet& samples, int trials,
                             std::uint64_t seed);

struct CoefficientHistogram {
    std::vector<std::int64_t> bin_counts;
    double lo = 0.0;
    double hi = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

/// Histogram and moments of the standardized coefficients {M P_hat(S) : S != empty}.
CoefficientHistogram coefficient_histogram(const ProbabilityTable& p, int bins);

}  // namespace wxeb
