#pragma once

#include <vector>

#include "wxeb/types.hpp"

namespace wxeb {

/// Linear cross-entropy estimator U = (M/N) sum_i n_i w_i - 1.
double xeb_u(const ProbabilityTable& p, const SampleSet& samples);

/// Per-circuit unbiased variant V = U / (M w^(2) - 1); degenerate when P is
/// (near-)uniform.
ScalarEstimate xeb_v(const ProbabilityTable& p, const SampleSet& samples);

/// MLE for phi under the linear noise model: root of the strictly decreasing
/// score, bisected to 1e-8 and clamped to [0,1].
ScalarEstimate mle_phi(const ProbabilityTable& p, const SampleSet& samples);

/// T^2, the count-only second-moment estimator of phi^2 (may be negative).
double t_estimator(const SampleSet& samples);

/// S^2 = normalized T^2; degenerate for uniform P.
ScalarEstimate s_estimator(const ProbabilityTable& p, const SampleSet& samples);

/// A priori fidelity prediction: product of (1-e) over gates and qubits.
double formula77(const std::vector<double>& one_gate_errors, const std::vector<double>& two_gate_errors,
                 const std::vector<double>& readout_errors);

/// N^ro = (T_{1-2q}P - (1-q)^n P) / (1 - (1-q)^n), computed spectrally.
SecondarySignal secondary_signal(const ProbabilityTable& p, double q);

/// Correlation-style phi_ro estimate: ((M/N) sum_j N^ro(z_j) - 1) / (M<N^ro,N^ro> - 1).
ScalarEstimate phi_ro_corr(const ProbabilityTable& p, const SampleSet& samples, double q);

/// Joint constrained MLE of (phi, phi_ro) under
/// pi_i = phi (w_i - 1/M) + phi_ro (v_i - 1/M) + 1/M.
PhiRoMleResult phi_ro_mle(const ProbabilityTable& p, const SampleSet& samples, double q);

/// alt-phi = phi_ro / ((1-q)^{-n} - 1).
double alt_phi(double phi_ro, double q, int n);

/// phi_ro = phi ((1-q)^{-n} - 1); exact inverse of alt_phi.
double phi_ro_from_phi(double phi, double q, int n);

/// Convenience: max(0, sqrt(max(0, x))).
double clamped_sqrt(double x);

/// Runs the full estimator family for one (P, samples) pair; q feeds the
/// secondary-signal estimators.
EstimatorReport estimate_all(const ProbabilityTable& p, const SampleSet& samples, double q);

}  // namespace wxeb
