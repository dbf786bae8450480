#pragma once

#include <cstdint>
#include <string>

#include "wxeb/types.hpp"

namespace wxeb {

/// Ideal random-circuit output distribution: iid Exp(1) values, normalized.
ProbabilityTable generate_porter_thomas(int n, std::uint64_t seed, int max_n = kDefaultMaxQubits);

/// Applies the channel exactly at the distribution level. Entries in
/// [-1e-12, 0) are clamped to zero (count reported via clamped_count);
/// anything more negative is rejected.
ProbabilityTable apply_noise_model(const ProbabilityTable& p, const NoiseModelSpec& spec,
                                   int* clamped_count = nullptr);

/// N iid draws from p. Alias method when N > M/8, otherwise inverse-CDF
/// binary search. The single-threaded draw order is the canonical stream.
SampleSet draw_samples(const ProbabilityTable& p, std::int64_t n_samples, std::uint64_t seed,
                       bool keep_stream = false);

/// Cross-validation path: per-bit flips applied to already-drawn samples
/// (distributionally equal to the exact asymmetric channel with phi_g = 1).
SampleSet corrupt_samples_bitflip(const SampleSet& samples, double q1, double q2, std::uint64_t seed);

/// Parses `google:phi=0.4` | `symro:s=0.5,q=0.038` |
/// `asymro:phig=0.5,q1=0.055,q2=0.023` | `scale:1,0.9,...`.
NoiseModelSpec parse_noise_spec(const std::string& text);
std::string noise_spec_to_string(const NoiseModelSpec& spec);

/// Readout rate relevant to secondary-signal estimators (q for symro, the
/// average rate for asymro, 0 otherwise).
double readout_rate_of(const NoiseModelSpec& spec);

}  // namespace wxeb
