#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wxeb {

// Dense tables: 512 MiB of doubles at the default cap.
inline constexpr int kDefaultMaxQubits = 26;

inline bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

/// A real function on {0,1}^n stored densely; index bit i (LSB-first) is
/// coordinate x_{i+1}. When `normalized` it is a probability distribution.
struct ProbabilityTable {
    int n = 0;
    std::vector<double> values;
    bool normalized = false;

    std::size_t size() const { return values.size(); }
    void validate() const;
};

/// Fourier--Walsh coefficients, indexed by subset mask S (bit i set <=> i+1 in S).
struct SpectralTable {
    int n = 0;
    std::vector<double> coeffs;

    std::size_t size() const { return coeffs.size(); }
};

/// Observed bitstrings as per-index counts, optionally with the ordered draw
/// stream (needed only for drift analysis).
struct SampleSet {
    int n = 0;
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;
    std::vector<std::uint32_t> stream;  // empty unless requested/loaded
    std::uint64_t seed = 0;

    bool has_stream() const { return static_cast<std::int64_t>(stream.size()) == total && total > 0; }
    void validate() const;
};

// Noise channel descriptions.
struct GoogleNoise {
    double phi = 1.0;  // fidelity
};
struct SymmetricReadout {
    double s = 1.0;  // probability of no gate errors (phi_g)
    double q = 0.0;  // per-bit flip rate, in [0, 1/2)
};
struct AsymmetricReadout {
    double phi_g = 1.0;
    double q1 = 0.0;  // P(1 read as 0)
    double q2 = 0.0;  // P(0 read as 1)
};
struct SpectralScaling {
    std::vector<double> alpha;  // length n+1, alpha[0] must be 1
};

using NoiseModelSpec = std::variant<GoogleNoise, SymmetricReadout, AsymmetricReadout, SpectralScaling>;

void validate_spec(const NoiseModelSpec& spec);

enum class EstimatorStatus { Converged, Degenerate, Clamped };

std::string to_string(EstimatorStatus s);

struct ScalarEstimate {
    double value = 0.0;
    EstimatorStatus status = EstimatorStatus::Converged;
    std::string reason;  // machine-readable, set when not Converged
};

struct PhiRoMleResult {
    double phi = 0.0;
    double phi_ro = 0.0;
    EstimatorStatus status = EstimatorStatus::Converged;
    std::string reason;
    bool boundary_active = false;
};

/// All scalar estimates for one (P, samples) pair.
struct EstimatorReport {
    double u = 0.0;
    ScalarEstimate v;
    ScalarEstimate mle;
    double t_squared = 0.0;
    double t = 0.0;  // max(0, sqrt(max(0, t_squared)))
    ScalarEstimate s_squared;
    double s = 0.0;
    ScalarEstimate phi_ro_corr;
    PhiRoMleResult phi_ro_mle;
    double alt_phi = 0.0;
};

/// Degree-resolved attenuation profile; index k-1 holds degree k.
struct DegreeProfile {
    int n = 0;
    std::vector<double> lambda;
    std::vector<double> stderr_jk;
    std::vector<bool> unstable;
};

enum class FitStatus { Converged, Boundary, Failed };

std::string to_string(FitStatus s);

struct SQFit {
    double s = 0.0;
    double q = 0.0;
    double log_likelihood = 0.0;
    FitStatus status = FitStatus::Failed;
    bool has_oracle_gap = false;
    double oracle_gap = 0.0;  // fit LL minus grid-oracle LL, when cross-checked
};

/// Conditional distribution of readout-corrupted outcomes (no gate errors,
/// at least one flip).
struct SecondarySignal {
    int n = 0;
    double q = 0.0;
    std::vector<double> table;
    double norm2 = 0.0;  // sum_x table[x]^2
};

}  // namespace wxeb
