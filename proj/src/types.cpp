#include "wxeb/types.hpp"

#include <cmath>
#include <numeric>

namespace wxeb {

void ProbabilityTable::validate() const {
    if (n < 1) throw std::invalid_argument("ProbabilityTable: n must be >= 1");
    if (values.size() != (std::size_t{1} << n))
        throw std::invalid_argument("ProbabilityTable: length must equal 2^n");
    if (normalized) {
        double sum = 0.0;
        for (double v : values) {
            if (v < 0.0) throw std::invalid_argument("ProbabilityTable: negative entry in normalized table");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("ProbabilityTable: normalized table does not sum to 1");
    }
}

void SampleSet::validate() const {
    if (counts.size() != (std::size_t{1} << n))
        throw std::invalid_argument("SampleSet: counts length must equal 2^n");
    std::int64_t sum = 0;
    for (std::int64_t c : counts) {
        if (c < 0) throw std::invalid_argument("SampleSet: negative count");
        sum += c;
    }
    if (sum != total) throw std::invalid_argument("SampleSet: counts do not sum to total");
    if (!stream.empty()) {
        if (static_cast<std::int64_t>(stream.size()) != total)
            throw std::invalid_argument("SampleSet: stream length does not match total");
        std::vector<std::int64_t> tally(counts.size(), 0);
        for (std::uint32_t x : stream) {
            if (x >= counts.size()) throw std::invalid_argument("SampleSet: stream index out of range");
            ++tally[x];
        }
        if (tally != counts) throw std::invalid_argument("SampleSet: stream multiset differs from counts");
    }
}

void validate_spec(const NoiseModelSpec& spec) {
    if (const auto* g = std::get_if<GoogleNoise>(&spec)) {
        if (!(g->phi >= 0.0 && g->phi <= 1.0)) throw std::invalid_argument("google: phi must be in [0,1]");
    } else if (const auto* sr = std::get_if<SymmetricReadout>(&spec)) {
        if (!(sr->s >= 0.0 && sr->s <= 1.0)) throw std::invalid_argument("symro: s must be in [0,1]");
        if (!(sr->q >= 0.0 && sr->q < 0.5)) throw std::invalid_argument("symro: q must be in [0,1/2)");
    } else if (const auto* ar = std::get_if<AsymmetricReadout>(&spec)) {
        if (!(ar->phi_g >= 0.0 && ar->phi_g <= 1.0)) throw std::invalid_argument("asymro: phig must be in [0,1]");
        if (!(ar->q1 >= 0.0 && ar->q1 < 1.0)) throw std::invalid_argument("asymro: q1 must be in [0,1)");
        if (!(ar->q2 >= 0.0 && ar->q2 < 1.0)) throw std::invalid_argument("asymro: q2 must be in [0,1)");
    } else if (const auto* sc = std::get_if<SpectralScaling>(&spec)) {
        if (sc->alpha.empty() || std::abs(sc->alpha[0] - 1.0) > 1e-12)
            throw std::invalid_argument("scale: alpha_0 must equal 1");
    }
}

std::string to_string(EstimatorStatus s) {
    switch (s) {
        case EstimatorStatus::Converged: return "converged";
        case EstimatorStatus::Degenerate: return "degenerate";
        case EstimatorStatus::Clamped: return "clamped";
    }
    return "unknown";
}

std::string to_string(FitStatus s) {
    switch (s) {
        case FitStatus::Converged: return "converged";
        case FitStatus::Boundary: return "boundary";
        case FitStatus::Failed: return "failed";
    }
    return "unknown";
}

}  // namespace wxeb
