#include "wxeb/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "wxeb/rng.hpp"
#include "wxeb/walsh.hpp"

namespace wxeb {

namespace {

// Clamps tiny negative roundoff; throws below -1e-12.
int clamp_negatives(std::vector<double>& v, const char* what) {
    int clamped = 0;
    for (double& x : v) {
        if (x < 0.0) {
            if (x < -1e-12) throw std::invalid_argument(std::string(what) + ": negative entry, not a distribution");
            x = 0.0;
            ++clamped;
        }
    }
    return clamped;
}

}  // namespace

ProbabilityTable generate_porter_thomas(int n, std::uint64_t seed, int max_n) {
    if (n < 1 || n > max_n) throw std::invalid_argument("generate_porter_thomas: n out of range");
    const std::size_t m = std::size_t{1} << n;
    Xoshiro256 rng(derive_seed(seed, RngPurpose::TableGen));
    ProbabilityTable p;
    p.n = n;
    p.values.resize(m);
    double sum = 0.0;
    for (double& v : p.values) {
        // inverse-CDF Exp(1); uniform01 is in [0,1) so log1p argument stays negative
        v = -std::log1p(-rng.uniform01());
        sum += v;
    }
    const double inv = 1.0 / sum;
    for (double& v : p.values) v *= inv;
    p.normalized = true;
    return p;
}

ProbabilityTable apply_noise_model(const ProbabilityTable& p, const NoiseModelSpec& spec, int* clamped_count) {
    p.validate();
    if (!p.normalized) throw std::invalid_argument("apply_noise_model: input must be normalized");
    validate_spec(spec);
    const std::size_t m = p.size();
    const double uniform = 1.0 / static_cast<double>(m);

    ProbabilityTable out;
    out.n = p.n;
    out.normalized = true;
    int clamped = 0;

    if (const auto* g = std::get_if<GoogleNoise>(&spec)) {
        out.values.resize(m);
        for (std::size_t i = 0; i < m; ++i) out.values[i] = g->phi * p.values[i] + (1.0 - g->phi) * uniform;
    } else if (const auto* sr = std::get_if<SymmetricReadout>(&spec)) {
        SpectralTable c = wht_forward(p);
        const double rho = 1.0 - 2.0 * sr->q;
        std::vector<double> scale(static_cast<std::size_t>(p.n) + 1);
        scale[0] = 1.0;
        for (int k = 1; k <= p.n; ++k) scale[k] = scale[k - 1] * rho;
        for (int k = 1; k <= p.n; ++k) scale[k] *= sr->s;
        for (std::size_t idx = 0; idx < m; ++idx) c.coeffs[idx] *= scale[std::popcount(idx)];
        out.values = wht_inverse(c);
        clamped = clamp_negatives(out.values, "symro");
    } else if (const auto* ar = std::get_if<AsymmetricReadout>(&spec)) {
        out.values = p.values;
        // one tensor-product pass per bit: true 1 flips w.p. q1, true 0 w.p. q2
        for (int b = 0; b < p.n; ++b) {
            const std::size_t bit = std::size_t{1} << b;
            for (std::size_t i = 0; i < m; ++i) {
                if (i & bit) continue;
                const double v0 = out.values[i];
                const double v1 = out.values[i | bit];
                out.values[i] = (1.0 - ar->q2) * v0 + ar->q1 * v1;
                out.values[i | bit] = ar->q2 * v0 + (1.0 - ar->q1) * v1;
            }
        }
        for (std::size_t i = 0; i < m; ++i)
            out.values[i] = ar->phi_g * out.values[i] + (1.0 - ar->phi_g) * uniform;
    } else {
        const auto& sc = std::get<SpectralScaling>(spec);
        if (sc.alpha.size() != static_cast<std::size_t>(p.n) + 1)
            throw std::invalid_argument("scale: alpha must have length n+1");
        SpectralTable c = wht_forward(p);
        for (std::size_t idx = 0; idx < m; ++idx) c.coeffs[idx] *= sc.alpha[std::popcount(idx)];
        out.values = wht_inverse(c);
        clamped = clamp_negatives(out.values, "scale");
    }

    if (clamped_count) *clamped_count = clamped;
    return out;
}

namespace {

// Vose alias table, built in ascending index order for determinism.
struct AliasTable {
    std::vector<double> prob;
    std::vector<std::uint32_t> alias;

    explicit AliasTable(const std::vector<double>& weights) {
        const std::size_t m = weights.size();
        prob.resize(m);
        alias.resize(m);
        std::vector<double> scaled(m);
        for (std::size_t i = 0; i < m; ++i) scaled[i] = weights[i] * static_cast<double>(m);
        std::vector<std::uint32_t> small, large;
        small.reserve(m);
        large.reserve(m);
        for (std::size_t i = 0; i < m; ++i)
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        while (!small.empty() && !large.empty()) {
            const std::uint32_t s = small.back();
            small.pop_back();
            const std::uint32_t l = large.back();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::uint32_t l : large) {
            prob[l] = 1.0;
            alias[l] = l;
        }
        for (std::uint32_t s : small) {
            prob[s] = 1.0;
            alias[s] = s;
        }
    }

    std::uint32_t draw(Xoshiro256& rng, std::size_t m) const {
        const std::uint32_t i = static_cast<std::uint32_t>(rng.below(m));
        return rng.uniform01() < prob[i] ? i : alias[i];
    }
};

}  // namespace

SampleSet draw_samples(const ProbabilityTable& p, std::int64_t n_samples, std::uint64_t seed, bool keep_stream) {
    p.validate();
    if (!p.normalized) throw std::invalid_argument("draw_samples: input must be normalized");
    if (n_samples < 0) throw std::invalid_argument("draw_samples: N must be >= 0");

    const std::size_t m = p.size();
    SampleSet out;
    out.n = p.n;
    out.counts.assign(m, 0);
    out.total = n_samples;
    out.seed = seed;
    if (keep_stream) out.stream.reserve(static_cast<std::size_t>(n_samples));

    Xoshiro256 rng(derive_seed(seed, RngPurpose::Sampling));
    auto record = [&](std::uint32_t x) {
        ++out.counts[x];
        if (keep_stream) out.stream.push_back(x);
    };

    if (n_samples > static_cast<std::int64_t>(m / 8)) {
        AliasTable table(p.values);
        for (std::int64_t j = 0; j < n_samples; ++j) record(table.draw(rng, m));
    } else {
        std::vector<double> cdf(m);
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            acc += p.values[i];
            cdf[i] = acc;
        }
        cdf[m - 1] = 1.0;
        for (std::int64_t j = 0; j < n_samples; ++j) {
            const double u = rng.uniform01();
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            record(static_cast<std::uint32_t>(it - cdf.begin()));
        }
    }
    return out;
}

SampleSet corrupt_samples_bitflip(const SampleSet& samples, double q1, double q2, std::uint64_t seed) {
    if (!samples.has_stream()) throw std::invalid_argument("corrupt_samples_bitflip: ordered stream required");
    Xoshiro256 rng(derive_seed(seed, RngPurpose::Sampling, 1));
    SampleSet out;
    out.n = samples.n;
    out.counts.assign(samples.counts.size(), 0);
    out.total = samples.total;
    out.seed = seed;
    out.stream.reserve(samples.stream.size());
    for (std::uint32_t x : samples.stream) {
        std::uint32_t y = x;
        for (int b = 0; b < samples.n; ++b) {
            const bool is_one = (x >> b) & 1u;
            const double q = is_one ? q1 : q2;
            if (rng.uniform01() < q) y ^= (1u << b);
        }
        ++out.counts[y];
        out.stream.push_back(y);
    }
    return out;
}

namespace {

double parse_value(const std::string& kv, const std::string& key) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || kv.substr(0, eq) != key)
        throw std::invalid_argument("noise spec: expected " + key + "=<value>, got '" + kv + "'");
    return std::stod(kv.substr(eq + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

}  // namespace

NoiseModelSpec parse_noise_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("noise spec: expected '<kind>:<params>'");
    const std::string kind = text.substr(0, colon);
    const auto parts = split(text.substr(colon + 1), ',');

    NoiseModelSpec spec;
    if (kind == "google") {
        if (parts.size() != 1) throw std::invalid_argument("google spec: expected phi=<v>");
        spec = GoogleNoise{parse_value(parts[0], "phi")};
    } else if (kind == "symro") {
        if (parts.size() != 2) throw std::invalid_argument("symro spec: expected s=<v>,q=<v>");
        spec = SymmetricReadout{parse_value(parts[0], "s"), parse_value(parts[1], "q")};
    } else if (kind == "asymro") {
        if (parts.size() != 3) throw std::invalid_argument("asymro spec: expected phig=<v>,q1=<v>,q2=<v>");
        spec = AsymmetricReadout{parse_value(parts[0], "phig"), parse_value(parts[1], "q1"),
                                 parse_value(parts[2], "q2")};
    } else if (kind == "scale") {
        SpectralScaling sc;
        for (const auto& part : parts) sc.alpha.push_back(std::stod(part));
        spec = sc;
    } else {
        throw std::invalid_argument("noise spec: unknown kind '" + kind + "'");
    }
    validate_spec(spec);
    return spec;
}

std::string noise_spec_to_string(const NoiseModelSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* g = std::get_if<GoogleNoise>(&spec)) {
        os << "google:phi=" << g->phi;
    } else if (const auto* sr = std::get_if<SymmetricReadout>(&spec)) {
        os << "symro:s=" << sr->s << ",q=" << sr->q;
    } else if (const auto* ar = std::get_if<AsymmetricReadout>(&spec)) {
        os << "asymro:phig=" << ar->phi_g << ",q1=" << ar->q1 << ",q2=" << ar->q2;
    } else {
        const auto& sc = std::get<SpectralScaling>(spec);
        os << "scale:";
        for (std::size_t i = 0; i < sc.alpha.size(); ++i) os << (i ? "," : "") << sc.alpha[i];
    }
    return os.str();
}

double readout_rate_of(const NoiseModelSpec& spec) {
    if (const auto* sr = std::get_if<SymmetricReadout>(&spec)) return sr->q;
    if (const auto* ar = std::get_if<AsymmetricReadout>(&spec)) return 0.5 * (ar->q1 + ar->q2);
    return 0.0;
}

}  // namespace wxeb
