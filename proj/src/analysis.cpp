#include "wxeb/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "wxeb/rng.hpp"
#include "wxeb/walsh.hpp"

namespace wxeb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kQMax = 0.495;  // top of the fit search range, inside [0, 1/2)

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

// sum_{|S|=k} a_hat(S) p_hat(S), k = 0..n
std::vector<double> degree_correlations(const SpectralTable& a, const SpectralTable& p) {
    std::vector<double> out(static_cast<std::size_t>(p.n) + 1, 0.0);
    for (std::size_t s = 0; s < p.coeffs.size(); ++s)
        out[std::popcount(s)] += a.coeffs[s] * p.coeffs[s];
    return out;
}

std::vector<double> to_double(const std::vector<std::int64_t>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
    return out;
}

// Partitions samples into `blocks` chronological chunks when the stream is
// present, otherwise by deterministic multinomial thinning of the counts.
std::vector<std::vector<std::int64_t>> block_counts(const SampleSet& samples, int blocks) {
    const std::size_t m = samples.counts.size();
    std::vector<std::vector<std::int64_t>> out(blocks, std::vector<std::int64_t>(m, 0));
    if (samples.has_stream()) {
        const std::int64_t n = samples.total;
        for (std::int64_t j = 0; j < n; ++j) {
            const int b = static_cast<int>(j * blocks / n);
            ++out[b][samples.stream[static_cast<std::size_t>(j)]];
        }
    } else {
        Xoshiro256 rng(derive_seed(samples.seed, RngPurpose::Jackknife));
        for (std::size_t i = 0; i < m; ++i)
            for (std::int64_t c = 0; c < samples.counts[i]; ++c)
                ++out[rng.below(static_cast<std::uint64_t>(blocks))][i];
    }
    return out;
}

}  // namespace

std::vector<double> lambda_from_counts(const ProbabilityTable& p, const std::vector<double>& count_fn,
                                       double n_samples) {
    const SpectralTable ps = wht_forward(p);
    const SpectralTable as = wht_forward(std::span<const double>(count_fn));
    const std::vector<double> gamma = degree_energies(ps);
    const std::vector<double> numer = degree_correlations(as, ps);
    std::vector<double> lambda(static_cast<std::size_t>(p.n), kNaN);
    for (int k = 1; k <= p.n; ++k)
        if (gamma[k] > 0.0) lambda[k - 1] = numer[k] / (n_samples * gamma[k]);
    return lambda;
}

DegreeProfile lambda_profile(const ProbabilityTable& p, const SampleSet& samples, int blocks) {
    if (p.n != samples.n) throw std::invalid_argument("lambda_profile: P and samples disagree on n");
    if (samples.total < 1) throw std::invalid_argument("lambda_profile: empty sample set");
    if (blocks < 2) throw std::invalid_argument("lambda_profile: need >= 2 jackknife blocks");
    blocks = static_cast<int>(std::min<std::int64_t>(blocks, samples.total));

    const SpectralTable ps = wht_forward(p);
    const std::vector<double> gamma = degree_energies(ps);
    const SpectralTable as = wht_forward(std::span<const double>(to_double(samples.counts)));
    const std::vector<double> numer = degree_correlations(as, ps);
    const double n_total = static_cast<double>(samples.total);

    DegreeProfile out;
    out.n = p.n;
    out.lambda.assign(static_cast<std::size_t>(p.n), kNaN);
    out.stderr_jk.assign(static_cast<std::size_t>(p.n), kInf);
    out.unstable.assign(static_cast<std::size_t>(p.n), true);

    for (int k = 1; k <= p.n; ++k)
        if (gamma[k] > 0.0) out.lambda[k - 1] = numer[k] / (n_total * gamma[k]);

    // leave-one-block-out jackknife; Lambda is linear in the count spectrum,
    // so per-block spectra are enough
    const auto per_block = block_counts(samples, blocks);
    std::vector<std::vector<double>> numer_b(blocks);
    std::vector<double> n_b(blocks);
    for (int b = 0; b < blocks; ++b) {
        const SpectralTable abs_ = wht_forward(std::span<const double>(to_double(per_block[b])));
        numer_b[b] = degree_correlations(abs_, ps);
        n_b[b] = static_cast<double>(std::accumulate(per_block[b].begin(), per_block[b].end(), std::int64_t{0}));
    }
    for (int k = 1; k <= p.n; ++k) {
        if (!(gamma[k] > 0.0)) continue;
        std::vector<double> loo(blocks);
        double mean = 0.0;
        bool ok = true;
        for (int b = 0; b < blocks; ++b) {
            const double n_out = n_total - n_b[b];
            if (n_out <= 0.0) {
                ok = false;
                break;
            }
            loo[b] = (numer[k] - numer_b[b][k]) / (n_out * gamma[k]);
            mean += loo[b];
        }
        if (!ok) continue;
        mean /= blocks;
        double ss = 0.0;
        for (int b = 0; b < blocks; ++b) ss += (loo[b] - mean) * (loo[b] - mean);
        out.stderr_jk[k - 1] = std::sqrt((blocks - 1.0) / blocks * ss);
        out.unstable[k - 1] = out.stderr_jk[k - 1] > 0.5 * std::abs(out.lambda[k - 1]) ||
                              binomial(p.n, k) < 8;
    }
    return out;
}

std::vector<double> xeb_degree_decomposition(const ProbabilityTable& p, const SampleSet& samples) {
    const SpectralTable ps = wht_forward(p);
    const SpectralTable as = wht_forward(std::span<const double>(to_double(samples.counts)));
    const std::vector<double> numer = degree_correlations(as, ps);
    const double m = static_cast<double>(p.size());
    const double n = static_cast<double>(samples.total);
    std::vector<double> u(static_cast<std::size_t>(p.n), 0.0);
    // u_k = Lambda_k * M^2 * gamma_k; the M^2 makes sum_k u_k equal xeb_u
    // (Parseval turns sum_S A_hat P_hat into 2^-n sum_x A P)
    for (int k = 1; k <= p.n; ++k) u[k - 1] = m * m * numer[k] / n;
    return u;
}

namespace {

// T_{1-2q} P as a dense table, from a precomputed spectrum of P
std::vector<double> smoothed_table(const SpectralTable& ps, double q) {
    SpectralTable c = ps;
    const double rho = 1.0 - 2.0 * q;
    std::vector<double> pw(static_cast<std::size_t>(ps.n) + 1);
    pw[0] = 1.0;
    for (int k = 1; k <= ps.n; ++k) pw[k] = pw[k - 1] * rho;
    for (std::size_t s = 0; s < c.coeffs.size(); ++s) c.coeffs[s] *= pw[std::popcount(s)];
    return wht_inverse(c);
}

double ll_given_table(const SampleSet& samples, const std::vector<double>& tq, double s) {
    const double uniform = 1.0 / static_cast<double>(tq.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < tq.size(); ++i) {
        if (!samples.counts[i]) continue;
        const double pi = s * tq[i] + (1.0 - s) * uniform;
        if (pi <= 0.0) return -kInf;
        acc += static_cast<double>(samples.counts[i]) * std::log(pi);
    }
    return acc;
}

}  // namespace

double sq_log_likelihood(const ProbabilityTable& p, const SampleSet& samples, double s, double q) {
    if (p.n != samples.n) throw std::invalid_argument("sq_log_likelihood: n mismatch");
    return ll_given_table(samples, smoothed_table(wht_forward(p), q), s);
}

SQFit fit_sq(const ProbabilityTable& p, const SampleSet& samples) {
    if (p.n != samples.n) throw std::invalid_argument("fit_sq: P and samples disagree on n");
    SQFit out;
    if (samples.total < 1) return out;  // Failed

    const SpectralTable ps = wht_forward(p);
    double best_ll = -kInf, best_s = 0.0, best_q = 0.0;

    // stage 1: coarse grid
    for (int jq = 0; jq <= 90; ++jq) {
        const double q = jq * 0.005;
        const std::vector<double> tq = smoothed_table(ps, q);
        for (int is = 0; is <= 50; ++is) {
            const double s = is * 0.02;
            const double ll = ll_given_table(samples, tq, s);
            if (ll > best_ll) {
                best_ll = ll;
                best_s = s;
                best_q = q;
            }
        }
    }
    if (!std::isfinite(best_ll)) return out;

    // stage 2: shrinking local grid around the incumbent
    double span_s = 0.02, span_q = 0.005;
    double last_gain = kInf;
    for (int round = 0; round < 6; ++round) {
        const double cs = best_s, cq = best_q, before = best_ll;
        for (int jq = -10; jq <= 10; ++jq) {
            const double q = std::clamp(cq + jq * span_q / 10.0, 0.0, kQMax);
            const std::vector<double> tq = smoothed_table(ps, q);
            for (int is = -10; is <= 10; ++is) {
                const double s = std::clamp(cs + is * span_s / 10.0, 0.0, 1.0);
                const double ll = ll_given_table(samples, tq, s);
                if (ll > best_ll) {
                    best_ll = ll;
                    best_s = s;
                    best_q = q;
                }
            }
        }
        span_s /= 10.0;
        span_q /= 10.0;
        last_gain = best_ll - before;
    }

    out.s = best_s;
    out.q = best_q;
    out.log_likelihood = best_ll;
    const bool at_boundary = best_s < 1e-7 || best_s > 1.0 - 1e-7 || best_q < 1e-7 || best_q > kQMax - 1e-7;
    out.status = at_boundary ? FitStatus::Boundary
                             : (last_gain < 1e-6 ? FitStatus::Converged : FitStatus::Failed);
    return out;
}

SQFit fit_sq_grid_oracle(const ProbabilityTable& p, const SampleSet& samples, int grid_s, int grid_q) {
    const SpectralTable ps = wht_forward(p);
    SQFit out;
    for (int jq = 0; jq <= grid_q; ++jq) {
        const double q = kQMax * jq / grid_q;
        const std::vector<double> tq = smoothed_table(ps, q);
        for (int is = 0; is <= grid_s; ++is) {
            const double s = static_cast<double>(is) / grid_s;
            const double ll = ll_given_table(samples, tq, s);
            if (out.status == FitStatus::Failed || ll > out.log_likelihood) {
                out.log_likelihood = ll;
                out.s = s;
                out.q = q;
                out.status = FitStatus::Converged;
            }
        }
    }
    return out;
}

std::vector<double> reference_curve(double s, double q, int n) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("reference_curve: s must be in [0,1]");
    if (!(q >= 0.0 && q < 0.5)) throw std::invalid_argument("reference_curve: q must be in [0,1/2)");
    if (n < 1) throw std::invalid_argument("reference_curve: n must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) out[k - 1] = s * std::pow(1.0 - 2.0 * q, k);
    return out;
}

namespace {

// per-degree l2 distance between the spectra of two half count functions
std::vector<double> half_distances(const std::vector<double>& a1, const std::vector<double>& a2, int n) {
    const SpectralTable s1 = wht_forward(std::span<const double>(a1));
    const SpectralTable s2 = wht_forward(std::span<const double>(a2));
    std::vector<double> d2(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t idx = 0; idx < s1.coeffs.size(); ++idx) {
        const double diff = s1.coeffs[idx] - s2.coeffs[idx];
        d2[std::popcount(idx)] += diff * diff;
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) out[k - 1] = std::sqrt(d2[k]);
    return out;
}

}  // namespace

DriftReport split_half_drift(const ProbabilityTable& p, const SampleSet& samples, int trials,
                             std::uint64_t seed) {
    if (p.n != samples.n) throw std::invalid_argument("split_half_drift: P and samples disagree on n");
    if (!samples.has_stream()) throw std::invalid_argument("split_half_drift: ordered stream required");
    if (samples.total % 2 != 0) throw std::invalid_argument("split_half_drift: N must be even");
    if (trials < 1) throw std::invalid_argument("split_half_drift: trials must be >= 1");

    const std::size_t m = samples.counts.size();
    const std::size_t half = static_cast<std::size_t>(samples.total) / 2;

    auto counts_of = [&](const std::vector<std::uint32_t>& stream) {
        std::vector<double> c1(m, 0.0), c2(m, 0.0);
        for (std::size_t j = 0; j < stream.size(); ++j) (j < half ? c1 : c2)[stream[j]] += 1.0;
        return std::pair{std::move(c1), std::move(c2)};
    };

    DriftReport out;
    out.n = p.n;
    out.trials = trials;
    {
        const auto [c1, c2] = counts_of(samples.stream);
        out.chrono_distance = half_distances(c1, c2, p.n);
    }

    std::vector<int> exceed(static_cast<std::size_t>(p.n), 0);
    std::vector<std::uint32_t> shuffled = samples.stream;
    for (int t = 0; t < trials; ++t) {
        Xoshiro256 rng(derive_seed(seed, RngPurpose::Splits, static_cast<std::uint64_t>(t)));
        for (std::size_t j = shuffled.size() - 1; j > 0; --j) {
            const std::size_t r = rng.below(j + 1);
            std::swap(shuffled[j], shuffled[r]);
        }
        const auto [c1, c2] = counts_of(shuffled);
        const std::vector<double> d = half_distances(c1, c2, p.n);
        for (int k = 0; k < p.n; ++k)
            if (d[k] >= out.chrono_distance[k]) ++exceed[k];
    }
    out.p_value.resize(static_cast<std::size_t>(p.n));
    for (int k = 0; k < p.n; ++k)
        out.p_value[k] = (1.0 + exceed[k]) / (trials + 1.0);
    return out;
}

CoefficientHistogram coefficient_histogram(const ProbabilityTable& p, int bins) {
    if (bins < 2) throw std::invalid_argument("coefficient_histogram: bins must be >= 2");
    const SpectralTable c = wht_forward(p);
    const double m = static_cast<double>(p.size());

    std::vector<double> vals;
    vals.reserve(c.coeffs.size() - 1);
    for (std::size_t s = 1; s < c.coeffs.size(); ++s) vals.push_back(m * c.coeffs[s]);

    CoefficientHistogram h;
    h.lo = *std::min_element(vals.begin(), vals.end());
    h.hi = *std::max_element(vals.begin(), vals.end());
    if (h.hi <= h.lo) {
        h.lo -= 0.5;
        h.hi += 0.5;
    }
    h.bin_counts.assign(static_cast<std::size_t>(bins), 0);
    const double width = (h.hi - h.lo) / bins;
    for (double v : vals) {
        int b = static_cast<int>((v - h.lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++h.bin_counts[static_cast<std::size_t>(b)];
    }

    const double count = static_cast<double>(vals.size());
    for (double v : vals) h.mean += v;
    h.mean /= count;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : vals) {
        const double d = v - h.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= count;
    m3 /= count;
    m4 /= count;
    h.variance = m2;
    h.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    h.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    return h;
}

}  // namespace wxeb
