#include "wxeb/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "opt_util.hpp"
#include "wxeb/walsh.hpp"

namespace wxeb {

namespace {

void check_pair(const ProbabilityTable& p, const SampleSet& samples) {
    if (p.n != samples.n) throw std::invalid_argument("estimator: P and samples disagree on n");
    if (p.size() != samples.counts.size()) throw std::invalid_argument("estimator: size mismatch");
}

double second_moment(const ProbabilityTable& p) {
    double w2 = 0.0;
    for (double w : p.values) w2 += w * w;
    return w2;
}

}  // namespace

double xeb_u(const ProbabilityTable& p, const SampleSet& samples) {
    check_pair(p, samples);
    if (samples.total < 1) throw std::invalid_argument("xeb_u: empty sample set");
    const double m = static_cast<double>(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (samples.counts[i]) acc += static_cast<double>(samples.counts[i]) * p.values[i];
    return m / static_cast<double>(samples.total) * acc - 1.0;
}

ScalarEstimate xeb_v(const ProbabilityTable& p, const SampleSet& samples) {
    check_pair(p, samples);
    const double m = static_cast<double>(p.size());
    const double denom = m * second_moment(p) - 1.0;
    if (denom <= 1e-12)
        return {0.0, EstimatorStatus::Degenerate, "uniform_p_zero_denominator"};
    return {xeb_u(p, samples) / denom, EstimatorStatus::Converged, ""};
}

ScalarEstimate mle_phi(const ProbabilityTable& p, const SampleSet& samples) {
    check_pair(p, samples);
    if (samples.total < 1) throw std::invalid_argument("mle_phi: empty sample set");
    const double inv_m = 1.0 / static_cast<double>(p.size());

    // score(phi) = sum_i n_i (w_i - 1/M) / (phi (w_i - 1/M) + 1/M), strictly
    // decreasing wherever defined
    std::vector<std::pair<double, double>> terms;  // (w_i - 1/M, n_i)
    double max_dev = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!samples.counts[i]) continue;
        const double d = p.values[i] - inv_m;
        terms.emplace_back(d, static_cast<double>(samples.counts[i]));
        max_dev = std::max(max_dev, std::abs(d));
    }
    if (max_dev < 1e-15 * inv_m)
        return {0.0, EstimatorStatus::Degenerate, "all_sampled_probabilities_uniform"};

    // shrink [-0.2, 1.2] to where every sampled likelihood term stays positive
    double lo = -0.2, hi = 1.2;
    for (const auto& [d, cnt] : terms) {
        (void)cnt;
        if (d > 0.0)
            lo = std::max(lo, -inv_m / d * (1.0 - 1e-12));
        else if (d < 0.0)
            hi = std::min(hi, -inv_m / d * (1.0 - 1e-12));
    }

    auto score = [&](double phi) {
        double acc = 0.0;
        for (const auto& [d, cnt] : terms) acc += cnt * d / (phi * d + inv_m);
        return acc;
    };

    if (score(hi) >= 0.0) return {1.0, EstimatorStatus::Clamped, "root_above_interval"};
    if (score(lo) <= 0.0) return {0.0, EstimatorStatus::Clamped, "root_below_interval"};
    for (int it = 0; it < 200 && hi - lo > 1e-8; ++it) {
        const double mid = 0.5 * (lo + hi);
        (score(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (root < 0.0) return {0.0, EstimatorStatus::Clamped, "root_negative"};
    if (root > 1.0) return {1.0, EstimatorStatus::Clamped, "root_above_one"};
    return {root, EstimatorStatus::Converged, ""};
}

double t_estimator(const SampleSet& samples) {
    if (samples.total < 2) throw std::invalid_argument("t_estimator: need N >= 2");
    const double m = static_cast<double>(samples.counts.size());
    const double n = static_cast<double>(samples.total);
    double sum_sq = 0.0;
    for (std::int64_t c : samples.counts) sum_sq += static_cast<double>(c) * static_cast<double>(c);
    const double n2n = n * n - n;
    return m * (m + 1.0) / (n2n * (m - 1.0)) * (sum_sq - n - n2n / m);
}

ScalarEstimate s_estimator(const ProbabilityTable& p, const SampleSet& samples) {
    check_pair(p, samples);
    if (samples.total < 2) throw std::invalid_argument("s_estimator: need N >= 2");
    const double m = static_cast<double>(p.size());
    const double denom_w = second_moment(p) - 1.0 / m;
    if (denom_w <= 1e-15)
        return {0.0, EstimatorStatus::Degenerate, "uniform_p_zero_denominator"};
    const double n = static_cast<double>(samples.total);
    double sum_sq = 0.0;
    for (std::int64_t c : samples.counts) sum_sq += static_cast<double>(c) * static_cast<double>(c);
    const double n2n = n * n - n;
    return {(sum_sq - n - n2n / m) / (n2n * denom_w), EstimatorStatus::Converged, ""};
}

double formula77(const std::vector<double>& one_gate_errors, const std::vector<double>& two_gate_errors,
                 const std::vector<double>& readout_errors) {
    double prod = 1.0;
    for (const auto* rates : {&one_gate_errors, &two_gate_errors, &readout_errors}) {
        for (double e : *rates) {
            if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("formula77: rate outside [0,1]");
            prod *= 1.0 - e;
        }
    }
    return prod;
}

SecondarySignal secondary_signal(const ProbabilityTable& p, double q) {
    p.validate();
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("secondary_signal: q must be in (0, 1/2)");
    const double no_flip = std::pow(1.0 - q, p.n);
    const double d = 1.0 - no_flip;

    SpectralTable c = wht_forward(p);
    std::vector<double> scale(static_cast<std::size_t>(p.n) + 1);
    double rho_pow = 1.0;
    for (int k = 0; k <= p.n; ++k) {
        scale[k] = (rho_pow - no_flip) / d;
        rho_pow *= 1.0 - 2.0 * q;
    }
    double coeff_sq = 0.0;
    for (std::size_t idx = 0; idx < c.coeffs.size(); ++idx) {
        c.coeffs[idx] *= scale[std::popcount(idx)];
        coeff_sq += c.coeffs[idx] * c.coeffs[idx];
    }

    SecondarySignal out;
    out.n = p.n;
    out.q = q;
    out.table = wht_inverse(c);
    out.norm2 = static_cast<double>(p.size()) * coeff_sq;  // Parseval
    return out;
}

ScalarEstimate phi_ro_corr(const ProbabilityTable& p, const SampleSet& samples, double q) {
    check_pair(p, samples);
    if (samples.total < 1) throw std::invalid_argument("phi_ro_corr: empty sample set");
    const SecondarySignal sig = secondary_signal(p, q);
    const double m = static_cast<double>(p.size());
    const double denom = m * sig.norm2 - 1.0;
    if (denom <= 1e-12)
        return {0.0, EstimatorStatus::Degenerate, "uniform_p_zero_denominator"};
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (samples.counts[i]) acc += static_cast<double>(samples.counts[i]) * sig.table[i];
    const double numer = m / static_cast<double>(samples.total) * acc - 1.0;
    return {numer / denom, EstimatorStatus::Converged, ""};
}

PhiRoMleResult phi_ro_mle(const ProbabilityTable& p, const SampleSet& samples, double q) {
    check_pair(p, samples);
    if (samples.total < 1) throw std::invalid_argument("phi_ro_mle: empty sample set");
    const SecondarySignal sig = secondary_signal(p, q);
    const double inv_m = 1.0 / static_cast<double>(p.size());

    struct Term {
        double dw, dv, cnt;
    };
    std::vector<Term> terms;
    double max_dev = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!samples.counts[i]) continue;
        const double dw = p.values[i] - inv_m;
        const double dv = sig.table[i] - inv_m;
        terms.push_back({dw, dv, static_cast<double>(samples.counts[i])});
        max_dev = std::max({max_dev, std::abs(dw), std::abs(dv)});
    }
    PhiRoMleResult out;
    if (max_dev < 1e-15 * inv_m) {
        out.status = EstimatorStatus::Degenerate;
        out.reason = "uniform_p_flat_likelihood";
        return out;
    }

    auto log_lik = [&](double phi, double phi_ro) {
        if (phi < 0.0 || phi_ro < 0.0 || phi + phi_ro > 1.0)
            return -std::numeric_limits<double>::infinity();
        double acc = 0.0;
        for (const Term& t : terms) {
            const double pi = phi * t.dw + phi_ro * t.dv + inv_m;
            if (pi <= 0.0) return -std::numeric_limits<double>::infinity();
            acc += t.cnt * std::log(pi);
        }
        return acc;
    };

    // coarse 101x101 grid over the simplex, then shrinking local refinement;
    // the grid stage guards against the optimizer missing the global maximum
    const auto best = detail::maximize_2d(log_lik, 0.0, 1.0, 0.0, 1.0, 100, 100, 5);
    if (!std::isfinite(best.value)) {
        out.status = EstimatorStatus::Degenerate;
        out.reason = "no_feasible_point";
        return out;
    }
    out.phi = best.a;
    out.phi_ro = best.b;
    out.boundary_active = best.a < 1e-6 || best.b < 1e-6 || best.a + best.b > 1.0 - 1e-6;
    out.status = EstimatorStatus::Converged;
    if (out.boundary_active) out.reason = "constraint_active";
    return out;
}

double alt_phi(double phi_ro, double q, int n) {
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("alt_phi: q must be in (0, 1/2)");
    if (n < 1) throw std::invalid_argument("alt_phi: n must be >= 1");
    return phi_ro / (std::pow(1.0 - q, -n) - 1.0);
}

double phi_ro_from_phi(double phi, double q, int n) {
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("phi_ro_from_phi: q must be in (0, 1/2)");
    if (n < 1) throw std::invalid_argument("phi_ro_from_phi: n must be >= 1");
    return phi * (std::pow(1.0 - q, -n) - 1.0);
}

double clamped_sqrt(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }

EstimatorReport estimate_all(const ProbabilityTable& p, const SampleSet& samples, double q) {
    EstimatorReport r;
    r.u = xeb_u(p, samples);
    r.v = xeb_v(p, samples);
    r.mle = mle_phi(p, samples);
    r.t_squared = t_estimator(samples);
    r.t = clamped_sqrt(r.t_squared);
    r.s_squared = s_estimator(p, samples);
    r.s = r.s_squared.status == EstimatorStatus::Converged ? clamped_sqrt(r.s_squared.value) : 0.0;
    if (q > 0.0 && q < 0.5) {
        r.phi_ro_corr = phi_ro_corr(p, samples, q);
        r.phi_ro_mle = phi_ro_mle(p, samples, q);
        const double phi_ro = r.phi_ro_mle.status == EstimatorStatus::Converged ? r.phi_ro_mle.phi_ro
                                                                                : r.phi_ro_corr.value;
        r.alt_phi = alt_phi(phi_ro, q, p.n);
    } else {
        r.phi_ro_corr = {0.0, EstimatorStatus::Degenerate, "no_readout_rate"};
        r.phi_ro_mle.status = EstimatorStatus::Degenerate;
        r.phi_ro_mle.reason = "no_readout_rate";
        r.alt_phi = 0.0;
    }
    return r;
}

}  // namespace wxeb
