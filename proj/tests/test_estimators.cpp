#include <doctest.h>

#include <bit>
#include <cmath>
#include <numeric>

#include "wxeb/estimators.hpp"
#include "wxeb/noise.hpp"
#include "wxeb/walsh.hpp"

using namespace wxeb;

namespace {

SampleSet counts_of(int n, std::vector<std::int64_t> counts) {
    SampleSet s;
    s.n = n;
    s.counts = std::move(counts);
    s.total = std::accumulate(s.counts.begin(), s.counts.end(), std::int64_t{0});
    return s;
}

ProbabilityTable uniform_table(int n) {
    const std::size_t m = std::size_t{1} << n;
    return ProbabilityTable{n, std::vector<double>(m, 1.0 / static_cast<double>(m)), true};
}

ProbabilityTable delta_table(int n, std::size_t at) {
    const std::size_t m = std::size_t{1} << n;
    ProbabilityTable p{n, std::vector<double>(m, 0.0), true};
    p.values[at] = 1.0;
    return p;
}

// N^ro straight from the definition: apply the exact symmetric bit-flip
// channel, subtract the no-flip part, divide by the flip mass
std::vector<double> secondary_brute(const ProbabilityTable& p, double q) {
    const std::size_t m = p.size();
    std::vector<double> t(m, 0.0);
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) {
            const int flips = std::popcount(x ^ y);
            t[x] += std::pow(q, flips) * std::pow(1.0 - q, p.n - flips) * p.values[y];
        }
    const double keep = std::pow(1.0 - q, p.n);
    std::vector<double> out(m);
    for (std::size_t x = 0; x < m; ++x) out[x] = (t[x] - keep * p.values[x]) / (1.0 - keep);
    return out;
}

double score(const ProbabilityTable& p, const SampleSet& s, double phi) {
    const double m = static_cast<double>(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (s.counts[i] == 0) continue;
        const double w = p.values[i];
        acc += static_cast<double>(s.counts[i]) * (w - 1.0 / m) / (phi * w + (1.0 - phi) / m);
    }
    return acc;
}

}  // namespace

TEST_CASE("U is exactly zero for one-sample-per-bitstring counts") {
    const auto p = generate_porter_thomas(6, 3);
    const auto s = counts_of(6, std::vector<std::int64_t>(64, 1));
    CHECK(std::abs(xeb_u(p, s)) < 1e-12);
}

TEST_CASE("U and V hit the delta-distribution closed form") {
    const int n = 5;
    const auto p = delta_table(n, 7);
    auto counts = std::vector<std::int64_t>(32, 0);
    counts[7] = 1000;
    const auto s = counts_of(n, std::move(counts));
    CHECK(xeb_u(p, s) == doctest::Approx(31.0).epsilon(1e-15));
    const auto v = xeb_v(p, s);
    CHECK(v.status == EstimatorStatus::Converged);
    CHECK(v.value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("V and MLE are degenerate when P is uniform") {
    const auto p = uniform_table(6);
    const auto s = counts_of(6, std::vector<std::int64_t>(64, 10));
    CHECK(xeb_v(p, s).status == EstimatorStatus::Degenerate);
    CHECK(mle_phi(p, s).status == EstimatorStatus::Degenerate);
    CHECK(s_estimator(p, s).status == EstimatorStatus::Degenerate);
}

TEST_CASE("MLE recovers phi=1 on noiseless samples") {
    const auto p = generate_porter_thomas(10, 44);
    const auto s = draw_samples(p, 200000, 9);
    const auto est = mle_phi(p, s);
    CHECK(est.value > 0.97);
    CHECK(est.value <= 1.0);
}

TEST_CASE("MLE sits at the zero of a strictly decreasing score") {
    const auto p = generate_porter_thomas(9, 45);
    const auto noisy = apply_noise_model(p, GoogleNoise{0.4});
    const auto s = draw_samples(noisy, 100000, 10);
    const auto est = mle_phi(p, s);
    CHECK(est.status == EstimatorStatus::Converged);
    CHECK(std::abs(score(p, s, est.value)) < std::abs(score(p, s, est.value + 1e-4)));

    double prev = score(p, s, 0.0);
    for (int i = 1; i <= 100; ++i) {
        const double cur = score(p, s, i / 100.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("T^2 closed forms at the extremes") {
    const int n = 4;
    const double m = 16.0;

    SUBCASE("all samples distinct") {
        const auto s = counts_of(n, std::vector<std::int64_t>(16, 1));
        CHECK(t_estimator(s) == doctest::Approx(-(m + 1.0) / (m - 1.0)).epsilon(1e-12));
    }

    SUBCASE("all samples identical") {
        auto counts = std::vector<std::int64_t>(16, 0);
        counts[3] = 500;
        const auto s = counts_of(n, std::move(counts));
        CHECK(t_estimator(s) == doctest::Approx(m + 1.0).epsilon(1e-12));
    }
}

TEST_CASE("T^2 / S^2 ratio matches the normalization algebraically") {
    const auto p = generate_porter_thomas(8, 46);
    const auto s = draw_samples(p, 50000, 11);
    const double m = 256.0;
    double w2 = 0.0;
    for (double v : p.values) w2 += v * v;
    w2 /= m;
    const double t2 = t_estimator(s);
    const auto s2 = s_estimator(p, s);
    CHECK(s2.status == EstimatorStatus::Converged);
    const double expected_ratio = m * (m + 1.0) * (w2 - 1.0 / (m * m)) / ((m - 1.0) / m);
    CHECK(t2 / s2.value == doctest::Approx(expected_ratio).epsilon(1e-9));
}

TEST_CASE("formula77 multiplies error complements") {
    CHECK(formula77({}, {}, {}) == 1.0);
    CHECK(formula77({0.1}, {0.2}, {0.3}) == doctest::Approx(0.9 * 0.8 * 0.7).epsilon(1e-15));
    const std::vector<double> g1(100, 0.0016), g2(50, 0.0062), ro(12, 0.038);
    const double expected = std::pow(0.9984, 100) * std::pow(0.9938, 50) * std::pow(0.962, 12);
    CHECK(formula77(g1, g2, ro) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("secondary signal closed forms") {
    SUBCASE("uniform input stays uniform") {
        const auto sig = secondary_signal(uniform_table(5), 0.04);
        for (double v : sig.table) CHECK(v == doctest::Approx(1.0 / 32.0).epsilon(1e-12));
    }

    SUBCASE("n=1: exactly the opposite-bit distribution") {
        ProbabilityTable p{1, {0.2, 0.8}, true};
        const auto sig = secondary_signal(p, 0.038);
        CHECK(sig.table[0] == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(sig.table[1] == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(sig.norm2 == doctest::Approx(0.64 + 0.04).epsilon(1e-12));
    }
}

TEST_CASE("secondary signal matches the brute-force channel decomposition") {
    for (int n : {3, 5, 6}) {
        const auto p = generate_porter_thomas(n, 200 + static_cast<std::uint64_t>(n));
        const double q = 0.06;
        const auto fast = secondary_signal(p, q);
        const auto slow = secondary_brute(p, q);
        double sum = 0.0, norm2 = 0.0;
        for (std::size_t i = 0; i < slow.size(); ++i) {
            CHECK(std::abs(fast.table[i] - slow[i]) < 1e-12);
            sum += slow[i];
            norm2 += slow[i] * slow[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(fast.norm2 == doctest::Approx(norm2).epsilon(1e-10));
    }
}

TEST_CASE("secondary signal is nearly orthogonal to P for Porter-Thomas tables") {
    const auto p = generate_porter_thomas(12, 47);
    const auto sig = secondary_signal(p, 0.038);
    double dot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) dot += p.values[i] * sig.table[i];
    CHECK(std::abs(4096.0 * dot - 1.0) < 0.05);
}

TEST_CASE("phi_ro_corr matches its definition on fixed counts") {
    const int n = 6;
    const auto p = generate_porter_thomas(n, 48);
    const auto s = draw_samples(apply_noise_model(p, SymmetricReadout{0.6, 0.05}), 20000, 12);
    const double q = 0.05;
    const auto sig = secondary_signal(p, q);
    const double m = 64.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.counts.size(); ++i) acc += static_cast<double>(s.counts[i]) * sig.table[i];
    const double expected = ((m / static_cast<double>(s.total)) * acc - 1.0) / (m * sig.norm2 - 1.0);
    const auto est = phi_ro_corr(p, s, q);
    CHECK(est.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("alt-phi round trip and anchor value") {
    for (double phi : {0.1, 0.3137, 0.9}) {
        const double back = alt_phi(phi_ro_from_phi(phi, 0.038, 12), 0.038, 12);
        CHECK(back == doctest::Approx(phi).epsilon(1e-12));
    }
    const double anchor = alt_phi(0.196, 0.038, 12);
    CHECK(anchor > 0.329);
    CHECK(anchor < 0.333);
}

TEST_CASE("joint readout MLE splits phi_g into phi + phi_ro") {
    const int n = 10;
    const double s_true = 0.5, q = 0.038;
    const auto p = generate_porter_thomas(n, 49);
    const auto noisy = apply_noise_model(p, SymmetricReadout{s_true, q});
    const auto samples = draw_samples(noisy, 400000, 13);
    const auto fit = phi_ro_mle(p, samples, q);
    CHECK(fit.status == EstimatorStatus::Converged);
    const double keep = std::pow(1.0 - q, n);
    CHECK(fit.phi == doctest::Approx(s_true * keep).epsilon(0.1));
    CHECK(fit.phi_ro == doctest::Approx(s_true * (1.0 - keep)).epsilon(0.25));
    CHECK(fit.phi + fit.phi_ro == doctest::Approx(s_true).epsilon(0.1));
}

TEST_CASE("estimate_all is consistent with the individual estimators") {
    const auto p = generate_porter_thomas(8, 50);
    const auto samples = draw_samples(apply_noise_model(p, GoogleNoise{0.4}), 50000, 14);
    const auto r = estimate_all(p, samples, 0.038);
    CHECK(r.u == xeb_u(p, samples));
    CHECK(r.v.value == xeb_v(p, samples).value);
    CHECK(r.mle.value == mle_phi(p, samples).value);
    CHECK(r.t_squared == t_estimator(samples));
    CHECK(r.t == clamped_sqrt(r.t_squared));
}

TEST_CASE("secondary family is degenerate when q is out of range") {
    const auto p = generate_porter_thomas(6, 51);
    const auto samples = draw_samples(p, 1000, 15);
    const auto r = estimate_all(p, samples, 0.0);
    CHECK(r.phi_ro_corr.status == EstimatorStatus::Degenerate);
    CHECK(r.phi_ro_mle.status == EstimatorStatus::Degenerate);
}

TEST_CASE("clamped_sqrt") {
    CHECK(clamped_sqrt(-0.5) == 0.0);
    CHECK(clamped_sqrt(0.25) == 0.5);
}
