#include <doctest.h>

#include <bit>
#include <cmath>
#include <numeric>

#include "wxeb/noise.hpp"
#include "wxeb/rng.hpp"
#include "wxeb/walsh.hpp"

using namespace wxeb;

namespace {

std::vector<double> random_table(int n, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    std::vector<double> f(std::size_t{1} << n);
    for (double& v : f) v = rng.uniform01() * 2.0 - 1.0;
    return f;
}

// O(M^2) convolution straight from the definition
std::vector<double> convolve_brute(const std::vector<double>& f, const std::vector<double>& g) {
    const std::size_t m = f.size();
    std::vector<double> out(m, 0.0);
    for (std::size_t x = 0; x < m; ++x) {
        double acc = 0.0;
        for (std::size_t z = 0; z < m; ++z) acc += f[z] * g[x ^ z];
        out[x] = acc / static_cast<double>(m);
    }
    return out;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("forward transform matches the n=1 closed form") {
    const auto c = wht_forward(std::vector<double>{3.0, 1.0});
    CHECK(c.coeffs[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.coeffs[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("constant function has only the empty coefficient") {
    const auto c = wht_forward(std::vector<double>{0.25, 0.25, 0.25, 0.25});
    CHECK(c.coeffs[0] == 0.25);
    for (int s = 1; s < 4; ++s) CHECK(c.coeffs[s] == 0.0);
}

TEST_CASE("delta at zero spreads evenly over all coefficients") {
    const auto c = wht_forward(std::vector<double>{1.0, 0.0, 0.0, 0.0});
    for (int s = 0; s < 4; ++s) CHECK(c.coeffs[s] == 0.25);
}

TEST_CASE("inverse recovers the stated examples") {
    SpectralTable c{1, {2.0, 1.0}};
    const auto f = wht_inverse(c);
    CHECK(f[0] == 3.0);
    CHECK(f[1] == 1.0);

    SpectralTable u{2, {0.25, 0.0, 0.0, 0.0}};
    for (double v : wht_inverse(u)) CHECK(v == 0.25);
}

TEST_CASE("round trip and Parseval on random tables") {
    for (int n = 1; n <= 10; ++n) {
        const auto f = random_table(n, 100 + static_cast<std::uint64_t>(n));
        const auto c = wht_forward(f);
        const auto back = wht_inverse(c);

        double max_err = 0.0, norm_f = 0.0, coeff_sq = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            max_err = std::max(max_err, std::abs(back[i] - f[i]));
            norm_f += f[i] * f[i];
            coeff_sq += c.coeffs[i] * c.coeffs[i];
        }
        CHECK(max_err < 1e-12);
        CHECK(std::abs(coeff_sq - norm_f / static_cast<double>(f.size())) < 1e-12 * norm_f);
    }
}

TEST_CASE("rejects bad lengths and out-of-cap n") {
    CHECK_THROWS_AS(wht_forward(std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(wht_forward(std::vector<double>(8, 0.0), /*max_n=*/2), std::invalid_argument);
}

TEST_CASE("determinism: identical inputs give bit-identical outputs") {
    const auto f = random_table(10, 42);
    CHECK(wht_forward(f).coeffs == wht_forward(f).coeffs);
}

TEST_CASE("noise operator scales by rho^|S| and forms a semigroup") {
    const auto c = wht_forward(random_table(6, 5));

    SUBCASE("rho=1 is the identity") { CHECK(apply_noise_operator(c, 1.0).coeffs == c.coeffs); }

    SUBCASE("rho=0 keeps only the mean") {
        const auto z = apply_noise_operator(c, 0.0);
        CHECK(z.coeffs[0] == c.coeffs[0]);
        for (std::size_t s = 1; s < z.coeffs.size(); ++s) CHECK(z.coeffs[s] == 0.0);
    }

    SUBCASE("readout rate 0.038 example") {
        const auto g = wht_forward(std::vector<double>{3.0, 1.0});
        const auto t = apply_noise_operator(g, 1.0 - 2.0 * 0.038);
        CHECK(t.coeffs[0] == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(t.coeffs[1] == doctest::Approx(0.924).epsilon(1e-15));
    }

    SUBCASE("semigroup law") {
        const double r1 = 0.83, r2 = 0.4;
        const auto lhs = apply_noise_operator(apply_noise_operator(c, r1), r2);
        const auto rhs = apply_noise_operator(c, r1 * r2);
        for (std::size_t s = 0; s < lhs.coeffs.size(); ++s)
            CHECK(std::abs(lhs.coeffs[s] - rhs.coeffs[s]) <= 1e-15 * std::abs(rhs.coeffs[s]) + 1e-18);
    }

    SUBCASE("rho outside [0,1] rejected") {
        CHECK_THROWS_AS(apply_noise_operator(c, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(apply_noise_operator(c, 1.1), std::invalid_argument);
    }
}

TEST_CASE("noise operator preserves probability") {
    const auto p = generate_porter_thomas(8, 17);
    const auto t = wht_inverse(apply_noise_operator(wht_forward(p), 0.7));
    double sum = 0.0;
    for (double v : t) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convolution matches the brute-force definition") {
    for (int n : {3, 5, 8}) {
        ProbabilityTable f{n, random_table(n, 70 + static_cast<std::uint64_t>(n)), false};
        ProbabilityTable g{n, random_table(n, 90 + static_cast<std::uint64_t>(n)), false};
        const auto fast = convolve(f, g);
        const auto slow = convolve_brute(f.values, g.values);
        for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) < 1e-12);
    }
}

TEST_CASE("spectral identity element for convolution") {
    const auto p = generate_porter_thomas(5, 3);
    ProbabilityTable e{5, std::vector<double>(32, 0.0), false};
    e.values[0] = 32.0;  // all spectral coefficients equal 1
    const auto out = convolve(p, e);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(p.values[i]).epsilon(1e-12));
}

TEST_CASE("convolving with uniform keeps only the mean term") {
    const auto g = generate_porter_thomas(4, 11);
    ProbabilityTable u{4, std::vector<double>(16, 1.0 / 16.0), true};
    for (double v : convolve(u, g)) CHECK(v == doctest::Approx(1.0 / 256.0).epsilon(1e-12));
}

TEST_CASE("convolution requires matching n") {
    ProbabilityTable f{2, {0.25, 0.25, 0.25, 0.25}, true};
    ProbabilityTable g{1, {0.5, 0.5}, true};
    CHECK_THROWS_AS(convolve(f, g), std::invalid_argument);
}

TEST_CASE("degree energies: uniform and delta closed forms") {
    ProbabilityTable u{3, std::vector<double>(8, 0.125), true};
    const auto gu = degree_energies(wht_forward(u));
    CHECK(gu[0] == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
    for (int k = 1; k <= 3; ++k) CHECK(gu[k] == 0.0);

    ProbabilityTable d{2, {1.0, 0.0, 0.0, 0.0}, true};
    const auto gd = degree_energies(wht_forward(d));
    for (int k = 0; k <= 2; ++k) CHECK(gd[k] == doctest::Approx(binom(2, k) / 16.0).epsilon(1e-15));
}

TEST_CASE("degree energies sum to the Parseval total") {
    const auto f = random_table(9, 123);
    const auto c = wht_forward(f);
    const auto gamma = degree_energies(c);
    const double total = std::accumulate(gamma.begin(), gamma.end(), 0.0);
    double norm = 0.0;
    for (double v : f) norm += v * v;
    CHECK(total == doctest::Approx(norm / static_cast<double>(f.size())).epsilon(1e-12));
}

TEST_CASE("Porter-Thomas degree energies are flat in gamma_k / binom(n,k)") {
    const int n = 12, seeds = 10;
    std::vector<std::vector<double>> ratios(static_cast<std::size_t>(n));
    for (int s = 0; s < seeds; ++s) {
        const auto gamma = degree_energies(wht_forward(generate_porter_thomas(n, 1000 + s)));
        for (int k = 1; k <= n; ++k) ratios[k - 1].push_back(gamma[k] / binom(n, k));
    }
    // grand mean over middle degrees as the reference level
    double grand = 0.0;
    int grand_n = 0;
    for (int k = 2; k <= n - 1; ++k) {
        for (double r : ratios[k - 1]) grand += r;
        grand_n += seeds;
    }
    grand /= grand_n;
    for (int k = 1; k <= n; ++k) {
        double mean = 0.0;
        for (double r : ratios[k - 1]) mean += r;
        mean /= seeds;
        double var = 0.0;
        for (double r : ratios[k - 1]) var += (r - mean) * (r - mean);
        const double se = std::sqrt(var / (seeds - 1.0) / seeds) + 1e-18;
        CHECK(std::abs(mean - grand) < 3.0 * se + 0.2 * grand);
    }
}
