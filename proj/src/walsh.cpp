#include "wxeb/walsh.hpp"

#include <bit>
#include <cmath>

namespace wxeb {

namespace {

int log2_of(std::size_t m) { return std::countr_zero(m); }

void check_length(std::size_t m, int max_n) {
    if (!is_power_of_two(m)) throw std::invalid_argument("wht: length must be a power of two");
    if (log2_of(m) > max_n) throw std::invalid_argument("wht: n exceeds configured cap");
}

}  // namespace

void wht_butterfly(std::vector<double>& a) {
    const std::size_t m = a.size();
    for (std::size_t h = 1; h < m; h <<= 1) {
        for (std::size_t i = 0; i < m; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double x = a[j];
                const double y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
    }
}

SpectralTable wht_forward(std::span<const double> f, int max_n) {
    check_length(f.size(), max_n);
    SpectralTable out;
    out.n = log2_of(f.size());
    out.coeffs.assign(f.begin(), f.end());
    wht_butterfly(out.coeffs);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (double& c : out.coeffs) c *= scale;
    return out;
}

SpectralTable wht_forward(const ProbabilityTable& f, int max_n) {
    return wht_forward(std::span<const double>(f.values), max_n);
}

std::vector<double> wht_inverse(const SpectralTable& c) {
    check_length(c.coeffs.size(), kDefaultMaxQubits + 4);
    std::vector<double> out(c.coeffs);
    wht_butterfly(out);
    return out;
}

SpectralTable apply_noise_operator(const SpectralTable& c, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("apply_noise_operator: rho must be in [0,1]");
    SpectralTable out;
    out.n = c.n;
    out.coeffs.resize(c.coeffs.size());
    std::vector<double> pow_rho(static_cast<std::size_t>(c.n) + 1);
    pow_rho[0] = 1.0;
    for (int k = 1; k <= c.n; ++k) pow_rho[k] = pow_rho[k - 1] * rho;
    for (std::size_t s = 0; s < c.coeffs.size(); ++s)
        out.coeffs[s] = c.coeffs[s] * pow_rho[std::popcount(s)];
    return out;
}

std::vector<double> convolve(const ProbabilityTable& f, const ProbabilityTable& g) {
    if (f.n != g.n) throw std::invalid_argument("convolve: mismatched n");
    SpectralTable fs = wht_forward(f);
    SpectralTable gs = wht_forward(g);
    for (std::size_t i = 0; i < fs.coeffs.size(); ++i) fs.coeffs[i] *= gs.coeffs[i];
    return wht_inverse(fs);
}

std::vector<double> degree_energies(const SpectralTable& c) {
    std::vector<double> gamma(static_cast<std::size_t>(c.n) + 1, 0.0);
    for (std::size_t s = 0; s < c.coeffs.size(); ++s)
        gamma[std::popcount(s)] += c.coeffs[s] * c.coeffs[s];
    return gamma;
}

}  // namespace wxeb
