#pragma once

#include <span>
#include <vector>

#include "wxeb/types.hpp"

namespace wxeb {

/// In-place unnormalized Hadamard butterfly; fixed summation order
/// (sequential stages, ascending index within a stage).
void wht_butterfly(std::vector<double>& a);

/// Fourier--Walsh coefficients f_hat(S) = 2^-n sum_x f(x) (-1)^{popcount(S&x)}.
SpectralTable wht_forward(std::span<const double> f, int max_n = kDefaultMaxQubits);
SpectralTable wht_forward(const ProbabilityTable& f, int max_n = kDefaultMaxQubits);

/// Synthesis f(x) = sum_S coeffs[S] (-1)^{popcount(S&x)}.
std::vector<double> wht_inverse(const SpectralTable& c);

/// T_rho in the spectral domain: coeffs[S] *= rho^|S|. Requires rho in [0,1].
SpectralTable apply_noise_operator(const SpectralTable& c, double rho);

/// f*g(x) = 2^-n sum_z f(z) g(x xor z), computed spectrally.
std::vector<double> convolve(const ProbabilityTable& f, const ProbabilityTable& g);

/// gamma_k = sum_{|S|=k} coeffs[S]^2, k = 0..n.
std::vector<double> degree_energies(const SpectralTable& c);

}  // namespace wxeb
