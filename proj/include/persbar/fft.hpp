#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace persbar {

/// In-place iterative radix-2 FFT, X_j = sum_k x_k exp(-2 pi i jk/N) (the
/// inverse flips the sign and does not scale). N must be a power of two.
/// Twiddles come from kernels::sincos_turns, so output bits do not depend on
/// the platform libm.
void fft(std::vector<std::complex<double>>& a, bool inverse = false);

bool is_power_of_two(std::size_t n) noexcept;

/// S_j = sum_{k=1}^{M-1} a_k sin(pi k j / M) for j = 0..M, with a_k = 0 for
/// k >= a.size()+1 (a[0] holds a_1). Uses an odd extension of length 2M when
/// M is a power of two, otherwise the direct sum.
std::vector<double> sine_sum(const std::vector<double>& a, std::size_t m);

/// The direct O(M * modes) sum with std::sin, for testing and odd sizes.
std::vector<double> sine_sum_direct(const std::vector<double>& a, std::size_t m);

}  // namespace persbar
