#include "persbar/fft.hpp"

#include <cmath>
#include <numbers>

#include "persbar/error.hpp"
#include "persbar/kernels.hpp"

namespace persbar {

bool is_power_of_two(std::size_t n) noexcept { return n && !(n & (n - 1)); }

void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw DomainError("fft: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // Twiddle table for the largest stage; smaller stages stride through it.
    std::vector<std::complex<double>> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double s, c;
        kernels::sincos_turns(static_cast<double>(k) / static_cast<double>(n), s, c);
        w[k] = {c, inverse ? s : -s};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2, stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> tw = w[k * stride];
                const std::complex<double> u = a[start + k];
                const std::complex<double> x = a[start + k + half];
                const std::complex<double> v(x.real() * tw.real() - x.imag() * tw.imag(),
                                             x.real() * tw.imag() + x.imag() * tw.real());
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
}

std::vector<double> sine_sum_direct(const std::vector<double>& a, std::size_t m) {
    std::vector<double> out(m + 1, 0.0);
    const std::size_t modes = std::min(a.size(), m > 0 ? m - 1 : 0);
    for (std::size_t j = 1; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t k = 1; k <= modes; ++k)
            acc += a[k - 1] * std::sin(std::numbers::pi * static_cast<double>(k * j % (2 * m)) /
                                       static_cast<double>(m));
        out[j] = acc;
    }
    return out;
}

std::vector<double> sine_sum(const std::vector<double>& a, std::size_t m) {
    if (m < 2) throw DomainError("sine_sum: need at least 2 intervals");
    if (!is_power_of_two(m) || a.size() * m < 4096) return sine_sum_direct(a, m);
    const std::size_t n = 2 * m;
    std::vector<std::complex<double>> x(n, 0.0);
    const std::size_t modes = std::min(a.size(), m - 1);
    for (std::size_t k = 1; k <= modes; ++k) {
        x[k] = a[k - 1];
        x[n - k] = -a[k - 1];
    }
    fft(x);
    std::vector<double> out(m + 1, 0.0);
    for (std::size_t j = 1; j < m; ++j) out[j] = -0.5 * x[j].imag();
    return out;
}

}  // namespace persbar
