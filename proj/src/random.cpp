#include "persbar/random.hpp"

namespace persbar {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

TrialStream::TrialStream(Seed seed, std::uint64_t trial, StreamPurpose purpose) {
    const std::uint64_t k =
        splitmix64(seed.master + static_cast<std::uint64_t>(purpose) * 0x9E3779B97F4A7C15ull);
    id_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32), trial};
}

void TrialStream::normals(double* out, std::size_t n) {
    const std::size_t full = n / 2;
    kernels::normals(id_, block_, full, out);
    block_ += full;
    if (n % 2) {
        double tail[2];
        kernels::normals(id_, block_, 1, tail);
        out[n - 1] = tail[0];
        ++block_;
    }
}

std::vector<double> TrialStream::normals(std::size_t n) {
    std::vector<double> z(n);
    normals(z.data(), n);
    return z;
}

void TrialStream::uniforms(double* out, std::size_t n) {
    std::uint32_t w[4];
    for (std::size_t i = 0; i < n; i += 2) {
        kernels::philox_blocks(id_, block_++, 1, w);
        const std::uint64_t a = (std::uint64_t{w[1]} << 32) | w[0];
        const std::uint64_t b = (std::uint64_t{w[3]} << 32) | w[2];
        out[i] = static_cast<double>(a >> 11) * 0x1.0p-53;
        if (i + 1 < n) out[i + 1] = static_cast<double>(b >> 11) * 0x1.0p-53;
    }
}

void TrialStream::signs(double* out, std::size_t n, double magnitude) {
    std::uint32_t w[4];
    std::size_t i = 0;
    while (i < n) {
        kernels::philox_blocks(id_, block_++, 1, w);
        for (int k = 0; k < 4 && i < n; ++k)
            for (int bit = 0; bit < 32 && i < n; ++bit, ++i)
                out[i] = ((w[k] >> bit) & 1u) ? magnitude : -magnitude;
    }
}

std::uint64_t TrialStream::below(std::uint64_t bound) {
    std::uint32_t w[4];
    for (;;) {
        kernels::philox_blocks(id_, block_++, 1, w);
        const std::uint64_t x = (std::uint64_t{w[1]} << 32) | w[0];
        const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        const std::uint64_t low = static_cast<std::uint64_t>(m);
        if (low >= bound || low >= (-bound) % bound) return static_cast<std::uint64_t>(m >> 64);
    }
}

}  // namespace persbar
