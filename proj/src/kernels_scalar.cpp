#include <bit>
#include <cmath>

#include "kernels_common.hpp"
#include "persbar/kernels.hpp"

namespace persbar::kernels {

using namespace detail;

void philox4x32_10(const std::uint32_t ctr[4], const std::uint32_t key[2], std::uint32_t out[4]) {
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = std::uint64_t{philox_m0} * c0;
        const std::uint64_t p1 = std::uint64_t{philox_m1} * c2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += philox_w0;
        k1 += philox_w1;
    }
    out[0] = c0;
    out[1] = c1;
    out[2] = c2;
    out[3] = c3;
}

void philox_blocks(const StreamId& id, std::uint64_t first_block, std::size_t count,
                   std::uint32_t* out) {
    const std::uint32_t key[2] = {id.key0, id.key1};
    for (std::size_t j = 0; j < count; ++j) {
        const std::uint64_t b = first_block + j;
        const std::uint32_t ctr[4] = {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                                      static_cast<std::uint32_t>(id.trial),
                                      static_cast<std::uint32_t>(id.trial >> 32)};
        philox4x32_10(ctr, key, out + 4 * j);
    }
}

double log_poly(double u) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(u);
    double e = std::bit_cast<double>((bits >> 52) | 0x4330000000000000ull) - 4503599627371519.0;
    double m = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
    if (m > sqrt2) {
        m = m * 0.5;
        e = e + 1.0;
    }
    const double s = (m - 1.0) / (m + 1.0);
    const double z = s * s;
    double p = log_coef[0];
    for (int i = 1; i < log_terms; ++i) p = p * z + log_coef[i];
    return e * ln2_hi + (2.0 * s * p + e * ln2_lo);
}

void sincos_turns(double u, double& s, double& c) {
    const double q = std::nearbyint(u * 4.0);
    const double r = u - q * 0.25;
    const double th = r * two_pi;
    const double z = th * th;
    double ps = sin_coef[0];
    for (int i = 1; i < sin_terms; ++i) ps = ps * z + sin_coef[i];
    double pc = cos_coef[0];
    for (int i = 1; i < cos_terms; ++i) pc = pc * z + cos_coef[i];
    const double sn = th * ps;
    const double cs = pc;
    switch (static_cast<int>(q) & 3) {
        case 0: s = sn; c = cs; break;
        case 1: s = cs; c = -sn; break;
        case 2: s = -sn; c = -cs; break;
        default: s = -cs; c = sn; break;
    }
}

void normals_scalar(const StreamId& id, std::uint64_t first_block, std::size_t count, double* out) {
    std::uint32_t w[4];
    for (std::size_t j = 0; j < count; ++j) {
        philox_blocks(id, first_block + j, 1, w);
        const std::uint64_t a = (std::uint64_t{w[1]} << 32) | w[0];
        const std::uint64_t b = (std::uint64_t{w[3]} << 32) | w[2];
        const double u1 = 2.0 - std::bit_cast<double>((a >> 12) | 0x3FF0000000000000ull);
        const double u2 = std::bit_cast<double>((b >> 12) | 0x3FF0000000000000ull) - 1.0;
        const double r = std::sqrt(-2.0 * log_poly(u1));
        double s, c;
        sincos_turns(u2, s, c);
        out[2 * j] = r * c;
        out[2 * j + 1] = r * s;
    }
}

}  // namespace persbar::kernels
