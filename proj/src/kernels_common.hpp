#pragma once

// Constants shared by the scalar and AVX2 kernels. Both paths evaluate the
// same operations in the same order, so results agree bit for bit.

#include <cstdint>

namespace persbar::kernels::detail {

inline constexpr std::uint32_t philox_m0 = 0xD2511F53u;
inline constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;
inline constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
inline constexpr std::uint32_t philox_w1 = 0xBB67AE85u;

inline constexpr double ln2_hi = 6.93147180369123816490e-01;
inline constexpr double ln2_lo = 1.90821492927058770002e-10;
inline constexpr double sqrt2 = 1.41421356237309514547;
inline constexpr double two_pi = 6.28318530717958647692;

// 2*atanh(s) = 2s * (1 + z/3 + z^2/5 + ...), z = s^2, |s| <= 0.1716.
inline constexpr int log_terms = 12;
inline constexpr double log_coef[log_terms] = {
    1.0 / 23, 1.0 / 21, 1.0 / 19, 1.0 / 17, 1.0 / 15, 1.0 / 13,
    1.0 / 11, 1.0 / 9,  1.0 / 7,  1.0 / 5,  1.0 / 3,  1.0,
};

// Taylor coefficients in theta^2 for |theta| <= pi/4, highest first.
inline constexpr int sin_terms = 9;
inline constexpr double sin_coef[sin_terms] = {
    1.0 / 355687428096000.0,
    -1.0 / 1307674368000.0,
    1.0 / 6227020800.0,
    -1.0 / 39916800.0,
    1.0 / 362880.0,
    -1.0 / 5040.0,
    1.0 / 120.0,
    -1.0 / 6.0,
    1.0 / 1.0,
};
inline constexpr int cos_terms = 10;
inline constexpr double cos_coef[cos_terms] = {
    -1.0 / 6402373705728000.0,
    1.0 / 20922789888000.0,
    -1.0 / 87178291200.0,
    1.0 / 479001600.0,
    -1.0 / 3628800.0,
    1.0 / 40320.0,
    -1.0 / 720.0,
    1.0 / 24.0,
    -1.0 / 2.0,
    1.0 / 1.0,
};

}  // namespace persbar::kernels::detail
