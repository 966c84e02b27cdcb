#include <immintrin.h>

#include "kernels_common.hpp"
#include "persbar/kernels.hpp"

namespace persbar::kernels {

using namespace detail;

namespace {

// 32x32->64 multiply of all eight lanes, split into high and low words.
inline void mulhilo(__m256i a, __m256i m, __m256i& hi, __m256i& lo) {
    const __m256i even = _mm256_mul_epu32(a, m);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
    lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
    hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

inline __m256d log_poly4(__m256d u) {
    const __m256i bits = _mm256_castpd_si256(u);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(bits, 52),
                                            _mm256_set1_epi64x(0x4330000000000000ll))),
        _mm256_set1_pd(4503599627371519.0));
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
                        _mm256_set1_epi64x(0x3FF0000000000000ll)));
    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(sqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), big);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d z = _mm256_mul_pd(s, s);
    __m256d p = _mm256_set1_pd(log_coef[0]);
    for (int i = 1; i < log_terms; ++i)
        p = _mm256_add_pd(_mm256_mul_pd(p, z), _mm256_set1_pd(log_coef[i]));
    const __m256d tail = _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s), p),
                                       _mm256_mul_pd(e, _mm256_set1_pd(ln2_lo)));
    return _mm256_add_pd(_mm256_mul_pd(e, _mm256_set1_pd(ln2_hi)), tail);
}

inline void sincos_turns4(__m256d u, __m256d& s, __m256d& c) {
    const __m256d q = _mm256_round_pd(_mm256_mul_pd(u, _mm256_set1_pd(4.0)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d r = _mm256_sub_pd(u, _mm256_mul_pd(q, _mm256_set1_pd(0.25)));
    const __m256d th = _mm256_mul_pd(r, _mm256_set1_pd(two_pi));
    const __m256d z = _mm256_mul_pd(th, th);
    __m256d ps = _mm256_set1_pd(sin_coef[0]);
    for (int i = 1; i < sin_terms; ++i)
        ps = _mm256_add_pd(_mm256_mul_pd(ps, z), _mm256_set1_pd(sin_coef[i]));
    __m256d pc = _mm256_set1_pd(cos_coef[0]);
    for (int i = 1; i < cos_terms; ++i)
        pc = _mm256_add_pd(_mm256_mul_pd(pc, z), _mm256_set1_pd(cos_coef[i]));
    const __m256d sn = _mm256_mul_pd(th, ps);
    const __m256d cs = pc;

    const __m256d q1 = _mm256_cmp_pd(q, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    const __m256d q2 = _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
    const __m256d q3 = _mm256_cmp_pd(q, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
    const __m256d swap = _mm256_or_pd(q1, q3);
    const __m256d sign = _mm256_set1_pd(-0.0);
    s = _mm256_blendv_pd(sn, cs, swap);
    c = _mm256_blendv_pd(cs, sn, swap);
    s = _mm256_xor_pd(s, _mm256_and_pd(_mm256_or_pd(q2, q3), sign));
    c = _mm256_xor_pd(c, _mm256_and_pd(_mm256_or_pd(q1, q2), sign));
}

// Box-Muller on four (a, b) 64-bit word pairs.
inline void box_muller4(__m256i a, __m256i b, __m256d& z0, __m256d& z1) {
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000ll);
    const __m256d u1 = _mm256_sub_pd(
        _mm256_set1_pd(2.0), _mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(a, 12), one_bits)));
    const __m256d u2 = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(b, 12), one_bits)), _mm256_set1_pd(1.0));
    const __m256d r = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), log_poly4(u1)));
    __m256d s, c;
    sincos_turns4(u2, s, c);
    z0 = _mm256_mul_pd(r, c);
    z1 = _mm256_mul_pd(r, s);
}

}  // namespace

void normals_avx2(const StreamId& id, std::uint64_t first_block, std::size_t count, double* out) {
    const __m256i m0 = _mm256_set1_epi32(static_cast<int>(philox_m0));
    const __m256i m1 = _mm256_set1_epi32(static_cast<int>(philox_m1));
    const __m256i t_lo = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(id.trial)));
    const __m256i t_hi = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(id.trial >> 32)));
    std::size_t j = 0;
    for (; j + 8 <= count; j += 8) {
        alignas(32) std::uint32_t lo[8], hi[8];
        for (int l = 0; l < 8; ++l) {
            const std::uint64_t b = first_block + j + l;
            lo[l] = static_cast<std::uint32_t>(b);
            hi[l] = static_cast<std::uint32_t>(b >> 32);
        }
        __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
        __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
        __m256i c2 = t_lo, c3 = t_hi;
        std::uint32_t k0 = id.key0, k1 = id.key1;
        for (int r = 0; r < 10; ++r) {
            __m256i hi0, lo0, hi1, lo1;
            mulhilo(c0, m0, hi0, lo0);
            mulhilo(c2, m1, hi1, lo1);
            c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), _mm256_set1_epi32(static_cast<int>(k0)));
            c1 = lo1;
            c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), _mm256_set1_epi32(static_cast<int>(k1)));
            c3 = lo0;
            k0 += philox_w0;
            k1 += philox_w1;
        }
        // a = (w1 << 32) | w0 per block; unpack pairs words within 128-bit
        // halves, so the "lo" group holds blocks 0,1,4,5 and "hi" 2,3,6,7.
        const __m256i a_lo = _mm256_unpacklo_epi32(c0, c1);
        const __m256i a_hi = _mm256_unpackhi_epi32(c0, c1);
        const __m256i b_lo = _mm256_unpacklo_epi32(c2, c3);
        const __m256i b_hi = _mm256_unpackhi_epi32(c2, c3);
        __m256d z0, z1, y0, y1;
        box_muller4(a_lo, b_lo, z0, z1);
        box_muller4(a_hi, b_hi, y0, y1);
        const __m256d zl = _mm256_unpacklo_pd(z0, z1);  // blocks 0, 4
        const __m256d zh = _mm256_unpackhi_pd(z0, z1);  // blocks 1, 5
        const __m256d yl = _mm256_unpacklo_pd(y0, y1);  // blocks 2, 6
        const __m256d yh = _mm256_unpackhi_pd(y0, y1);  // blocks 3, 7
        double* o = out + 2 * j;
        _mm256_storeu_pd(o + 0, _mm256_permute2f128_pd(zl, zh, 0x20));
        _mm256_storeu_pd(o + 4, _mm256_permute2f128_pd(yl, yh, 0x20));
        _mm256_storeu_pd(o + 8, _mm256_permute2f128_pd(zl, zh, 0x31));
        _mm256_storeu_pd(o + 12, _mm256_permute2f128_pd(yl, yh, 0x31));
    }
    if (j < count) normals_scalar(id, first_block + j, count - j, out + 2 * j);
}

}  // namespace persbar::kernels
