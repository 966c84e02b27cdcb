#pragma once

#include <cstddef>
#include <cstdint>

namespace persbar::kernels {

/// Philox4x32-10 key and per-trial counter prefix. Block `b` of a stream uses
/// the counter (lo32(b), hi32(b), lo32(trial), hi32(trial)).
struct StreamId {
    std::uint32_t key0;
    std::uint32_t key1;
    std::uint64_t trial;
};

/// One Philox4x32-10 block.
void philox4x32_10(const std::uint32_t ctr[4], const std::uint32_t key[2], std::uint32_t out[4]);

/// Raw blocks first_block .. first_block+count-1, four words each.
void philox_blocks(const StreamId& id, std::uint64_t first_block, std::size_t count,
                   std::uint32_t* out);

/// Two standard normals per block via Box-Muller with the polynomial log and
/// sincos below; out receives 2*count doubles in block order.
using NormalsFn = void (*)(const StreamId&, std::uint64_t, std::size_t, double*);

void normals_scalar(const StreamId& id, std::uint64_t first_block, std::size_t count, double* out);
#if defined(PERSBAR_HAVE_AVX2_KERNELS)
void normals_avx2(const StreamId& id, std::uint64_t first_block, std::size_t count, double* out);
#endif

enum class Isa { scalar, avx2 };

/// Best supported path, unless PERSBAR_SIMD=scalar is set in the environment.
Isa active_isa();
bool isa_supported(Isa isa);
NormalsFn normals_kernel(Isa isa);

/// Dispatching entry point used by the samplers.
void normals(const StreamId& id, std::uint64_t first_block, std::size_t count, double* out);

/// Deterministic elementary functions shared by every dispatch path.
double log_poly(double u);
/// sin and cos of 2*pi*u for u in [0, 1).
void sincos_turns(double u, double& s, double& c);

}  // namespace persbar::kernels
