#include <cstdlib>
#include <cstring>

#include "persbar/kernels.hpp"

namespace persbar::kernels {

bool isa_supported(Isa isa) {
    if (isa == Isa::scalar) return true;
#if defined(PERSBAR_HAVE_AVX2_KERNELS) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa chosen = [] {
        const char* env = std::getenv("PERSBAR_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
        return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
    }();
    return chosen;
}

NormalsFn normals_kernel(Isa isa) {
#if defined(PERSBAR_HAVE_AVX2_KERNELS)
    if (isa == Isa::avx2 && isa_supported(Isa::avx2)) return &normals_avx2;
#endif
    (void)isa;
    return &normals_scalar;
}

void normals(const StreamId& id, std::uint64_t first_block, std::size_t count, double* out) {
    static const NormalsFn fn = normals_kernel(active_isa());
    fn(id, first_block, count, out);
}

}  // namespace persbar::kernels
