#include "translume/simd.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace translume::simd {

const char* to_string(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(TRANSLUME_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels(Isa isa) {
    if (!supported(isa)) throw std::invalid_argument(std::string("ISA not supported: ") + to_string(isa));
#if defined(TRANSLUME_HAVE_AVX2)
    if (isa == Isa::Avx2) return detail::avx2_table;
#endif
    return detail::scalar_table;
}

namespace {
const KernelTable& select() {
    if (const char* env = std::getenv("TRANSLUME_SIMD")) {
        if (std::string_view(env) == "scalar") return detail::scalar_table;
    }
    if (supported(Isa::Avx2)) return kernels(Isa::Avx2);
    return detail::scalar_table;
}
}  // namespace

const KernelTable& kernels() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace translume::simd
