#include "segeval/simd/kernels.hpp"
#include "kernels_impl.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace segeval::simd {
namespace {

const KernelTable kScalarTable{
    Backend::Scalar, scalar::pair_tally, scalar::fp_mask, scalar::count_equal,
    scalar::min_sq_distance,
};

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
    return false;
#endif
}

const KernelTable& select_table() noexcept {
    const char* forced = std::getenv("SEGEVAL_SIMD");
    if (forced != nullptr && std::string(forced) == "scalar") return kScalarTable;
    if (backend_available(Backend::Avx2)) return *avx2_table();
    return kScalarTable;
}

}  // namespace

std::string_view backend_name(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

bool backend_available(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return avx2_table() != nullptr && cpu_has_avx2();
    }
    return false;
}

const KernelTable& kernels_for(Backend backend) {
    if (!backend_available(backend)) {
        throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(backend)));
    }
    return backend == Backend::Avx2 ? *avx2_table() : kScalarTable;
}

const KernelTable& active_kernels() noexcept {
    static const KernelTable& table = select_table();
    return table;
}

}  // namespace segeval::simd
