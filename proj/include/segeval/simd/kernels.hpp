#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the active table is picked once at startup from
// CPUID (override with SEGEVAL_SIMD=scalar|avx2).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace segeval::simd {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend backend) noexcept;

/// Per-label pixel tallies over two equally sized label arrays.
struct PairTally {
    std::uint64_t both = 0;       // gt == label && pred == label
    std::uint64_t pred_only = 0;  // gt != label && pred == label
    std::uint64_t gt_only = 0;    // gt == label && pred != label
};

struct KernelTable {
    Backend backend;

    PairTally (*pair_tally)(const std::uint8_t* gt, const std::uint8_t* pred, std::size_t n,
                            std::uint8_t label);

    /// out[i] = (pred[i] == label && gt[i] != label); returns number of ones.
    std::size_t (*fp_mask)(const std::uint8_t* gt, const std::uint8_t* pred, std::size_t n,
                           std::uint8_t label, std::uint8_t* out);

    std::size_t (*count_equal)(const std::uint8_t* data, std::size_t n, std::uint8_t label);

    /// Smallest squared Euclidean distance from (qr, qc) to any (rows[i], cols[i]).
    /// n must be > 0. Exact while coordinate differences stay below 2^26.
    std::int64_t (*min_sq_distance)(const std::int32_t* rows, const std::int32_t* cols,
                                    std::size_t n, std::int32_t qr, std::int32_t qc);
};

const KernelTable& scalar_kernels() noexcept;

bool backend_available(Backend backend) noexcept;

/// Throws std::invalid_argument if the backend is not available on this CPU/build.
const KernelTable& kernels_for(Backend backend);

/// The table used by the library.
const KernelTable& active_kernels() noexcept;

// Convenience wrappers over active_kernels().
inline PairTally pair_tally(std::span<const std::uint8_t> gt, std::span<const std::uint8_t> pred,
                            std::uint8_t label) {
    return active_kernels().pair_tally(gt.data(), pred.data(), gt.size(), label);
}

inline std::size_t count_equal(std::span<const std::uint8_t> data, std::uint8_t label) {
    return active_kernels().count_equal(data.data(), data.size(), label);
}

}  // namespace segeval::simd
