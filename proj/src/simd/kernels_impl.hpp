#pragma once

#include "segeval/simd/kernels.hpp"

namespace segeval::simd {

namespace scalar {
PairTally pair_tally(const std::uint8_t* gt, const std::uint8_t* pred, std::size_t n,
                     std::uint8_t label);
std::size_t fp_mask(const std::uint8_t* gt, const std::uint8_t* pred, std::size_t n,
                    std::uint8_t label, std::uint8_t* out);
std::size_t count_equal(const std::uint8_t* data, std::size_t n, std::uint8_t label);
std::int64_t min_sq_distance(const std::int32_t* rows, const std::int32_t* cols, std::size_t n,
                             std::int32_t qr, std::int32_t qc);
}  // namespace scalar

// Null when the build has no AVX2 translation unit.
const KernelTable* avx2_table() noexcept;

}  // namespace segeval::simd
