#include "segeval/simd/kernels.hpp"
#include "kernels_impl.hpp"

#include <limits>

namespace segeval::simd::scalar {

PairTally pair_tally(const std::uint8_t* gt, const std::uint8_t* pred, std::size_t n,
                     std::uint8_t label) {
    PairTally t;
    for (std::size_t i = 0; i < n; ++i) {
        const bool g = gt[i] == label;
        const bool p = pred[i] == label;
        t.both += g && p;
        t.pred_only += !g && p;
        t.gt_only += g && !p;
    }
    return t;
}

std::size_t fp_mask(const std::uint8_t* gt, const std::uint8_t* pred, std::size_t n,
                    std::uint8_t label, std::uint8_t* out) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t bit = (pred[i] == label && gt[i] != label) ? 1 : 0;
        out[i] = bit;
        ones += bit;
    }
    return ones;
}

std::size_t count_equal(const std::uint8_t* data, std::size_t n, std::uint8_t label) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += data[i] == label;
    return c;
}

std::int64_t min_sq_distance(const std::int32_t* rows, const std::int32_t* cols, std::size_t n,
                             std::int32_t qr, std::int32_t qc) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t dr = static_cast<std::int64_t>(rows[i]) - qr;
        const std::int64_t dc = static_cast<std::int64_t>(cols[i]) - qc;
        const std::int64_t d = dr * dr + dc * dc;
        if (d < best) best = d;
    }
    return best;
}

}  // namespace segeval::simd::scalar
