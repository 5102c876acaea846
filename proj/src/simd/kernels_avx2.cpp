// Compiled with -mavx2 -mpopcnt; only reached after a CPUID check in dispatch.cpp.

#include "kernels_impl.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>

namespace segeval::simd {
namespace {

inline unsigned popcount_mask(__m256i v) {
    return static_cast<unsigned>(std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(v))));
}

PairTally pair_tally_avx2(const std::uint8_t* gt, const std::uint8_t* pred, std::size_t n,
                          std::uint8_t label) {
    const __m256i needle = _mm256_set1_epi8(static_cast<char>(label));
    PairTally t;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i g = _mm256_cmpeq_epi8(
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(gt + i)), needle);
        const __m256i p = _mm256_cmpeq_epi8(
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pred + i)), needle);
        t.both += popcount_mask(_mm256_and_si256(g, p));
        t.pred_only += popcount_mask(_mm256_andnot_si256(g, p));
        t.gt_only += popcount_mask(_mm256_andnot_si256(p, g));
    }
    const PairTally rest = scalar::pair_tally(gt + i, pred + i, n - i, label);
    t.both += rest.both;
    t.pred_only += rest.pred_only;
    t.gt_only += rest.gt_only;
    return t;
}

std::size_t fp_mask_avx2(const std::uint8_t* gt, const std::uint8_t* pred, std::size_t n,
                         std::uint8_t label, std::uint8_t* out) {
    const __m256i needle = _mm256_set1_epi8(static_cast<char>(label));
    const __m256i one = _mm256_set1_epi8(1);
    std::size_t ones = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i g = _mm256_cmpeq_epi8(
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(gt + i)), needle);
        const __m256i p = _mm256_cmpeq_epi8(
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pred + i)), needle);
        const __m256i fp = _mm256_andnot_si256(g, p);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_and_si256(fp, one));
        ones += popcount_mask(fp);
    }
    return ones + scalar::fp_mask(gt + i, pred + i, n - i, label, out + i);
}

std::size_t count_equal_avx2(const std::uint8_t* data, std::size_t n, std::uint8_t label) {
    const __m256i needle = _mm256_set1_epi8(static_cast<char>(label));
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
        c += popcount_mask(_mm256_cmpeq_epi8(v, needle));
    }
    return c + scalar::count_equal(data + i, n - i, label);
}

// Squared distances are formed in double lanes: integer inputs below 2^26 keep
// every intermediate exact.
std::int64_t min_sq_distance_avx2(const std::int32_t* rows, const std::int32_t* cols,
                                  std::size_t n, std::int32_t qr, std::int32_t qc) {
    const __m256d r0 = _mm256_set1_pd(static_cast<double>(qr));
    const __m256d c0 = _mm256_set1_pd(static_cast<double>(qc));
    __m256d best_a = _mm256_set1_pd(INFINITY);
    __m256d best_b = best_a;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d ra = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(rows + i)));
        const __m256d ca = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + i)));
        const __m256d rb = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(rows + i + 4)));
        const __m256d cb = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + i + 4)));
        const __m256d dra = _mm256_sub_pd(ra, r0);
        const __m256d dca = _mm256_sub_pd(ca, c0);
        const __m256d drb = _mm256_sub_pd(rb, r0);
        const __m256d dcb = _mm256_sub_pd(cb, c0);
        best_a = _mm256_min_pd(best_a, _mm256_add_pd(_mm256_mul_pd(dra, dra), _mm256_mul_pd(dca, dca)));
        best_b = _mm256_min_pd(best_b, _mm256_add_pd(_mm256_mul_pd(drb, drb), _mm256_mul_pd(dcb, dcb)));
    }
    const __m256d best = _mm256_min_pd(best_a, best_b);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    const double vec_min = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
    std::int64_t result = std::isinf(vec_min) ? INT64_MAX : static_cast<std::int64_t>(vec_min);
    if (i < n) result = std::min(result, scalar::min_sq_distance(rows + i, cols + i, n - i, qr, qc));
    return result;
}

const KernelTable kAvx2Table{
    Backend::Avx2, pair_tally_avx2, fp_mask_avx2, count_equal_avx2, min_sq_distance_avx2,
};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2Table; }

}  // namespace segeval::simd

#else

namespace segeval::simd {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace segeval::simd

#endif
