#pragma once

// Small-segment emphasized performance score.
//
//            sum_i a_i / area_i
//   score = ----------------------
//            n_s + sum_j fp_j / T_j
//
// i runs over ground-truth segments of every requested label (a_i = predicted
// pixels of the segment's own label inside it), j over labels, fp_j is the
// label's false-positive pixel count and T_j the label's total TP pixels.
// When T_j = 0 each FP pixel weighs 1.

#include "segeval/mask.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace segeval {

struct SegmentWeight {
    std::size_t segment_index = 0;
    std::uint64_t area = 0;
    double weight = 0.0;  // 1 / area
};

struct SegmentMatch {
    std::size_t segment_index = 0;
    Label label = 0;
    std::uint64_t gt_area = 0;
    std::uint64_t tp_count = 0;

    double weight() const noexcept { return 1.0 / static_cast<double>(gt_area); }
    /// tp_count / gt_area as one correctly rounded division; exactly 1 when fully covered.
    double contribution() const noexcept {
        return static_cast<double>(tp_count) / static_cast<double>(gt_area);
    }
};

struct LabelFpStats {
    Label label = 0;
    std::uint64_t fp_count = 0;
    std::uint64_t label_tp_total = 0;
    double weighted_fp = 0.0;
};

/// Score restricted to one label's segments and false positives.
struct LabelScore {
    Label label = 0;
    std::size_t n_segments = 0;
    double score = 0.0;
    bool vacuous = false;
};

struct SsegepBreakdown {
    std::vector<SegmentMatch> matches;
    std::vector<LabelFpStats> fp_stats;
    std::vector<LabelScore> per_label;
    std::size_t n_segments = 0;
    double score = 0.0;
    /// Ground truth holds none of the requested labels: score is 1 if the
    /// prediction holds none either, else 0.
    bool vacuous = false;
};

std::vector<SegmentWeight> segment_weights(std::span<const Segment> gt_segments);

/// One match per segment, zero-overlap segments included. Throws
/// std::invalid_argument if a segment lies outside the prediction's grid.
std::vector<SegmentMatch> match_tp(std::span<const Segment> gt_segments, const LabelMask& pred);

LabelFpStats weigh_fp(Label label, std::uint64_t fp_count, std::uint64_t label_tp_total);

std::vector<LabelFpStats> fp_weights(const LabelMask& gt, const LabelMask& pred,
                                     std::span<const Label> labels);

/// Throws std::invalid_argument on shape mismatch, an empty label list,
/// label 0, or duplicate labels.
SsegepBreakdown ssegep(const LabelMask& gt, const LabelMask& pred, std::span<const Label> labels,
                       Connectivity connectivity = Connectivity::Eight);

}  // namespace segeval
