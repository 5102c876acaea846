#pragma once

// Baseline overlap, confusion-matrix and boundary metrics.

#include "segeval/mask.hpp"

#include <span>
#include <string>
#include <vector>

namespace segeval {

/// A metric value plus a flag for degenerate denominators. When `defined` is
/// false, `value` holds the documented fallback (0, or 1 for vacuous dice/iou).
struct MetricValue {
    std::string name;
    double value = 0.0;
    bool defined = true;
};

MetricValue accuracy(const ConfusionCounts& c);
MetricValue sensitivity(const ConfusionCounts& c);
MetricValue specificity(const ConfusionCounts& c);
MetricValue ppv(const ConfusionCounts& c);
MetricValue iou(const ConfusionCounts& c);
MetricValue dice(const ConfusionCounts& c);

/// Raw Matthews correlation in [-1, 1]; undefined (0) when any marginal is empty.
MetricValue mcc(const ConfusionCounts& c);
/// (mcc + 1) / 2, for tables that need [0, 1].
MetricValue mcc_rescaled(const ConfusionCounts& c);

/// Symmetric Hausdorff distance in pixels (Euclidean), exact max-min.
/// Throws std::invalid_argument("undefined Hausdorff: empty boundary") if either set is empty.
MetricValue hausdorff(const BoundarySet& gt_boundary, const BoundarySet& pred_boundary);

/// max over `from` of the distance to the nearest point of `to`.
double directed_hausdorff(std::span<const Point> from, std::span<const Point> to);

struct GeneralizedDiceResult {
    MetricValue metric;
    std::vector<Label> skipped;  // requested labels absent from the ground truth
};

/// Multi-label Dice with per-label 1/|G_l| weighting. Throws std::invalid_argument
/// when `labels` is empty or none of them occurs in the ground truth.
GeneralizedDiceResult generalized_dice(const LabelMask& gt, const LabelMask& pred,
                                       std::span<const Label> labels);

}  // namespace segeval
