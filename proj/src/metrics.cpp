#include "segeval/metrics.hpp"

#include "segeval/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace segeval {
namespace {

__extension__ using Int128 = __int128;

MetricValue ratio(std::string name, std::uint64_t num, std::uint64_t den) {
    if (den == 0) return {std::move(name), 0.0, false};
    return {std::move(name), static_cast<double>(num) / static_cast<double>(den), true};
}

}  // namespace

MetricValue accuracy(const ConfusionCounts& c) { return ratio("accuracy", c.tp + c.tn, c.total()); }
MetricValue sensitivity(const ConfusionCounts& c) { return ratio("sensitivity", c.tp, c.tp + c.fn); }
MetricValue specificity(const ConfusionCounts& c) { return ratio("specificity", c.tn, c.tn + c.fp); }
MetricValue ppv(const ConfusionCounts& c) { return ratio("ppv", c.tp, c.tp + c.fp); }

MetricValue iou(const ConfusionCounts& c) {
    const std::uint64_t den = c.tp + c.fp + c.fn;
    if (den == 0) return {"iou", 1.0, false};
    return {"iou", static_cast<double>(c.tp) / static_cast<double>(den), true};
}

MetricValue dice(const ConfusionCounts& c) {
    const std::uint64_t den = 2 * c.tp + c.fp + c.fn;
    if (den == 0) return {"dice", 1.0, false};
    return {"dice", static_cast<double>(2 * c.tp) / static_cast<double>(den), true};
}

MetricValue mcc(const ConfusionCounts& c) {
    const auto pp = static_cast<long double>(c.tp + c.fp);
    const auto ap = static_cast<long double>(c.tp + c.fn);
    const auto pn = static_cast<long double>(c.tn + c.fn);
    const auto an = static_cast<long double>(c.tn + c.fp);
    if (pp == 0 || ap == 0 || pn == 0 || an == 0) return {"mcc", 0.0, false};

    // Numerator in exact integer arithmetic; only the root is inexact.
    const Int128 num = static_cast<Int128>(c.tp) * c.tn - static_cast<Int128>(c.fp) * c.fn;
    const long double den = std::sqrt(pp * ap) * std::sqrt(an * pn);
    const double v = static_cast<double>(static_cast<long double>(num) / den);
    return {"mcc", std::clamp(v, -1.0, 1.0), true};
}

MetricValue mcc_rescaled(const ConfusionCounts& c) {
    MetricValue raw = mcc(c);
    if (!raw.defined) return {"mcc_rescaled", 0.0, false};
    return {"mcc_rescaled", (raw.value + 1.0) / 2.0, true};
}

double directed_hausdorff(std::span<const Point> from, std::span<const Point> to) {
    if (from.empty() || to.empty()) throw std::invalid_argument("undefined Hausdorff: empty boundary");

    std::vector<std::int32_t> rows(to.size());
    std::vector<std::int32_t> cols(to.size());
    for (std::size_t i = 0; i < to.size(); ++i) {
        rows[i] = to[i].row;
        cols[i] = to[i].col;
    }
    const auto& k = simd::active_kernels();
    std::int64_t worst = 0;
    for (const Point& p : from) {
        worst = std::max(worst, k.min_sq_distance(rows.data(), cols.data(), to.size(), p.row, p.col));
    }
    return std::sqrt(static_cast<double>(worst));
}

MetricValue hausdorff(const BoundarySet& gt_boundary, const BoundarySet& pred_boundary) {
    if (gt_boundary.empty() || pred_boundary.empty()) {
        throw std::invalid_argument("undefined Hausdorff: empty boundary");
    }
    const double d = std::max(directed_hausdorff(gt_boundary.points, pred_boundary.points),
                              directed_hausdorff(pred_boundary.points, gt_boundary.points));
    return {"hausdorff", d, true};
}

GeneralizedDiceResult generalized_dice(const LabelMask& gt, const LabelMask& pred,
                                       std::span<const Label> labels) {
    require_same_shape(gt, pred);
    if (labels.empty()) throw std::invalid_argument("generalized_dice: label list is empty");

    GeneralizedDiceResult result;
    double num = 0.0;
    double den = 0.0;
    for (Label l : labels) {
        const ConfusionCounts c = confusion_counts(gt, pred, l);
        const std::uint64_t g = c.tp + c.fn;
        if (g == 0) {
            result.skipped.push_back(l);
            continue;
        }
        const std::uint64_t s = c.tp + c.fp;
        num += static_cast<double>(c.tp) / static_cast<double>(g);
        den += static_cast<double>(s + g) / static_cast<double>(g);
    }
    if (result.skipped.size() == labels.size()) {
        throw std::invalid_argument("generalized_dice: none of the requested labels occurs in the ground truth");
    }
    result.metric = {"generalized_dice", 2.0 * num / den, true};
    return result;
}

}  // namespace segeval
