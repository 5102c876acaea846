#include "segeval/ssegep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace segeval {
namespace {

// Neumaier-compensated sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

void validate_labels(std::span<const Label> labels) {
    if (labels.empty()) throw std::invalid_argument("ssegep: label list is empty");
    std::vector<Label> sorted(labels.begin(), labels.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == 0) throw std::invalid_argument("ssegep: label 0 is background");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("ssegep: duplicate label in list");
    }
}

double compose(std::span<const SegmentMatch> matches, std::span<const LabelFpStats> fp) {
    CompensatedSum num;
    for (const auto& m : matches) num.add(m.contribution());
    CompensatedSum den;
    den.add(static_cast<double>(matches.size()));
    for (const auto& f : fp) den.add(f.weighted_fp);
    return num.value() / den.value();
}

}  // namespace

std::vector<SegmentWeight> segment_weights(std::span<const Segment> gt_segments) {
    std::vector<SegmentWeight> out;
    out.reserve(gt_segments.size());
    for (std::size_t i = 0; i < gt_segments.size(); ++i) {
        const std::uint64_t area = gt_segments[i].area();
        if (area == 0) throw std::invalid_argument("segment_weights: empty segment");
        out.push_back({i, area, 1.0 / static_cast<double>(area)});
    }
    return out;
}

std::vector<SegmentMatch> match_tp(std::span<const Segment> gt_segments, const LabelMask& pred) {
    std::vector<SegmentMatch> out;
    out.reserve(gt_segments.size());
    for (std::size_t i = 0; i < gt_segments.size(); ++i) {
        const Segment& s = gt_segments[i];
        if (!pred.contains(s.bbox.min_row, s.bbox.min_col) ||
            !pred.contains(s.bbox.max_row, s.bbox.max_col)) {
            throw std::invalid_argument("dimension mismatch: segment extends outside prediction " +
                                        pred.shape_string());
        }
        std::uint64_t hits = 0;
        for (const Point& p : s.pixels) hits += pred.at(p.row, p.col) == s.label;
        out.push_back({i, s.label, s.area(), hits});
    }
    return out;
}

LabelFpStats weigh_fp(Label label, std::uint64_t fp_count, std::uint64_t label_tp_total) {
    LabelFpStats s{label, fp_count, label_tp_total, 0.0};
    if (fp_count == 0) {
        s.weighted_fp = 0.0;
    } else if (label_tp_total == 0) {
        s.weighted_fp = static_cast<double>(fp_count);
    } else {
        s.weighted_fp = static_cast<double>(fp_count) / static_cast<double>(label_tp_total);
    }
    return s;
}

std::vector<LabelFpStats> fp_weights(const LabelMask& gt, const LabelMask& pred,
                                     std::span<const Label> labels) {
    require_same_shape(gt, pred);
    std::vector<LabelFpStats> out;
    out.reserve(labels.size());
    for (Label l : labels) {
        // The label's TP total (sum of a_i over its segments) is its pixel-level tp.
        const ConfusionCounts c = confusion_counts(gt, pred, l);
        out.push_back(weigh_fp(l, c.fp, c.tp));
    }
    return out;
}

SsegepBreakdown ssegep(const LabelMask& gt, const LabelMask& pred, std::span<const Label> labels,
                       Connectivity connectivity) {
    require_same_shape(gt, pred);
    validate_labels(labels);

    SsegepBreakdown out;
    out.fp_stats = fp_weights(gt, pred, labels);

    for (std::size_t k = 0; k < labels.size(); ++k) {
        const Label l = labels[k];
        const std::vector<Segment> segments = connected_components(gt, l, connectivity);
        std::vector<SegmentMatch> matches = match_tp(segments, pred);

        LabelScore ls{l, matches.size(), 0.0, false};
        if (matches.empty()) {
            ls.vacuous = true;
            ls.score = out.fp_stats[k].fp_count == 0 ? 1.0 : 0.0;
        } else {
            ls.score = compose(matches, std::span(&out.fp_stats[k], 1));
        }
        out.per_label.push_back(ls);

        for (auto& m : matches) {
            m.segment_index = out.matches.size();
            out.matches.push_back(m);
        }
    }

    out.n_segments = out.matches.size();
    if (out.n_segments == 0) {
        out.vacuous = true;
        const bool any_fp = std::any_of(out.fp_stats.begin(), out.fp_stats.end(),
                                        [](const LabelFpStats& f) { return f.fp_count > 0; });
        out.score = any_fp ? 0.0 : 1.0;
        return out;
    }
    out.score = compose(out.matches, out.fp_stats);
    return out;
}

}  // namespace segeval
