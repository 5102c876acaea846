#include "segeval/mask.hpp"

#include "segeval/simd/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace segeval {

Connectivity connectivity_from_int(int value) {
    if (value == 4) return Connectivity::Four;
    if (value == 8) return Connectivity::Eight;
    throw std::invalid_argument("connectivity must be 4 or 8, got " + std::to_string(value));
}

LabelMask::LabelMask(int width, int height) : LabelMask(width, height, {}) {}

LabelMask::LabelMask(int width, int height, std::vector<Label> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("mask dimensions must be positive, got " + shape_string());
    }
    const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (labels_.empty()) labels_.assign(expected, 0);
    if (labels_.size() != expected) {
        throw std::invalid_argument("mask " + shape_string() + " needs " + std::to_string(expected) +
                                    " labels, got " + std::to_string(labels_.size()));
    }
}

std::string LabelMask::shape_string() const {
    return std::to_string(width_) + "x" + std::to_string(height_);
}

MaskBuilder::MaskBuilder(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("mask dimensions must be positive");
    }
    labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

MaskBuilder::MaskBuilder(const LabelMask& from)
    : width_(from.width()), height_(from.height()), labels_(from.labels().begin(), from.labels().end()) {}

void MaskBuilder::set(int row, int col, Label value) {
    if (row < 0 || col < 0 || row >= height_ || col >= width_) {
        throw std::out_of_range("pixel (" + std::to_string(row) + ", " + std::to_string(col) +
                                ") outside " + std::to_string(width_) + "x" + std::to_string(height_));
    }
    labels_[static_cast<std::size_t>(row) * width_ + col] = value;
}

Label MaskBuilder::get(int row, int col) const {
    return labels_.at(static_cast<std::size_t>(row) * width_ + col);
}

LabelMask MaskBuilder::build() const& { return LabelMask(width_, height_, labels_); }
LabelMask MaskBuilder::build() && { return LabelMask(width_, height_, std::move(labels_)); }

void require_same_shape(const LabelMask& a, const LabelMask& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("dimension mismatch: ground truth is " + a.shape_string() +
                                    ", prediction is " + b.shape_string());
    }
}

namespace {

class DisjointSets {
public:
    std::uint32_t make() {
        parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
        return parent_.back();
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Smaller index becomes the root, so roots follow raster order.
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }
    std::size_t size() const noexcept { return parent_.size(); }

private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace

ComponentMap label_components(const LabelMask& mask, Label label, Connectivity connectivity) {
    if (label == 0) throw std::invalid_argument("connected_components: label must be > 0");

    const int w = mask.width();
    const int h = mask.height();
    const bool diagonal = connectivity == Connectivity::Eight;

    // Pass 1: provisional ids (1-based, 0 = outside) with equivalences.
    std::vector<std::uint32_t> provisional(mask.size(), 0);
    DisjointSets sets;
    sets.make();  // slot 0 unused

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t i = mask.index(r, c);
            if (mask[i] != label) continue;

            std::uint32_t assigned = 0;
            auto visit = [&](int nr, int nc) {
                if (!mask.contains(nr, nc)) return;
                const std::uint32_t n = provisional[mask.index(nr, nc)];
                if (n == 0) return;
                if (assigned == 0) {
                    assigned = n;
                } else {
                    sets.unite(assigned, n);
                }
            };
            visit(r, c - 1);
            visit(r - 1, c);
            if (diagonal) {
                visit(r - 1, c - 1);
                visit(r - 1, c + 1);
            }
            provisional[i] = assigned != 0 ? assigned : sets.make();
        }
    }

    // Pass 2: resolve roots and gather pixel lists.
    std::vector<std::int64_t> root_slot(sets.size(), -1);
    std::vector<Segment> found;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t i = mask.index(r, c);
            if (provisional[i] == 0) continue;
            const std::uint32_t root = sets.find(provisional[i]);
            if (root_slot[root] < 0) {
                root_slot[root] = static_cast<std::int64_t>(found.size());
                Segment s;
                s.label = label;
                s.bbox = {r, c, r, c};
                found.push_back(std::move(s));
            }
            Segment& s = found[static_cast<std::size_t>(root_slot[root])];
            s.pixels.push_back({r, c});
            s.bbox.min_row = std::min(s.bbox.min_row, r);
            s.bbox.min_col = std::min(s.bbox.min_col, c);
            s.bbox.max_row = std::max(s.bbox.max_row, r);
            s.bbox.max_col = std::max(s.bbox.max_col, c);
            provisional[i] = root;
        }
    }

    // Order by bbox corner; ties broken by first raster pixel.
    std::vector<std::size_t> order(found.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ba = found[a].bbox;
        const auto& bb = found[b].bbox;
        if (ba.min_row != bb.min_row) return ba.min_row < bb.min_row;
        return ba.min_col < bb.min_col;
    });

    std::vector<std::uint32_t> final_id(found.size());
    ComponentMap out;
    out.segments.reserve(found.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        final_id[order[k]] = static_cast<std::uint32_t>(k + 1);
        out.segments.push_back(std::move(found[order[k]]));
    }

    out.ids.assign(mask.size(), 0);
    for (std::size_t i = 0; i < provisional.size(); ++i) {
        if (provisional[i] != 0) {
            out.ids[i] = final_id[static_cast<std::size_t>(root_slot[provisional[i]])];
        }
    }
    return out;
}

std::vector<Segment> connected_components(const LabelMask& mask, Label label,
                                          Connectivity connectivity) {
    return label_components(mask, label, connectivity).segments;
}

ConfusionCounts confusion_counts(const LabelMask& gt, const LabelMask& pred, Label label) {
    require_same_shape(gt, pred);
    const simd::PairTally t = simd::pair_tally(gt.labels(), pred.labels(), label);
    ConfusionCounts c;
    c.tp = t.both;
    c.fp = t.pred_only;
    c.fn = t.gt_only;
    c.tn = gt.size() - c.tp - c.fp - c.fn;
    return c;
}

LabelMask fp_mask(const LabelMask& gt, const LabelMask& pred, Label label) {
    require_same_shape(gt, pred);
    std::vector<Label> out(gt.size());
    simd::active_kernels().fp_mask(gt.labels().data(), pred.labels().data(), gt.size(), label,
                                   out.data());
    return LabelMask(gt.width(), gt.height(), std::move(out));
}

std::size_t count_label(const LabelMask& mask, Label label) {
    return simd::count_equal(mask.labels(), label);
}

BoundarySet boundary(const LabelMask& mask, Label label) {
    if (label == 0) throw std::invalid_argument("boundary: label must be > 0");
    BoundarySet out;
    out.label = label;
    auto outside = [&](int r, int c) { return !mask.contains(r, c) || mask.at(r, c) != label; };
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            if (mask.at(r, c) != label) continue;
            if (outside(r - 1, c) || outside(r + 1, c) || outside(r, c - 1) || outside(r, c + 1)) {
                out.points.push_back({r, c});
            }
        }
    }
    return out;
}

}  // namespace segeval
