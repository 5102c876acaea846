#pragma once

// Label masks and the pixel-level primitives every metric is built on:
// connected components, confusion counts, FP masks and boundaries.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace segeval {

using Label = std::uint8_t;

enum class Connectivity : int { Four = 4, Eight = 8 };

/// Parses 4 or 8; anything else throws std::invalid_argument.
Connectivity connectivity_from_int(int value);

struct Point {
    int row = 0;
    int col = 0;
    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

/// Immutable row-major grid of 8-bit label IDs, 0 = background.
class LabelMask {
public:
    /// All-background mask.
    LabelMask(int width, int height);
    /// Takes ownership of `labels`; size must equal width * height.
    LabelMask(int width, int height, std::vector<Label> labels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return labels_.size(); }

    Label at(int row, int col) const { return labels_[index(row, col)]; }
    Label operator[](std::size_t i) const noexcept { return labels_[i]; }
    std::span<const Label> labels() const noexcept { return labels_; }

    bool contains(int row, int col) const noexcept {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }
    std::size_t index(int row, int col) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    bool same_shape(const LabelMask& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }
    std::string shape_string() const;

    friend bool operator==(const LabelMask&, const LabelMask&) = default;

private:
    int width_;
    int height_;
    std::vector<Label> labels_;
};

/// Mutable builder for masks; freeze with build().
class MaskBuilder {
public:
    MaskBuilder(int width, int height);
    explicit MaskBuilder(const LabelMask& from);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    void set(int row, int col, Label value);
    Label get(int row, int col) const;
    LabelMask build() const&;
    LabelMask build() &&;

private:
    int width_;
    int height_;
    std::vector<Label> labels_;
};

struct BoundingBox {
    int min_row = 0;
    int min_col = 0;
    int max_row = 0;
    int max_col = 0;
    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// One maximal connected component of a single label.
struct Segment {
    Label label = 0;
    std::vector<Point> pixels;  // row-major order
    BoundingBox bbox;

    std::size_t area() const noexcept { return pixels.size(); }
};

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct BoundarySet {
    Label label = 0;
    std::vector<Point> points;  // row-major order

    bool empty() const noexcept { return points.empty(); }
};

/// Throws std::invalid_argument naming both shapes when they differ.
void require_same_shape(const LabelMask& a, const LabelMask& b);

/// Maximal components of `label`, sorted by (bbox.min_row, bbox.min_col).
std::vector<Segment> connected_components(const LabelMask& mask, Label label,
                                          Connectivity connectivity = Connectivity::Eight);

/// Per-pixel component ids for `label` (0 = not in label, 1..n in the same order
/// as connected_components). Used where a pass over the grid beats pixel lists.
struct ComponentMap {
    std::vector<std::uint32_t> ids;
    std::vector<Segment> segments;
};
ComponentMap label_components(const LabelMask& mask, Label label,
                              Connectivity connectivity = Connectivity::Eight);

ConfusionCounts confusion_counts(const LabelMask& gt, const LabelMask& pred, Label label);

/// Binary mask of pixels predicted as `label` where the ground truth is not `label`.
LabelMask fp_mask(const LabelMask& gt, const LabelMask& pred, Label label);

std::size_t count_label(const LabelMask& mask, Label label);

/// Region pixels of `label` with at least one 4-neighbour outside the region;
/// the image border counts as outside.
BoundarySet boundary(const LabelMask& mask, Label label);

}  // namespace segeval
