#include "segeval/mask.hpp"
#include "segeval/synthgen.hpp"

#include "oracle/brute.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

using namespace segeval;

namespace {

std::vector<std::vector<Point>> pixel_sets(const std::vector<Segment>& segs) {
    std::vector<std::vector<Point>> out;
    for (const auto& s : segs) out.push_back(s.pixels);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<Point>> pixel_sets(const std::vector<oracle::Blob>& blobs) {
    std::vector<std::vector<Point>> out;
    for (const auto& b : blobs) out.push_back(b.pixels);
    std::sort(out.begin(), out.end());
    return out;
}

LabelMask square(int w, int h, int r0, int c0, int side, Label l = 1) {
    MaskBuilder b(w, h);
    for (int r = r0; r < r0 + side; ++r) {
        for (int c = c0; c < c0 + side; ++c) b.set(r, c, l);
    }
    return std::move(b).build();
}

}  // namespace

TEST_CASE("LabelMask construction", "[mask]") {
    REQUIRE_THROWS_AS(LabelMask(0, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(LabelMask(2, 2, std::vector<Label>{1, 2, 3}), std::invalid_argument);

    const LabelMask m(3, 2, {0, 1, 2, 3, 4, 5});
    CHECK(m.at(1, 2) == 5);
    CHECK(m.size() == 6);
    CHECK(m.shape_string() == "3x2");
    CHECK_FALSE(m.contains(2, 0));
}

TEST_CASE("connectivity parsing", "[mask]") {
    CHECK(connectivity_from_int(4) == Connectivity::Four);
    CHECK(connectivity_from_int(8) == Connectivity::Eight);
    CHECK_THROWS_AS(connectivity_from_int(6), std::invalid_argument);
}

TEST_CASE("connected_components examples", "[mask][components]") {
    SECTION("single centre pixel") {
        const auto m = oracle::from_rows({{0, 0, 0}, {0, 1, 0}, {0, 0, 0}});
        const auto segs = connected_components(m, 1);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].area() == 1);
        CHECK(segs[0].bbox == BoundingBox{1, 1, 1, 1});
    }
    SECTION("diagonal pair splits under 4-connectivity only") {
        const auto m = oracle::from_rows({{1, 0}, {0, 1}});
        const auto four = connected_components(m, 1, Connectivity::Four);
        REQUIRE(four.size() == 2);
        CHECK(four[0].area() == 1);
        CHECK(four[1].area() == 1);
        const auto eight = connected_components(m, 1, Connectivity::Eight);
        REQUIRE(eight.size() == 1);
        CHECK(eight[0].area() == 2);
    }
    SECTION("multisegment scenario areas") {
        const auto pair = synth::generate(synth::default_spec(synth::Scenario::MultisegmentE));
        const auto segs = connected_components(pair.gt, 1);
        REQUIRE(segs.size() == 3);
        std::multiset<std::size_t> areas;
        for (const auto& s : segs) areas.insert(s.area());
        CHECK(areas == std::multiset<std::size_t>{150, 30, 10});
    }
    SECTION("absent label yields nothing") {
        CHECK(connected_components(LabelMask(4, 4), 3).empty());
    }
    SECTION("label 0 rejected") {
        CHECK_THROWS_AS(connected_components(LabelMask(4, 4), 0), std::invalid_argument);
    }
    SECTION("U shape merges through the bottom row") {
        const auto m = oracle::from_rows({{1, 0, 1}, {1, 0, 1}, {1, 1, 1}});
        CHECK(connected_components(m, 1, Connectivity::Four).size() == 1);
    }
}

TEST_CASE("connected_components ordering is by bounding-box corner", "[mask][components]") {
    // Second blob starts further right on row 0 but its bbox reaches column 0.
    const auto m = oracle::from_rows({
        {0, 0, 0, 1},
        {0, 0, 0, 1},
        {1, 0, 0, 0},
        {1, 1, 1, 1},
    });
    const auto segs = connected_components(m, 1, Connectivity::Four);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].bbox.min_row == 0);
    CHECK(segs[0].bbox.min_col == 3);
    CHECK(segs[1].bbox.min_row == 2);

    const auto map = label_components(m, 1, Connectivity::Four);
    CHECK(map.ids[m.index(0, 3)] == 1);
    CHECK(map.ids[m.index(3, 0)] == 2);
    CHECK(map.ids[m.index(0, 0)] == 0);
}

TEST_CASE("connected_components match flood fill on random masks", "[mask][components][property]") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 300; ++trial) {
        const int w = std::uniform_int_distribution<int>(1, 40)(rng);
        const int h = std::uniform_int_distribution<int>(1, 40)(rng);
        const double density = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        const LabelMask m = oracle::random_mask(rng, w, h, 3, density);
        for (int conn : {4, 8}) {
            for (Label l = 1; l <= 3; ++l) {
                const auto segs = connected_components(m, l, connectivity_from_int(conn));
                REQUIRE(pixel_sets(segs) == pixel_sets(oracle::flood_fill_segments(m, l, conn)));

                // Partition of the label's pixels, and sorted by bbox corner.
                std::size_t total = 0;
                for (const auto& s : segs) {
                    total += s.area();
                    for (const Point& p : s.pixels) REQUIRE(m.at(p.row, p.col) == l);
                }
                CHECK(total == count_label(m, l));
                CHECK(std::is_sorted(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
                    return std::pair(a.bbox.min_row, a.bbox.min_col) < std::pair(b.bbox.min_row, b.bbox.min_col);
                }));
            }
        }
    }
}

TEST_CASE("confusion_counts examples", "[mask][confusion]") {
    std::mt19937_64 rng(7);
    const LabelMask a = oracle::random_mask(rng, 17, 9, 2, 0.5);
    const ConfusionCounts same = confusion_counts(a, a, 1);
    CHECK(same.fp == 0);
    CHECK(same.fn == 0);

    // Disjoint regions of 5 and 7 pixels on a 10x10 grid.
    MaskBuilder gt(10, 10);
    MaskBuilder pred(10, 10);
    for (int c = 0; c < 5; ++c) gt.set(0, c, 1);
    for (int c = 0; c < 7; ++c) pred.set(5, c, 1);
    const ConfusionCounts c = confusion_counts(gt.build(), pred.build(), 1);
    CHECK(c == ConfusionCounts{0, 7, 5, 88});

    const auto e = synth::generate(synth::default_spec(synth::Scenario::MultisegmentE));
    CHECK(confusion_counts(e.gt, e.pred, 1) == ConfusionCounts{135, 0, 55, e.gt.size() - 190});
}

TEST_CASE("confusion_counts dimension mismatch names both shapes", "[mask][confusion]") {
    try {
        confusion_counts(LabelMask(3, 4), LabelMask(4, 3), 1);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("3x4") != std::string::npos);
        CHECK(what.find("4x3") != std::string::npos);
    }
}

TEST_CASE("confusion counts agree with per-pixel count and cover the image", "[mask][confusion][property]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int w = std::uniform_int_distribution<int>(1, 70)(rng);
        const int h = std::uniform_int_distribution<int>(1, 30)(rng);
        const LabelMask gt = oracle::random_mask(rng, w, h, 3, 0.6);
        const LabelMask pred = oracle::perturb(rng, gt, 3, 0.3);
        std::uint64_t positives = 0;
        for (Label l = 0; l <= 3; ++l) {
            const ConfusionCounts c = confusion_counts(gt, pred, l);
            const oracle::Counts o = oracle::count_pixels(gt, pred, l);
            REQUIRE(c.tp == o.tp);
            REQUIRE(c.fp == o.fp);
            REQUIRE(c.fn == o.fn);
            REQUIRE(c.tn == o.tn);
            REQUIRE(c.total() == gt.size());
            positives += c.tp + c.fn;
        }
        CHECK(positives == gt.size());
    }
}

TEST_CASE("fp_mask", "[mask][fp]") {
    SECTION("identical masks give an empty FP mask") {
        const LabelMask a = square(8, 8, 2, 2, 3);
        CHECK(count_label(fp_mask(a, a, 1), 1) == 0);
    }
    SECTION("one-pixel dilation leaves exactly the ring") {
        const LabelMask gt = square(12, 12, 4, 4, 3);
        const LabelMask pred = square(12, 12, 3, 3, 5);
        const LabelMask fp = fp_mask(gt, pred, 1);
        CHECK(count_label(fp, 1) == 16);
        for (int r = 0; r < 12; ++r) {
            for (int c = 0; c < 12; ++c) {
                const bool ring = pred.at(r, c) == 1 && gt.at(r, c) != 1;
                CHECK((fp.at(r, c) == 1) == ring);
            }
        }
    }
    SECTION("isolated spurious blob") {
        const LabelMask gt = square(10, 10, 0, 0, 3);
        MaskBuilder b(gt);
        b.set(8, 8, 1);
        b.set(8, 9, 1);
        const LabelMask fp = fp_mask(gt, b.build(), 1);
        CHECK(count_label(fp, 1) == 2);
        CHECK(fp.at(8, 8) == 1);
        CHECK(fp.at(8, 9) == 1);
    }
    SECTION("shape mismatch") {
        CHECK_THROWS_AS(fp_mask(LabelMask(2, 2), LabelMask(2, 3), 1), std::invalid_argument);
    }
}

TEST_CASE("fp_mask both ways partitions the per-label XOR", "[mask][fp][property]") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const LabelMask a = oracle::random_mask(rng, 33, 21, 2, 0.5);
        const LabelMask b = oracle::perturb(rng, a, 2, 0.4);
        for (Label l = 1; l <= 2; ++l) {
            const LabelMask ab = fp_mask(a, b, l);
            const LabelMask ba = fp_mask(b, a, l);
            CHECK(count_label(ab, 1) == confusion_counts(a, b, l).fp);
            for (std::size_t i = 0; i < a.size(); ++i) {
                REQUIRE_FALSE((ab[i] == 1 && ba[i] == 1));
                const bool x = (a[i] == l) != (b[i] == l);
                REQUIRE(x == (ab[i] == 1 || ba[i] == 1));
            }
        }
    }
}

TEST_CASE("boundary examples", "[mask][boundary]") {
    SECTION("single pixel") {
        const auto m = oracle::from_rows({{0, 0, 0}, {0, 2, 0}, {0, 0, 0}});
        const BoundarySet b = boundary(m, 2);
        REQUIRE(b.points.size() == 1);
        CHECK(b.points[0] == Point{1, 1});
    }
    SECTION("filled 4x4 square keeps the 12 perimeter pixels") {
        const BoundarySet b = boundary(square(10, 10, 3, 3, 4), 1);
        CHECK(b.points.size() == 12);
        for (const Point& p : b.points) {
            CHECK((p.row == 3 || p.row == 6 || p.col == 3 || p.col == 6));
        }
    }
    SECTION("disc of radius 10") {
        MaskBuilder m(31, 31);
        for (int r = 0; r < 31; ++r) {
            for (int c = 0; c < 31; ++c) {
                if ((r - 15) * (r - 15) + (c - 15) * (c - 15) <= 100) m.set(r, c, 1);
            }
        }
        const BoundarySet b = boundary(m.build(), 1);
        REQUIRE_FALSE(b.empty());
        for (const Point& p : b.points) {
            const double d = std::hypot(p.row - 15.0, p.col - 15.0);
            CHECK(d >= 9.0);
            CHECK(d <= 10.0);
        }
    }
    SECTION("image border counts as outside") {
        const BoundarySet b = boundary(oracle::from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}), 1);
        CHECK(b.points.size() == 8);
    }
    SECTION("absent label") {
        CHECK(boundary(LabelMask(5, 5), 1).empty());
    }
}

TEST_CASE("boundary removal leaves only interior pixels", "[mask][boundary][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const LabelMask m = oracle::random_blobs(rng, 30, 25, 2, 6);
        for (Label l = 1; l <= 2; ++l) {
            const BoundarySet b = boundary(m, l);
            std::set<Point> edge(b.points.begin(), b.points.end());
            for (const Point& p : b.points) REQUIRE(m.at(p.row, p.col) == l);
            for (int r = 0; r < m.height(); ++r) {
                for (int c = 0; c < m.width(); ++c) {
                    if (m.at(r, c) != l || edge.contains({r, c})) continue;
                    for (auto [dr, dc] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
                        REQUIRE(m.contains(r + dr, c + dc));
                        REQUIRE(m.at(r + dr, c + dc) == l);
                    }
                }
            }
        }
    }
}
