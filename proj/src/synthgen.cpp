#include "segeval/synthgen.hpp"

#include <array>
#include <random>
#include <stdexcept>
#include <string>

namespace segeval::synth {
namespace {

struct Rect {
    int row;
    int col;
    int height;
    int width;
};

struct Disc {
    int row;
    int col;
    int radius_sq;
};

// Only raw engine output is used: std::mt19937_64 is fully specified, the
// standard distributions are not.
class Jitter {
public:
    explicit Jitter(std::uint64_t seed) : engine_(seed) {}
    int next(int span) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(span)); }
    int centered(int reach) { return next(2 * reach + 1) - reach; }

private:
    std::mt19937_64 engine_;
};

void paint_disc(MaskBuilder& m, const Disc& d) {
    for (int r = 0; r < m.height(); ++r) {
        for (int c = 0; c < m.width(); ++c) {
            const int dr = r - d.row;
            const int dc = c - d.col;
            if (dr * dr + dc * dc <= d.radius_sq) m.set(r, c, 1);
        }
    }
}

// First `count` pixels of the rectangle in raster order.
void paint_rect_prefix(MaskBuilder& m, const Rect& rect, std::uint64_t count) {
    for (int r = 0; r < rect.height && count > 0; ++r) {
        for (int c = 0; c < rect.width && count > 0; ++c, --count) {
            m.set(rect.row + r, rect.col + c, 1);
        }
    }
}

constexpr int kMultisegmentJitter = 4;
constexpr std::array<Rect, 3> kMultisegmentRects{{
    {2, 2, 10, 15},  // 150
    {2, 21, 5, 6},   // 30
    {2, 31, 2, 5},   // 10
}};

constexpr int kLargeRadius = 32;
constexpr int kSmallRadius = 6;
constexpr int kMultisizeJitter = 2;

ScenarioPair rings(const ScenarioSpec& spec) {
    Jitter jitter(spec.seed);
    const int row = spec.height / 2 + jitter.centered(2);
    const int col = spec.width / 2 + jitter.centered(2);
    const int inner = spec.scenario == Scenario::RingsUnder ? kRingRadius - spec.ring_offset
                                                             : kRingRadius + spec.ring_offset;
    MaskBuilder gt(spec.width, spec.height);
    MaskBuilder pred(spec.width, spec.height);
    paint_disc(gt, {row, col, kRingRadius * kRingRadius});
    paint_disc(pred, {row, col, inner * inner});
    return {std::move(gt).build(), std::move(pred).build()};
}

ScenarioPair multisegment(const ScenarioSpec& spec) {
    Jitter jitter(spec.seed);
    const auto& cover = spec.scenario == Scenario::MultisegmentE ? kMultisegmentCoverE
                                                                   : kMultisegmentCoverF;
    MaskBuilder gt(spec.width, spec.height);
    MaskBuilder pred(spec.width, spec.height);
    for (std::size_t i = 0; i < kMultisegmentRects.size(); ++i) {
        Rect rect = kMultisegmentRects[i];
        rect.row += jitter.next(kMultisegmentJitter + 1);
        paint_rect_prefix(gt, rect, kMultisegmentAreas[i]);
        paint_rect_prefix(pred, rect, cover[i]);
    }
    return {std::move(gt).build(), std::move(pred).build()};
}

ScenarioPair multisize(const ScenarioSpec& spec) {
    Jitter jitter(spec.seed);
    const Disc large{64 + jitter.centered(kMultisizeJitter), 48 + jitter.centered(kMultisizeJitter),
                     kLargeRadius * kLargeRadius};
    std::array<Disc, 3> small{};
    const std::array<int, 3> rows{24, 64, 104};
    for (std::size_t i = 0; i < small.size(); ++i) {
        small[i] = {rows[i] + jitter.centered(kMultisizeJitter), 104 + jitter.centered(kMultisizeJitter),
                    kSmallRadius * kSmallRadius};
    }

    MaskBuilder gt(spec.width, spec.height);
    paint_disc(gt, large);
    for (const Disc& d : small) paint_disc(gt, d);

    MaskBuilder pred(spec.width, spec.height);
    switch (spec.scenario) {
        case Scenario::MultisizeB:
            // Large disc displaced by 20 rows, only the first small disc found.
            paint_disc(pred, {large.row + 20, large.col, large.radius_sq});
            paint_disc(pred, small[0]);
            break;
        case Scenario::MultisizeC:
            paint_disc(pred, large);
            paint_disc(pred, small[0]);
            paint_disc(pred, small[1]);
            break;
        case Scenario::MultisizeD:
            paint_disc(pred, {large.row, large.col, (kLargeRadius - 1) * (kLargeRadius - 1)});
            for (const Disc& d : small) paint_disc(pred, {d.row, d.col, 30});
            break;
        default:
            break;
    }
    return {std::move(gt).build(), std::move(pred).build()};
}

}  // namespace

std::string_view scenario_name(Scenario s) noexcept {
    switch (s) {
        case Scenario::RingsUnder: return "rings-under";
        case Scenario::RingsOver: return "rings-over";
        case Scenario::MultisegmentE: return "multisegment-e";
        case Scenario::MultisegmentF: return "multisegment-f";
        case Scenario::MultisizeB: return "multisize-b";
        case Scenario::MultisizeC: return "multisize-c";
        case Scenario::MultisizeD: return "multisize-d";
    }
    return "unknown";
}

const std::vector<Scenario>& all_scenarios() {
    static const std::vector<Scenario> all{
        Scenario::RingsUnder,  Scenario::RingsOver,  Scenario::MultisegmentE, Scenario::MultisegmentF,
        Scenario::MultisizeB, Scenario::MultisizeC, Scenario::MultisizeD,
    };
    return all;
}

Scenario scenario_from_name(std::string_view name) {
    for (Scenario s : all_scenarios()) {
        if (scenario_name(s) == name) return s;
    }
    std::string valid;
    for (Scenario s : all_scenarios()) {
        if (!valid.empty()) valid += ", ";
        valid += scenario_name(s);
    }
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "' (valid: " + valid + ")");
}

std::pair<int, int> minimum_canvas(const ScenarioSpec& spec) {
    switch (spec.scenario) {
        case Scenario::RingsUnder:
        case Scenario::RingsOver: {
            const int side = 2 * (kRingRadius + spec.ring_offset + 3) + 1;
            return {side, side};
        }
        case Scenario::MultisegmentE:
        case Scenario::MultisegmentF:
            return {38, 2 + kMultisegmentJitter + 10 + 2};
        case Scenario::MultisizeB:
        case Scenario::MultisizeC:
        case Scenario::MultisizeD:
            return {128, 128};
    }
    return {0, 0};
}

ScenarioSpec default_spec(Scenario s, std::uint64_t seed) {
    ScenarioSpec spec;
    spec.scenario = s;
    spec.seed = seed;
    switch (s) {
        case Scenario::RingsUnder:
        case Scenario::RingsOver:
            spec.width = spec.height = 96;
            break;
        case Scenario::MultisegmentE:
        case Scenario::MultisegmentF:
            spec.width = 48;
            spec.height = 24;
            break;
        default:
            spec.width = spec.height = 128;
            break;
    }
    return spec;
}

ScenarioPair generate(const ScenarioSpec& spec) {
    const bool ring = spec.scenario == Scenario::RingsUnder || spec.scenario == Scenario::RingsOver;
    if (ring && (spec.ring_offset < 1 || spec.ring_offset >= kRingRadius)) {
        throw std::invalid_argument("ring offset must be in [1, " + std::to_string(kRingRadius) + ")");
    }
    const auto [min_w, min_h] = minimum_canvas(spec);
    if (spec.width < min_w || spec.height < min_h) {
        throw std::invalid_argument("canvas too small for " + std::string(scenario_name(spec.scenario)) +
                                    ": need at least " + std::to_string(min_w) + "x" +
                                    std::to_string(min_h) + ", got " + std::to_string(spec.width) +
                                    "x" + std::to_string(spec.height));
    }
    switch (spec.scenario) {
        case Scenario::RingsUnder:
        case Scenario::RingsOver:
            return rings(spec);
        case Scenario::MultisegmentE:
        case Scenario::MultisegmentF:
            return multisegment(spec);
        default:
            return multisize(spec);
    }
}

}  // namespace segeval::synth
