#pragma once

// Deterministic synthetic ground-truth/prediction pairs. Every scenario uses
// label 1; the seed only shifts shape placement, never shape areas.
//
//   rings-under / rings-over   disc of radius 24 vs concentric disc of radius 24 -/+ k
//   multisegment-e / -f        rectangles of 150, 30 and 10 px; prediction covers
//                              (120, 10, 5) / (110, 25, 0) of them, no false positives
//   multisize-b / -c / -d      disc of radius 32 plus three discs of radius 6;
//                              b is a poor prediction, c drops one small disc,
//                              d finds every disc with a thin rim eroded

#include "segeval/mask.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace segeval::synth {

enum class Scenario {
    RingsUnder,
    RingsOver,
    MultisegmentE,
    MultisegmentF,
    MultisizeB,
    MultisizeC,
    MultisizeD,
};

inline constexpr int kRingRadius = 24;
inline constexpr std::uint64_t kMultisegmentAreas[3] = {150, 30, 10};
inline constexpr std::uint64_t kMultisegmentCoverE[3] = {120, 10, 5};
inline constexpr std::uint64_t kMultisegmentCoverF[3] = {110, 25, 0};

struct ScenarioSpec {
    Scenario scenario = Scenario::MultisegmentE;
    int width = 0;
    int height = 0;
    std::uint64_t seed = 0;
    int ring_offset = 5;  // k for the ring scenarios
};

struct ScenarioPair {
    LabelMask gt;
    LabelMask pred;
};

std::string_view scenario_name(Scenario s) noexcept;
/// Throws std::invalid_argument listing valid names.
Scenario scenario_from_name(std::string_view name);
const std::vector<Scenario>& all_scenarios();

/// Spec with the scenario's default canvas.
ScenarioSpec default_spec(Scenario s, std::uint64_t seed = 0);

/// Smallest canvas (width, height) the scenario accepts for this spec.
std::pair<int, int> minimum_canvas(const ScenarioSpec& spec);

/// Throws std::invalid_argument when the canvas is too small or the ring offset
/// is outside [1, kRingRadius).
ScenarioPair generate(const ScenarioSpec& spec);

}  // namespace segeval::synth
