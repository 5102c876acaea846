#pragma once

// Per-pair evaluation reports and their JSON/CSV forms.
//
// CSV schema (stable interchange format):
//   stem,label,tp,fp,fn,tn,<metric>...
// One row per requested label plus a pooled row with label `ALL`. Pooled
// counts are sums of the per-label counts; pooled classic metrics are computed
// from those sums. generalized_dice appears only on ALL rows, hausdorff only on
// per-label rows. Batch output appends summary rows with stem `__mean__` and
// empty count cells.

#include "segeval/mask.hpp"
#include "segeval/ssegep.hpp"
#include "segeval/stats.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace segeval::report {

enum class MetricId {
    Accuracy,
    Sensitivity,
    Specificity,
    Ppv,
    Iou,
    Dice,
    Mcc,
    MccRescaled,
    Hausdorff,
    GeneralizedDice,
    Ssegep,
};

std::string_view metric_name(MetricId id) noexcept;
/// Throws std::invalid_argument on unknown names.
MetricId metric_from_name(std::string_view name);
const std::vector<MetricId>& all_metrics();
/// "all" or a comma-separated list; result follows canonical order.
std::vector<MetricId> parse_metric_list(std::string_view text);

bool applies_to_label(MetricId id) noexcept;
bool applies_to_pooled(MetricId id) noexcept;

enum class OutputFormat { Json, Csv };

inline constexpr std::string_view kPooledLabel = "ALL";
inline constexpr std::string_view kSummaryStem = "__mean__";

struct RunConfig {
    std::vector<MetricId> metrics = all_metrics();
    std::vector<Label> labels{1};
    Connectivity connectivity = Connectivity::Eight;
    stats::QualityThresholds thresholds;
    OutputFormat format = OutputFormat::Json;
    bool full_precision = false;
    int threads = 1;

    void validate() const;
};

struct MetricEntry {
    MetricId id = MetricId::Dice;
    std::optional<double> value;  // nullopt: not computable (e.g. empty boundary)
    bool defined = true;
};

struct ScopeReport {
    std::string label;  // label ID or "ALL"
    ConfusionCounts counts;
    std::vector<MetricEntry> metrics;

    const MetricEntry* find(MetricId id) const;
};

struct SsegepSummary {
    std::size_t n_segments = 0;
    double weighted_tp = 0.0;
    double weighted_fp = 0.0;
    bool vacuous = false;
};

struct MetricReport {
    std::string stem;
    std::string gt_path;
    std::string pred_path;
    std::vector<ScopeReport> per_label;
    ScopeReport pooled;
    std::optional<SsegepSummary> ssegep;
    std::vector<std::string> warnings;
};

/// Evaluates in-memory masks.
MetricReport evaluate_masks(const LabelMask& gt, const LabelMask& pred, const RunConfig& cfg,
                            std::string stem = {});

/// Loads both files; load errors propagate with the file path in the message.
MetricReport evaluate_pair(const std::filesystem::path& gt_path, const std::filesystem::path& pred_path,
                           const RunConfig& cfg);

struct BatchResult {
    std::vector<MetricReport> reports;  // sorted by stem
    std::vector<ScopeReport> summary;   // per-label means then ALL
    std::vector<std::string> warnings;  // unmatched stems etc.
};

/// Pairs files by stem across the two directories. Throws std::runtime_error
/// when no stem is shared.
BatchResult evaluate_batch(const std::filesystem::path& gt_dir, const std::filesystem::path& pred_dir,
                           const RunConfig& cfg);

/// Batch over explicit pairs (stem, gt, pred); output order follows the input.
std::vector<MetricReport> evaluate_pairs(
    const std::vector<std::tuple<std::string, std::filesystem::path, std::filesystem::path>>& pairs,
    const RunConfig& cfg);

std::vector<ScopeReport> summarize(const std::vector<MetricReport>& reports, const RunConfig& cfg);

/// SEGEVAL_THREADS when set, else `requested`; never below 1.
int effective_parallelism(int requested);

// ---- serialization ---------------------------------------------------------

std::string format_value(double v, bool full_precision);

std::string to_json(const MetricReport& report, const RunConfig& cfg);
std::string to_json(const BatchResult& batch, const RunConfig& cfg);
std::string to_csv(const std::vector<MetricReport>& reports, const std::vector<ScopeReport>& summary,
                   const RunConfig& cfg);

}  // namespace segeval::report
