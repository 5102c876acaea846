#pragma once

// Cohort-level analyses over report CSVs: good-vs-bad significance testing and
// deviation from mean opinion scores.

#include "segeval/stats.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace segeval::analysis {

/// Header plus rows of a CSV file (RFC 4180 quoting).
class CsvTable {
public:
    static CsvTable parse(std::string_view text);
    static CsvTable load(const std::string& path);

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    /// Column index or nullopt.
    std::optional<std::size_t> column(std::string_view name) const;
    /// Throws std::runtime_error naming the missing column.
    std::size_t require_column(std::string_view name) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct CompareOptions {
    std::vector<std::string> metrics{"dice", "ssegep"};
    std::string label = "ALL";
    stats::QualityThresholds thresholds;
    double alpha = stats::kDefaultAlpha;
};

struct SignificanceRow {
    std::string metric;
    std::size_t n_good = 0;
    std::size_t n_bad = 0;
    std::size_t n_unclassified = 0;
    double mean_good = 0.0;
    double mean_bad = 0.0;
    stats::TestResult welch;
    std::optional<stats::TestResult> levene;  // nullopt when degenerate
};

struct CompareResult {
    std::vector<SignificanceRow> rows;
    std::vector<std::string> warnings;
};

/// Partitions report rows of `options.label` by detection rates and runs
/// Welch's test (and Levene's) on each metric, good group first. Throws
/// std::runtime_error("insufficient samples ...") when either bucket holds
/// fewer than two rows.
CompareResult compare_report(const CsvTable& report, const CompareOptions& options);

/// Same test on explicit groups; used by compare_report.
SignificanceRow compare_groups(std::string metric, const std::vector<double>& good, const std::vector<double>& bad,
                               double alpha);

struct MosRow {
    std::string metric;
    std::size_t n = 0;
    double deviation = 0.0;
};

struct MosResult {
    std::vector<MosRow> rows;
    std::vector<std::string> warnings;
};

/// Mean |metric - MOS| per metric over the report's `label` rows. The MOS
/// table has columns `stem,mos`. Throws std::runtime_error listing stems
/// without a MOS entry.
MosResult mos_report(const CsvTable& report, const CsvTable& mos, const std::vector<std::string>& metrics,
                     const std::string& label = "ALL");

std::string render_compare_csv(const CompareResult& result, bool full_precision);
std::string render_compare_json(const CompareResult& result, bool full_precision);
std::string render_mos_csv(const MosResult& result, bool full_precision);
std::string render_mos_json(const MosResult& result, bool full_precision);

}  // namespace segeval::analysis
