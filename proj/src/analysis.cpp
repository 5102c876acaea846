#include "segeval/analysis.hpp"

#include "segeval/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace segeval::analysis {
namespace {

std::vector<std::vector<std::string>> parse_records(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; any = true; break;
            case ',': record.push_back(std::move(field)); field.clear(); any = true; break;
            case '\r': break;
            case '\n':
                if (any || !field.empty()) {
                    record.push_back(std::move(field));
                    records.push_back(std::move(record));
                }
                field.clear();
                record.clear();
                any = false;
                break;
            default: field += c; any = true; break;
        }
    }
    if (quoted) throw std::runtime_error("csv: unterminated quoted field");
    if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

double parse_number(const std::string& cell, const std::string& context) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw std::runtime_error(context + ": not a number: '" + cell + "'");
    return v;
}

std::uint64_t parse_count(const std::string& cell, const std::string& context) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw std::runtime_error(context + ": not a pixel count: '" + cell + "'");
    }
    return v;
}

// Rows of the requested label, excluding batch summary rows.
std::vector<const std::vector<std::string>*> scope_rows(const CsvTable& t, const std::string& label) {
    const std::size_t stem = t.require_column("stem");
    const std::size_t lab = t.require_column("label");
    std::vector<const std::vector<std::string>*> out;
    for (const auto& row : t.rows()) {
        if (row[stem] == report::kSummaryStem) continue;
        if (row[lab] == label) out.push_back(&row);
    }
    return out;
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::string num(double v, bool full) { return report::format_value(v, full); }

nlohmann::json json_num(double v, bool full) { return std::strtod(num(v, full).c_str(), nullptr); }

}  // namespace

CsvTable CsvTable::parse(std::string_view text) {
    auto records = parse_records(text);
    if (records.empty()) throw std::runtime_error("csv: missing header");
    CsvTable t;
    t.header_ = std::move(records.front());
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].size() != t.header_.size()) {
            throw std::runtime_error("csv: row " + std::to_string(i + 1) + " has " + std::to_string(records[i].size()) +
                                     " fields, header has " + std::to_string(t.header_.size()));
        }
        t.rows_.push_back(std::move(records[i]));
    }
    return t;
}

CsvTable CsvTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
    if (auto c = column(name)) return *c;
    throw std::runtime_error("csv: missing column '" + std::string(name) + "'");
}

SignificanceRow compare_groups(std::string metric, const std::vector<double>& good, const std::vector<double>& bad,
                               double alpha) {
    SignificanceRow row;
    row.metric = std::move(metric);
    row.n_good = good.size();
    row.n_bad = bad.size();
    if (good.size() < 2 || bad.size() < 2) {
        throw std::runtime_error("insufficient samples for " + row.metric + ": " + std::to_string(good.size()) +
                                 " good, " + std::to_string(bad.size()) + " bad (need at least 2 each)");
    }
    row.mean_good = mean_of(good);
    row.mean_bad = mean_of(bad);
    row.welch = stats::welch_t_test(good, bad, alpha);
    try {
        row.levene = stats::levene_test(good, bad, alpha);
    } catch (const std::invalid_argument&) {
        row.levene.reset();
    }
    return row;
}

CompareResult compare_report(const CsvTable& report, const CompareOptions& options) {
    options.thresholds.validate();
    if (options.metrics.empty()) throw std::invalid_argument("compare: no metric given");

    const std::size_t stem = report.require_column("stem");
    const std::size_t tp = report.require_column("tp");
    const std::size_t fp = report.require_column("fp");
    const std::size_t fn = report.require_column("fn");
    const std::size_t tn = report.require_column("tn");
    std::vector<std::size_t> metric_cols;
    for (const auto& m : options.metrics) metric_cols.push_back(report.require_column(m));

    const auto rows = scope_rows(report, options.label);
    std::vector<ConfusionCounts> counts;
    counts.reserve(rows.size());
    for (const auto* row : rows) {
        const std::string ctx = "row '" + (*row)[stem] + "'";
        counts.push_back({parse_count((*row)[tp], ctx), parse_count((*row)[fp], ctx), parse_count((*row)[fn], ctx),
                          parse_count((*row)[tn], ctx)});
    }
    const stats::Partition part = stats::partition_by_quality(counts, options.thresholds);

    CompareResult result;
    for (std::size_t m = 0; m < options.metrics.size(); ++m) {
        auto collect = [&](const std::vector<std::size_t>& idx) {
            std::vector<double> values;
            for (std::size_t i : idx) {
                const std::string& cell = (*rows[i])[metric_cols[m]];
                if (cell.empty()) {
                    result.warnings.push_back(options.metrics[m] + ": no value for '" + (*rows[i])[stem] + "', skipped");
                    continue;
                }
                values.push_back(parse_number(cell, "row '" + (*rows[i])[stem] + "'"));
            }
            return values;
        };
        SignificanceRow row = compare_groups(options.metrics[m], collect(part.good), collect(part.bad), options.alpha);
        row.n_unclassified = part.unclassified.size();
        result.rows.push_back(std::move(row));
    }
    return result;
}

MosResult mos_report(const CsvTable& report, const CsvTable& mos, const std::vector<std::string>& metrics,
                     const std::string& label) {
    if (metrics.empty()) throw std::invalid_argument("mos: no metric given");
    const std::size_t mos_stem = mos.require_column("stem");
    const std::size_t mos_value = mos.require_column("mos");
    std::map<std::string, double> mos_by_stem;
    for (const auto& row : mos.rows()) {
        if (!mos_by_stem.emplace(row[mos_stem], parse_number(row[mos_value], "mos '" + row[mos_stem] + "'")).second) {
            throw std::runtime_error("mos: duplicate stem '" + row[mos_stem] + "'");
        }
    }

    const std::size_t stem = report.require_column("stem");
    const auto rows = scope_rows(report, label);
    if (rows.empty()) throw std::runtime_error("mos: report has no rows with label " + label);

    std::vector<std::string> missing;
    for (const auto* row : rows) {
        if (!mos_by_stem.contains((*row)[stem])) missing.push_back((*row)[stem]);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
        throw std::runtime_error("mos: no MOS entry for stems: " + list);
    }

    MosResult result;
    for (const auto& metric : metrics) {
        const std::size_t col = report.require_column(metric);
        std::vector<double> values;
        std::vector<double> opinions;
        for (const auto* row : rows) {
            const std::string& cell = (*row)[col];
            if (cell.empty()) {
                result.warnings.push_back(metric + ": no value for '" + (*row)[stem] + "', skipped");
                continue;
            }
            values.push_back(parse_number(cell, "row '" + (*row)[stem] + "'"));
            opinions.push_back(mos_by_stem.at((*row)[stem]));
        }
        if (values.empty()) throw std::runtime_error("mos: metric " + metric + " has no values");
        result.rows.push_back({metric, values.size(), stats::mos_deviation(values, opinions)});
    }
    return result;
}

std::string render_compare_csv(const CompareResult& result, bool full) {
    std::string out = "metric,n_good,n_bad,n_unclassified,mean_good,mean_bad,t,dof,p_value,alpha,reject,levene_w,levene_p\n";
    for (const auto& r : result.rows) {
        out += r.metric + "," + std::to_string(r.n_good) + "," + std::to_string(r.n_bad) + "," +
               std::to_string(r.n_unclassified) + "," + num(r.mean_good, full) + "," + num(r.mean_bad, full) + "," +
               num(r.welch.statistic, full) + "," + num(r.welch.dof, full) + "," +
               report::format_value(r.welch.p_value, true) + "," + report::format_value(r.welch.alpha, true) + "," +
               (r.welch.rejects() ? "yes" : "no") + ",";
        if (r.levene) out += num(r.levene->statistic, full) + "," + report::format_value(r.levene->p_value, true);
        else out += ",";
        out += '\n';
    }
    return out;
}

std::string render_compare_json(const CompareResult& result, bool full) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        nlohmann::json j{
            {"metric", r.metric},
            {"n_good", r.n_good},
            {"n_bad", r.n_bad},
            {"n_unclassified", r.n_unclassified},
            {"mean_good", json_num(r.mean_good, full)},
            {"mean_bad", json_num(r.mean_bad, full)},
            {"t", json_num(r.welch.statistic, full)},
            {"dof", json_num(r.welch.dof, full)},
            {"p_value", r.welch.p_value},
            {"alpha", r.welch.alpha},
            {"reject", r.welch.rejects()},
        };
        if (r.levene) {
            j["levene"] = {{"w", json_num(r.levene->statistic, full)}, {"p_value", r.levene->p_value}};
        } else {
            j["levene"] = nullptr;
        }
        rows.push_back(std::move(j));
    }
    return nlohmann::json{{"tests", rows}, {"warnings", result.warnings}}.dump(2) + "\n";
}

std::string render_mos_csv(const MosResult& result, bool full) {
    std::string out = "metric,n,mos_deviation\n";
    for (const auto& r : result.rows) out += r.metric + "," + std::to_string(r.n) + "," + num(r.deviation, full) + "\n";
    return out;
}

std::string render_mos_json(const MosResult& result, bool full) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"metric", r.metric}, {"n", r.n}, {"mos_deviation", json_num(r.deviation, full)}});
    }
    return nlohmann::json{{"deviations", rows}, {"warnings", result.warnings}}.dump(2) + "\n";
}

}  // namespace segeval::analysis
