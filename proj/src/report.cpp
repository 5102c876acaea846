#include "segeval/report.hpp"

#include "segeval/io.hpp"
#include "segeval/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace segeval::report {

namespace {

struct MetricInfo {
    MetricId id;
    std::string_view name;
    bool per_label;
    bool pooled;
};

constexpr MetricInfo kMetrics[] = {
    {MetricId::Accuracy, "accuracy", true, true},
    {MetricId::Sensitivity, "sensitivity", true, true},
    {MetricId::Specificity, "specificity", true, true},
    {MetricId::Ppv, "ppv", true, true},
    {MetricId::Iou, "iou", true, true},
    {MetricId::Dice, "dice", true, true},
    {MetricId::Mcc, "mcc", true, true},
    {MetricId::MccRescaled, "mcc_rescaled", true, true},
    {MetricId::Hausdorff, "hausdorff", true, false},
    {MetricId::GeneralizedDice, "generalized_dice", false, true},
    {MetricId::Ssegep, "ssegep", true, true},
};

const MetricInfo& info(MetricId id) {
    return kMetrics[static_cast<std::size_t>(id)];
}

bool selected(const RunConfig& cfg, MetricId id) {
    return std::find(cfg.metrics.begin(), cfg.metrics.end(), id) != cfg.metrics.end();
}

MetricEntry from_value(MetricId id, const MetricValue& v) { return {id, v.value, v.defined}; }

MetricEntry classic(MetricId id, const ConfusionCounts& c) {
    switch (id) {
        case MetricId::Accuracy: return from_value(id, accuracy(c));
        case MetricId::Sensitivity: return from_value(id, sensitivity(c));
        case MetricId::Specificity: return from_value(id, specificity(c));
        case MetricId::Ppv: return from_value(id, ppv(c));
        case MetricId::Iou: return from_value(id, iou(c));
        case MetricId::Dice: return from_value(id, dice(c));
        case MetricId::Mcc: return from_value(id, mcc(c));
        case MetricId::MccRescaled: return from_value(id, mcc_rescaled(c));
        default: break;
    }
    throw std::logic_error("not a confusion-count metric");
}

bool is_classic(MetricId id) {
    return id != MetricId::Hausdorff && id != MetricId::GeneralizedDice && id != MetricId::Ssegep;
}

void note_undefined(const ScopeReport& scope, std::vector<std::string>& warnings) {
    for (const auto& m : scope.metrics) {
        if (!m.defined) {
            warnings.push_back("label " + scope.label + ": " + std::string(metric_name(m.id)) + " undefined");
        }
    }
}

}  // namespace

std::string_view metric_name(MetricId id) noexcept { return info(id).name; }

MetricId metric_from_name(std::string_view name) {
    for (const auto& m : kMetrics) {
        if (m.name == name) return m.id;
    }
    throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

const std::vector<MetricId>& all_metrics() {
    static const std::vector<MetricId> all = [] {
        std::vector<MetricId> v;
        for (const auto& m : kMetrics) v.push_back(m.id);
        return v;
    }();
    return all;
}

std::vector<MetricId> parse_metric_list(std::string_view text) {
    if (text == "all") return all_metrics();
    std::vector<MetricId> picked;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view item = text.substr(start, comma - start);
        if (!item.empty()) picked.push_back(metric_from_name(item));
        start = comma + 1;
    }
    if (picked.empty()) throw std::invalid_argument("metric list is empty");
    std::vector<MetricId> ordered;
    for (MetricId id : all_metrics()) {
        if (std::find(picked.begin(), picked.end(), id) != picked.end()) ordered.push_back(id);
    }
    return ordered;
}

bool applies_to_label(MetricId id) noexcept { return info(id).per_label; }
bool applies_to_pooled(MetricId id) noexcept { return info(id).pooled; }

void RunConfig::validate() const {
    if (labels.empty()) throw std::invalid_argument("label list is empty");
    std::vector<Label> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == 0) throw std::invalid_argument("label 0 is background and cannot be evaluated");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("duplicate label in label list");
    }
    if (metrics.empty()) throw std::invalid_argument("metric list is empty");
    if (threads < 1) throw std::invalid_argument("parallelism must be >= 1");
    thresholds.validate();
}

const MetricEntry* ScopeReport::find(MetricId id) const {
    for (const auto& m : metrics) {
        if (m.id == id) return &m;
    }
    return nullptr;
}

MetricReport evaluate_masks(const LabelMask& gt, const LabelMask& pred, const RunConfig& cfg, std::string stem) {
    cfg.validate();
    require_same_shape(gt, pred);

    MetricReport report;
    report.stem = std::move(stem);

    std::optional<SsegepBreakdown> breakdown;
    if (selected(cfg, MetricId::Ssegep)) {
        breakdown = ssegep(gt, pred, cfg.labels, cfg.connectivity);
        for (const auto& ls : breakdown->per_label) {
            if (ls.vacuous) {
                report.warnings.push_back("label " + std::to_string(ls.label) +
                                          ": absent from ground truth, ssegep is vacuous");
            }
        }
    }

    ConfusionCounts pooled_counts;
    for (std::size_t k = 0; k < cfg.labels.size(); ++k) {
        const Label label = cfg.labels[k];
        ScopeReport scope;
        scope.label = std::to_string(label);
        scope.counts = confusion_counts(gt, pred, label);
        pooled_counts += scope.counts;

        for (MetricId id : cfg.metrics) {
            if (!applies_to_label(id)) continue;
            if (is_classic(id)) {
                scope.metrics.push_back(classic(id, scope.counts));
            } else if (id == MetricId::Hausdorff) {
                const BoundarySet g = boundary(gt, label);
                const BoundarySet p = boundary(pred, label);
                if (g.empty() || p.empty()) {
                    scope.metrics.push_back({id, std::nullopt, false});
                } else {
                    scope.metrics.push_back(from_value(id, hausdorff(g, p)));
                }
            } else if (id == MetricId::Ssegep) {
                const LabelScore& ls = breakdown->per_label[k];
                scope.metrics.push_back({id, ls.score, !ls.vacuous});
            }
        }
        note_undefined(scope, report.warnings);
        report.per_label.push_back(std::move(scope));
    }

    report.pooled.label = std::string(kPooledLabel);
    report.pooled.counts = pooled_counts;
    for (MetricId id : cfg.metrics) {
        if (!applies_to_pooled(id)) continue;
        if (is_classic(id)) {
            report.pooled.metrics.push_back(classic(id, pooled_counts));
        } else if (id == MetricId::GeneralizedDice) {
            try {
                const GeneralizedDiceResult gd = generalized_dice(gt, pred, cfg.labels);
                report.pooled.metrics.push_back(from_value(id, gd.metric));
                for (Label l : gd.skipped) {
                    report.warnings.push_back("generalized_dice: skipped label " + std::to_string(l) +
                                              " (absent from ground truth)");
                }
            } catch (const std::invalid_argument&) {
                report.pooled.metrics.push_back({id, std::nullopt, false});
            }
        } else if (id == MetricId::Ssegep) {
            report.pooled.metrics.push_back({id, breakdown->score, !breakdown->vacuous});
        }
    }
    note_undefined(report.pooled, report.warnings);

    if (breakdown) {
        SsegepSummary s;
        s.n_segments = breakdown->n_segments;
        for (const auto& m : breakdown->matches) s.weighted_tp += m.contribution();
        for (const auto& f : breakdown->fp_stats) s.weighted_fp += f.weighted_fp;
        s.vacuous = breakdown->vacuous;
        report.ssegep = s;
    }
    return report;
}

MetricReport evaluate_pair(const std::filesystem::path& gt_path, const std::filesystem::path& pred_path,
                           const RunConfig& cfg) {
    const LabelMask gt = io::load_mask_file(gt_path);
    const LabelMask pred = io::load_mask_file(pred_path, io::Dimensions{gt.width(), gt.height()});
    MetricReport r = evaluate_masks(gt, pred, cfg, gt_path.stem().string());
    r.gt_path = gt_path.string();
    r.pred_path = pred_path.string();
    return r;
}

std::vector<ScopeReport> summarize(const std::vector<MetricReport>& reports, const RunConfig& cfg) {
    std::vector<std::string> scopes;
    for (Label l : cfg.labels) scopes.push_back(std::to_string(l));
    scopes.emplace_back(kPooledLabel);

    std::vector<ScopeReport> out;
    for (const std::string& scope_label : scopes) {
        ScopeReport mean;
        mean.label = scope_label;
        for (MetricId id : cfg.metrics) {
            const bool pooled = scope_label == kPooledLabel;
            if (pooled ? !applies_to_pooled(id) : !applies_to_label(id)) continue;
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& r : reports) {
                const ScopeReport* scope = &r.pooled;
                if (!pooled) {
                    auto it = std::find_if(r.per_label.begin(), r.per_label.end(),
                                           [&](const ScopeReport& s) { return s.label == scope_label; });
                    if (it == r.per_label.end()) continue;
                    scope = &*it;
                }
                const MetricEntry* e = scope->find(id);
                if (e != nullptr && e->value && e->defined) {
                    sum += *e->value;
                    ++n;
                }
            }
            if (n == 0) {
                mean.metrics.push_back({id, std::nullopt, false});
            } else {
                mean.metrics.push_back({id, sum / static_cast<double>(n), true});
            }
        }
        out.push_back(std::move(mean));
    }
    return out;
}

int effective_parallelism(int requested) {
    if (const char* env = std::getenv("SEGEVAL_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw std::invalid_argument("SEGEVAL_THREADS must be a positive integer, got '" + std::string(env) + "'");
        }
        return static_cast<int>(v);
    }
    return std::max(1, requested);
}

// ---- serialization ---------------------------------------------------------

std::string format_value(double v, bool full_precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), full_precision ? "%.17g" : "%.4f", v);
    return buf;
}

namespace {

nlohmann::json rendered_number(double v, bool full_precision) {
    return std::strtod(format_value(v, full_precision).c_str(), nullptr);
}

nlohmann::json counts_json(const ConfusionCounts& c) {
    return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

nlohmann::json scope_json(const ScopeReport& scope, bool with_counts, bool full_precision) {
    nlohmann::json j;
    j["label"] = scope.label;
    if (with_counts) j["counts"] = counts_json(scope.counts);
    nlohmann::json metrics = nlohmann::json::object();
    nlohmann::json undefined = nlohmann::json::array();
    for (const auto& m : scope.metrics) {
        const std::string name(metric_name(m.id));
        metrics[name] = m.value ? rendered_number(*m.value, full_precision) : nlohmann::json(nullptr);
        if (!m.defined) undefined.push_back(name);
    }
    j["metrics"] = std::move(metrics);
    j["undefined"] = std::move(undefined);
    return j;
}

nlohmann::json report_json(const MetricReport& r, const RunConfig& cfg) {
    nlohmann::json j;
    j["stem"] = r.stem;
    j["gt"] = r.gt_path;
    j["pred"] = r.pred_path;
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& s : r.per_label) labels.push_back(scope_json(s, true, cfg.full_precision));
    j["labels"] = std::move(labels);
    j["pooled"] = scope_json(r.pooled, true, cfg.full_precision);
    if (r.ssegep) {
        j["pooled"]["ssegep_breakdown"] = {
            {"n_segments", r.ssegep->n_segments},
            {"weighted_tp", rendered_number(r.ssegep->weighted_tp, cfg.full_precision)},
            {"weighted_fp", rendered_number(r.ssegep->weighted_fp, cfg.full_precision)},
            {"vacuous", r.ssegep->vacuous},
        };
    }
    j["warnings"] = r.warnings;
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void csv_row(std::string& out, const std::string& stem, const ScopeReport& scope, bool with_counts,
             const RunConfig& cfg) {
    out += csv_field(stem) + "," + csv_field(scope.label);
    if (with_counts) {
        const auto& c = scope.counts;
        out += "," + std::to_string(c.tp) + "," + std::to_string(c.fp) + "," + std::to_string(c.fn) + "," +
               std::to_string(c.tn);
    } else {
        out += ",,,,";
    }
    for (MetricId id : cfg.metrics) {
        out += ',';
        const MetricEntry* e = scope.find(id);
        if (e != nullptr && e->value) out += format_value(*e->value, cfg.full_precision);
    }
    out += '\n';
}

}  // namespace

std::string to_json(const MetricReport& report, const RunConfig& cfg) {
    return report_json(report, cfg).dump(2) + "\n";
}

std::string to_json(const BatchResult& batch, const RunConfig& cfg) {
    nlohmann::json j;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& r : batch.reports) pairs.push_back(report_json(r, cfg));
    j["pairs"] = std::move(pairs);
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& s : batch.summary) summary.push_back(scope_json(s, false, cfg.full_precision));
    j["summary"] = std::move(summary);
    j["warnings"] = batch.warnings;
    return j.dump(2) + "\n";
}

std::string to_csv(const std::vector<MetricReport>& reports, const std::vector<ScopeReport>& summary,
                   const RunConfig& cfg) {
    std::string out = "stem,label,tp,fp,fn,tn";
    for (MetricId id : cfg.metrics) out += "," + std::string(metric_name(id));
    out += '\n';
    for (const auto& r : reports) {
        for (const auto& s : r.per_label) csv_row(out, r.stem, s, true, cfg);
        csv_row(out, r.stem, r.pooled, true, cfg);
    }
    for (const auto& s : summary) csv_row(out, std::string(kSummaryStem), s, false, cfg);
    return out;
}

}  // namespace segeval::report
