// segeval: command-line front end for mask evaluation.

#include "segeval/analysis.hpp"
#include "segeval/io.hpp"
#include "segeval/report.hpp"
#include "segeval/synthgen.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace segeval;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Label> parse_labels(const std::string& text) {
    std::vector<Label> labels;
    for (const auto& item : split_list(text)) {
        std::size_t used = 0;
        int v = -1;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || v < 1 || v > 255) {
            throw std::invalid_argument("invalid label '" + item + "' (expected 1..255)");
        }
        labels.push_back(static_cast<Label>(v));
    }
    return labels;
}

void apply_threshold_overrides(stats::QualityThresholds& t, const std::string& text) {
    const std::map<std::string, double*> fields{
        {"good_tpr_min", &t.good_tpr_min}, {"good_fpr_max", &t.good_fpr_max}, {"good_fnr_max", &t.good_fnr_max},
        {"bad_tpr_max", &t.bad_tpr_max},   {"bad_fpr_min", &t.bad_fpr_min},   {"bad_fnr_min", &t.bad_fnr_min},
    };
    for (const auto& item : split_list(text)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("threshold override '" + item + "' is not key=value");
        auto it = fields.find(item.substr(0, eq));
        if (it == fields.end()) throw std::invalid_argument("unknown threshold '" + item.substr(0, eq) + "'");
        *it->second = std::stod(item.substr(eq + 1));
    }
    t.validate();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(out_path + ": write failed");
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "segeval: warning: " << w << "\n";
}

struct EvalOptions {
    std::string labels = "1";
    int connectivity = 8;
    std::string metrics = "all";
    std::string format = "json";
    std::string out;
    bool full_precision = false;
    int threads = 1;
};

void add_eval_options(CLI::App* cmd, EvalOptions& o) {
    cmd->add_option("--labels", o.labels, "Comma-separated label IDs to evaluate")->capture_default_str();
    cmd->add_option("--connectivity", o.connectivity, "Segment connectivity (4 or 8)")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    cmd->add_option("--metrics", o.metrics, "'all' or comma-separated metric names")->capture_default_str();
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    cmd->add_option("--out", o.out, "Output file (default stdout)");
    cmd->add_flag("--full-precision", o.full_precision, "Print 17 significant digits instead of 4 decimals");
}

report::RunConfig make_config(const EvalOptions& o) {
    report::RunConfig cfg;
    cfg.labels = parse_labels(o.labels);
    cfg.connectivity = connectivity_from_int(o.connectivity);
    cfg.metrics = report::parse_metric_list(o.metrics);
    cfg.format = o.format == "csv" ? report::OutputFormat::Csv : report::OutputFormat::Json;
    cfg.full_precision = o.full_precision;
    cfg.threads = report::effective_parallelism(o.threads);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segmentation evaluation: classic overlap metrics, SSEGEP and cohort statistics"};
    app.require_subcommand(1);

    EvalOptions eval_opts;
    std::string gt_path;
    std::string pred_path;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate one ground-truth/prediction pair");
    evaluate->add_option("--gt", gt_path, "Ground-truth mask (8-bit PNG or PGM)")->required();
    evaluate->add_option("--pred", pred_path, "Predicted mask")->required();
    add_eval_options(evaluate, eval_opts);

    EvalOptions batch_opts;
    std::string gt_dir;
    std::string pred_dir;
    auto* batch = app.add_subcommand("batch", "Evaluate every pair of files sharing a stem in two directories");
    batch->add_option("--gt-dir", gt_dir, "Ground-truth directory")->required();
    batch->add_option("--pred-dir", pred_dir, "Prediction directory")->required();
    batch->add_option("--threads", batch_opts.threads, "Pairs evaluated concurrently (SEGEVAL_THREADS overrides)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_eval_options(batch, batch_opts);

    std::string report_path;
    std::string compare_metrics = "dice,ssegep";
    std::string compare_label = "ALL";
    double alpha = stats::kDefaultAlpha;
    std::string threshold_text;
    std::string fpr_def = "fdr";
    std::string compare_format = "csv";
    std::string compare_out;
    bool compare_full = false;
    auto* compare = app.add_subcommand("compare", "Welch's t-test of a metric between good and bad segmentations");
    compare->add_option("--report", report_path, "Report CSV from evaluate/batch")->required();
    compare->add_option("--metric", compare_metrics, "Metric column(s), comma-separated")->capture_default_str();
    compare->add_option("--label", compare_label, "Report rows to use")->capture_default_str();
    compare->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    compare->add_option("--thresholds", threshold_text,
                        "Overrides, e.g. good_tpr_min=0.8,bad_fpr_min=0.5");
    compare->add_option("--fpr", fpr_def, "FPR used for partitioning: fdr = fp/(tp+fp), conventional = fp/(fp+tn)")
        ->check(CLI::IsMember({"fdr", "conventional"}))
        ->capture_default_str();
    compare->add_option("--format", compare_format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    compare->add_option("--out", compare_out, "Output file (default stdout)");
    compare->add_flag("--full-precision", compare_full);

    std::string mos_report_path;
    std::string mos_path;
    std::string mos_metrics = "sensitivity,dice,ssegep";
    std::string mos_label = "ALL";
    std::string mos_format = "csv";
    std::string mos_out;
    bool mos_full = false;
    auto* mos = app.add_subcommand("mos", "Mean absolute deviation of metrics from mean opinion scores");
    mos->add_option("--report", mos_report_path, "Report CSV from evaluate/batch")->required();
    mos->add_option("--mos", mos_path, "CSV with columns stem,mos")->required();
    mos->add_option("--metrics", mos_metrics, "Metric columns, comma-separated")->capture_default_str();
    mos->add_option("--label", mos_label, "Report rows to use")->capture_default_str();
    mos->add_option("--format", mos_format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    mos->add_option("--out", mos_out, "Output file (default stdout)");
    mos->add_flag("--full-precision", mos_full);

    std::string scenario = "all";
    std::string synth_out;
    std::uint64_t seed = 0;
    int ring_offset = 5;
    std::string image_format = "png";
    auto* synth = app.add_subcommand("synth", "Write synthetic scenario masks to OUT/gt and OUT/pred");
    synth->add_option("--scenario", scenario, "Scenario name or 'all'")->capture_default_str();
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--seed", seed, "Placement seed")->capture_default_str();
    synth->add_option("--ring-offset", ring_offset, "Radius offset k for ring scenarios")->capture_default_str();
    synth->add_option("--image-format", image_format)->check(CLI::IsMember({"png", "pgm"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "segeval: error: " << e.what() << "\n";
        std::cerr << "Run with --help for usage.\n";
        return 1;
    }

    try {
        if (*evaluate) {
            const report::RunConfig cfg = make_config(eval_opts);
            const report::MetricReport r = report::evaluate_pair(gt_path, pred_path, cfg);
            if (cfg.format == report::OutputFormat::Json) {
                emit(report::to_json(r, cfg), eval_opts.out);
            } else {
                emit(report::to_csv({r}, {}, cfg), eval_opts.out);
                print_warnings(r.warnings);
            }
        } else if (*batch) {
            const report::RunConfig cfg = make_config(batch_opts);
            const report::BatchResult b = report::evaluate_batch(gt_dir, pred_dir, cfg);
            if (cfg.format == report::OutputFormat::Json) {
                emit(report::to_json(b, cfg), batch_opts.out);
            } else {
                emit(report::to_csv(b.reports, b.summary, cfg), batch_opts.out);
                print_warnings(b.warnings);
                for (const auto& r : b.reports) {
                    for (const auto& w : r.warnings) std::cerr << "segeval: warning: " << r.stem << ": " << w << "\n";
                }
            }
        } else if (*compare) {
            analysis::CompareOptions opts;
            opts.metrics = split_list(compare_metrics);
            opts.label = compare_label;
            opts.alpha = alpha;
            opts.thresholds.fpr = fpr_def == "fdr" ? stats::FprDefinition::FalseDiscovery
                                                   : stats::FprDefinition::Conventional;
            apply_threshold_overrides(opts.thresholds, threshold_text);
            const auto result = analysis::compare_report(analysis::CsvTable::load(report_path), opts);
            emit(compare_format == "json" ? analysis::render_compare_json(result, compare_full)
                                          : analysis::render_compare_csv(result, compare_full),
                 compare_out);
            if (compare_format == "csv") print_warnings(result.warnings);
        } else if (*mos) {
            const auto result = analysis::mos_report(analysis::CsvTable::load(mos_report_path),
                                                     analysis::CsvTable::load(mos_path), split_list(mos_metrics),
                                                     mos_label);
            emit(mos_format == "json" ? analysis::render_mos_json(result, mos_full)
                                      : analysis::render_mos_csv(result, mos_full),
                 mos_out);
            if (mos_format == "csv") print_warnings(result.warnings);
        } else if (*synth) {
            std::vector<synth::Scenario> scenarios;
            if (scenario == "all") {
                scenarios = synth::all_scenarios();
            } else {
                scenarios.push_back(synth::scenario_from_name(scenario));
            }
            const std::filesystem::path root(synth_out);
            std::filesystem::create_directories(root / "gt");
            std::filesystem::create_directories(root / "pred");
            for (synth::Scenario s : scenarios) {
                synth::ScenarioSpec spec = synth::default_spec(s, seed);
                spec.ring_offset = ring_offset;
                const auto [w, h] = synth::minimum_canvas(spec);
                spec.width = std::max(spec.width, w);
                spec.height = std::max(spec.height, h);
                const synth::ScenarioPair pair = synth::generate(spec);
                const std::string file = std::string(synth::scenario_name(s)) + "." + image_format;
                io::save_mask_file(pair.gt, root / "gt" / file);
                io::save_mask_file(pair.pred, root / "pred" / file);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "segeval: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
