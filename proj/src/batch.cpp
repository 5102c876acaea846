#include "segeval/report.hpp"

#include "segeval/io.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>

namespace segeval::report {
namespace {

std::map<std::string, std::filesystem::path> masks_by_stem(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw std::runtime_error(dir.string() + ": not a directory");
    }
    std::map<std::string, std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || !io::is_mask_path(entry.path())) continue;
        const std::string stem = entry.path().stem().string();
        auto [it, inserted] = out.emplace(stem, entry.path());
        if (!inserted) {
            throw std::runtime_error(dir.string() + ": ambiguous stem '" + stem + "' (" +
                                     it->second.filename().string() + " and " +
                                     entry.path().filename().string() + ")");
        }
    }
    return out;
}

}  // namespace

std::vector<MetricReport> evaluate_pairs(
    const std::vector<std::tuple<std::string, std::filesystem::path, std::filesystem::path>>& pairs,
    const RunConfig& cfg) {
    cfg.validate();
    std::vector<MetricReport> results(pairs.size());
    std::vector<std::exception_ptr> errors(pairs.size());
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < pairs.size(); i = next.fetch_add(1)) {
            const auto& [stem, gt, pred] = pairs[i];
            try {
                results[i] = evaluate_pair(gt, pred, cfg);
                results[i].stem = stem;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(effective_parallelism(cfg.threads)), pairs.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

BatchResult evaluate_batch(const std::filesystem::path& gt_dir, const std::filesystem::path& pred_dir,
                           const RunConfig& cfg) {
    const auto gts = masks_by_stem(gt_dir);
    const auto preds = masks_by_stem(pred_dir);

    BatchResult batch;
    std::vector<std::tuple<std::string, std::filesystem::path, std::filesystem::path>> pairs;
    for (const auto& [stem, path] : gts) {
        auto it = preds.find(stem);
        if (it == preds.end()) {
            batch.warnings.push_back("unmatched stem '" + stem + "' in " + gt_dir.string());
        } else {
            pairs.emplace_back(stem, path, it->second);
        }
    }
    for (const auto& [stem, path] : preds) {
        if (!gts.contains(stem)) batch.warnings.push_back("unmatched stem '" + stem + "' in " + pred_dir.string());
    }
    if (pairs.empty()) {
        throw std::runtime_error("no common file stems between " + gt_dir.string() + " and " + pred_dir.string());
    }

    batch.reports = evaluate_pairs(pairs, cfg);
    batch.summary = summarize(batch.reports, cfg);
    return batch;
}

}  // namespace segeval::report
