#include "segeval/stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace segeval::stats {

void QualityThresholds::validate() const {
    for (double v : {good_tpr_min, good_fpr_max, good_fnr_max, bad_tpr_max, bad_fpr_min, bad_fnr_min}) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("quality thresholds must lie in [0, 1]");
    }
    if (!(good_tpr_min > bad_tpr_max)) {
        throw std::invalid_argument("good_tpr_min must exceed bad_tpr_max");
    }
    if (!(good_fpr_max < bad_fpr_min)) {
        throw std::invalid_argument("good_fpr_max must be below bad_fpr_min");
    }
}

bool detection_rates(const ConfusionCounts& c, FprDefinition fpr, Rates& out) {
    const std::uint64_t positives = c.tp + c.fn;
    if (positives == 0) return false;
    out.tpr = static_cast<double>(c.tp) / static_cast<double>(positives);
    out.fnr = static_cast<double>(c.fn) / static_cast<double>(positives);
    const std::uint64_t fpr_den = fpr == FprDefinition::FalseDiscovery ? c.tp + c.fp : c.fp + c.tn;
    // Nothing predicted (or nothing negative): no false positives to speak of.
    out.fpr = fpr_den == 0 ? 0.0 : static_cast<double>(c.fp) / static_cast<double>(fpr_den);
    return true;
}

Quality classify(const ConfusionCounts& c, const QualityThresholds& t) {
    Rates r;
    if (!detection_rates(c, t.fpr, r)) return Quality::Unclassified;
    if (r.tpr > t.good_tpr_min && r.fpr < t.good_fpr_max && r.fnr < t.good_fnr_max) return Quality::Good;
    if (r.tpr < t.bad_tpr_max && r.fpr > t.bad_fpr_min && r.fnr > t.bad_fnr_min) return Quality::Bad;
    return Quality::Unclassified;
}

Partition partition_by_quality(std::span<const ConfusionCounts> evals, const QualityThresholds& t) {
    t.validate();
    Partition p;
    for (std::size_t i = 0; i < evals.size(); ++i) {
        switch (classify(evals[i], t)) {
            case Quality::Good: p.good.push_back(i); break;
            case Quality::Bad: p.bad.push_back(i); break;
            case Quality::Unclassified: p.unclassified.push_back(i); break;
        }
    }
    return p;
}

namespace {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double n = 0.0;
};

Moments moments(std::span<const double> xs) {
    Moments m;
    m.n = static_cast<double>(xs.size());
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / m.n;
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.variance = ss / (m.n - 1.0);
    return m;
}

void require_group(std::span<const double> xs, const char* name, const char* test) {
    if (xs.size() < 2) {
        throw std::invalid_argument(std::string(test) + ": group " + name + " needs at least 2 values, got " +
                                    std::to_string(xs.size()));
    }
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The fraction converges fast for x < (a + 1) / (a + b + 2); use symmetry otherwise.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("student_t: dof must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

double student_t_cdf(double t, double dof) {
    const double tail = student_t_two_sided_p(t, dof) / 2.0;
    return t < 0.0 ? tail : 1.0 - tail;
}

double f_survival(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw std::invalid_argument("f_survival: dof must be positive");
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
    require_group(a, "a", "welch_t_test");
    require_group(b, "b", "welch_t_test");
    const Moments ma = moments(a);
    const Moments mb = moments(b);
    if (ma.variance == 0.0) throw std::invalid_argument("welch_t_test: group a has zero variance");
    if (mb.variance == 0.0) throw std::invalid_argument("welch_t_test: group b has zero variance");

    const double qa = ma.variance / ma.n;
    const double qb = mb.variance / mb.n;
    const double se2 = qa + qb;

    TestResult r;
    r.alpha = alpha;
    r.statistic = (ma.mean - mb.mean) / std::sqrt(se2);
    r.dof = se2 * se2 / (qa * qa / (ma.n - 1.0) + qb * qb / (mb.n - 1.0));
    r.p_value = student_t_two_sided_p(r.statistic, r.dof);
    return r;
}

TestResult levene_test(std::span<const double> a, std::span<const double> b, double alpha) {
    require_group(a, "a", "levene_test");
    require_group(b, "b", "levene_test");

    auto deviations = [](std::span<const double> xs) {
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        std::vector<double> z;
        z.reserve(xs.size());
        for (double x : xs) z.push_back(std::abs(x - mean));
        return z;
    };
    const std::vector<double> za = deviations(a);
    const std::vector<double> zb = deviations(b);
    const Moments ma = moments(za);
    const Moments mb = moments(zb);
    const double n = ma.n + mb.n;
    const double grand = (ma.mean * ma.n + mb.mean * mb.n) / n;

    const double between = ma.n * (ma.mean - grand) * (ma.mean - grand) +
                           mb.n * (mb.mean - grand) * (mb.mean - grand);
    const double within = ma.variance * (ma.n - 1.0) + mb.variance * (mb.n - 1.0);
    if (within == 0.0) {
        throw std::invalid_argument("levene_test: zero within-group spread of absolute deviations, W undefined");
    }

    TestResult r;
    r.alpha = alpha;
    r.dof_num = 1.0;
    r.dof = n - 2.0;
    r.statistic = (n - 2.0) * between / within;
    r.p_value = f_survival(r.statistic, r.dof_num, r.dof);
    return r;
}

double mos_deviation(std::span<const double> metric_values, std::span<const double> mos_values) {
    if (metric_values.size() != mos_values.size()) {
        throw std::invalid_argument("mos_deviation: " + std::to_string(metric_values.size()) +
                                    " metric values vs " + std::to_string(mos_values.size()) + " MOS values");
    }
    if (metric_values.empty()) throw std::invalid_argument("mos_deviation: no values");
    double sum = 0.0;
    for (std::size_t i = 0; i < metric_values.size(); ++i) {
        if (!(mos_values[i] >= 0.0 && mos_values[i] <= 1.0)) {
            throw std::invalid_argument("mos_deviation: MOS value outside [0, 1]");
        }
        sum += std::abs(metric_values[i] - mos_values[i]);
    }
    return sum / static_cast<double>(metric_values.size());
}

}  // namespace segeval::stats
