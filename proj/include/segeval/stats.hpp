#pragma once

// Validation protocols for comparing metrics: good/bad partitioning by
// detection rates, Welch's t-test, Levene's test and deviation from a mean
// opinion score.

#include "segeval/mask.hpp"

#include <span>
#include <vector>

namespace segeval::stats {

/// How the false-positive rate used for partitioning is formed.
enum class FprDefinition {
    FalseDiscovery,  // fp / (tp + fp)
    Conventional,    // fp / (fp + tn)
};

struct QualityThresholds {
    double good_tpr_min = 0.80;
    double good_fpr_max = 0.20;
    double good_fnr_max = 0.20;
    double bad_tpr_max = 0.40;
    double bad_fpr_min = 0.50;
    double bad_fnr_min = 0.50;
    FprDefinition fpr = FprDefinition::FalseDiscovery;

    /// Throws std::invalid_argument if a rate is outside [0, 1] or the good and
    /// bad bands overlap.
    void validate() const;
};

struct Rates {
    double tpr = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
};

/// Returns false when tp + fn = 0 (rates not computable).
bool detection_rates(const ConfusionCounts& c, FprDefinition fpr, Rates& out);

enum class Quality { Good, Bad, Unclassified };

Quality classify(const ConfusionCounts& c, const QualityThresholds& t);

/// Indices into the input, one bucket per evaluation.
struct Partition {
    std::vector<std::size_t> good;
    std::vector<std::size_t> bad;
    std::vector<std::size_t> unclassified;
};

Partition partition_by_quality(std::span<const ConfusionCounts> evals, const QualityThresholds& t);

inline constexpr double kDefaultAlpha = 0.00001;

struct TestResult {
    double statistic = 0.0;
    double dof = 0.0;       // denominator dof for Levene
    double dof_num = 0.0;   // numerator dof for Levene, 0 for Welch
    double p_value = 1.0;
    double alpha = kDefaultAlpha;

    bool rejects() const noexcept { return p_value < alpha; }
};

/// Two-sided Welch t-test. Throws std::invalid_argument if a group has fewer
/// than two values or zero variance.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                        double alpha = kDefaultAlpha);

/// Levene's test with group-mean centering, F(1, n_a + n_b - 2) reference.
/// Throws std::invalid_argument for groups of fewer than two values or when
/// every absolute deviation equals its group mean (W undefined).
TestResult levene_test(std::span<const double> a, std::span<const double> b,
                       double alpha = kDefaultAlpha);

/// Mean of |metric - mos|. Throws std::invalid_argument on length mismatch,
/// empty input, or a MOS value outside [0, 1].
double mos_deviation(std::span<const double> metric_values, std::span<const double> mos_values);

// Distribution functions.

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
/// P(T <= t) for Student's t with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);
/// Two-sided p = P(|T| >= |t|).
double student_t_two_sided_p(double t, double dof);
/// P(F >= f) for F(d1, d2).
double f_survival(double f, double d1, double d2);

}  // namespace segeval::stats
