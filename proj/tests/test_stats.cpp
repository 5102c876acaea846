#include "segeval/stats.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

using namespace segeval;
using namespace segeval::stats;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Composite Simpson's rule on [a, b] with n (even) intervals.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double t_density(double x, double nu) {
    const double log_c = std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * M_PI);
    return std::exp(log_c - (nu + 1) / 2 * std::log1p(x * x / nu));
}

double t_two_sided_by_integration(double t, double nu) {
    return 1.0 - 2.0 * simpson([nu](double x) { return t_density(x, nu); }, 0.0, std::abs(t));
}

double f_density(double x, double d1, double d2) {
    const double log_b = std::lgamma(d1 / 2) + std::lgamma(d2 / 2) - std::lgamma((d1 + d2) / 2);
    return std::exp(d1 / 2 * std::log(d1) + d2 / 2 * std::log(d2) + (d1 / 2 - 1) * std::log(x) -
                    (d1 + d2) / 2 * std::log(d2 + d1 * x) - log_b);
}

// Substituting x = u^2 removes the x^(d1/2 - 1) singularity at 0.
double f_survival_by_integration(double f, double d1, double d2) {
    const auto g = [d1, d2](double u) {
        const double v = u == 0.0 ? 1e-12 : u;
        return 2.0 * v * f_density(v * v, d1, d2);
    };
    return 1.0 - simpson(g, 0.0, std::sqrt(f));
}

ConfusionCounts cc(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn = 1000) {
    return {tp, fp, fn, tn};
}

}  // namespace

TEST_CASE("incomplete beta against boost", "[stats][dist]") {
    for (double a : {0.5, 1.0, 2.5, 4.0, 30.0}) {
        for (double b : {0.5, 1.0, 3.0, 12.0}) {
            for (double x : {0.0, 1e-6, 0.1, 0.37, 0.5, 0.9, 0.999, 1.0}) {
                REQUIRE_THAT(incomplete_beta(a, b, x), WithinAbs(boost::math::ibeta(a, b, x), 1e-12));
            }
        }
    }
    CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("student t against numerical integration and boost", "[stats][dist]") {
    for (double nu : {1.0, 2.0, 3.7, 8.0, 30.0, 200.0}) {
        const boost::math::students_t dist(nu);
        for (double t : {0.0, 0.3, 1.0, 2.5, 6.0}) {
            REQUIRE_THAT(student_t_two_sided_p(t, nu), WithinAbs(t_two_sided_by_integration(t, nu), 1e-9));
            REQUIRE_THAT(student_t_two_sided_p(-t, nu), WithinAbs(student_t_two_sided_p(t, nu), 1e-15));
            REQUIRE_THAT(student_t_cdf(t, nu), WithinAbs(boost::math::cdf(dist, t), 1e-12));
            REQUIRE_THAT(student_t_cdf(-t, nu), WithinAbs(boost::math::cdf(dist, -t), 1e-12));
        }
    }
    CHECK(student_t_two_sided_p(0.0, 5.0) == 1.0);
    CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("F survival against numerical integration and boost", "[stats][dist]") {
    for (double d1 : {1.0, 2.0, 5.0}) {
        for (double d2 : {3.0, 10.0, 58.0}) {
            const boost::math::fisher_f dist(d1, d2);
            for (double f : {0.05, 0.5, 1.0, 4.0, 15.7}) {
                REQUIRE_THAT(f_survival(f, d1, d2), WithinAbs(f_survival_by_integration(f, d1, d2), 1e-7));
                REQUIRE_THAT(f_survival(f, d1, d2), WithinAbs(boost::math::cdf(complement(dist, f)), 1e-12));
            }
        }
    }
    CHECK(f_survival(0.0, 1.0, 10.0) == 1.0);
}

TEST_CASE("quality partition", "[stats][partition]") {
    const QualityThresholds t;
    // TPR 0.9, FPR 0.1, FNR 0.1
    CHECK(classify(cc(90, 10, 10), t) == Quality::Good);
    // TPR 0.3, FPR 0.6, FNR 0.7
    CHECK(classify(cc(30, 45, 70), t) == Quality::Bad);
    // TPR 0.6, FPR 0.3, FNR 0.4
    CHECK(classify(cc(420, 180, 280), t) == Quality::Unclassified);
    // No positives in the ground truth: rates not computable.
    CHECK(classify(cc(0, 5, 0), t) == Quality::Unclassified);
    // Empty prediction on a nonempty GT has FPR 0 under the default definition.
    CHECK(classify(cc(0, 0, 50), t) == Quality::Unclassified);

    Rates r;
    REQUIRE(detection_rates(cc(30, 45, 70, 9955), FprDefinition::FalseDiscovery, r));
    CHECK_THAT(r.fpr, WithinAbs(0.6, 1e-15));
    REQUIRE(detection_rates(cc(30, 45, 70, 9955), FprDefinition::Conventional, r));
    CHECK_THAT(r.fpr, WithinAbs(45.0 / 10000.0, 1e-15));
    CHECK_FALSE(detection_rates(cc(0, 3, 0), FprDefinition::FalseDiscovery, r));

    QualityThresholds conventional;
    conventional.fpr = FprDefinition::Conventional;
    CHECK(classify(cc(30, 45, 70, 9955), conventional) == Quality::Unclassified);

    QualityThresholds broken;
    broken.good_tpr_min = 0.3;
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
    broken = QualityThresholds{};
    broken.bad_fnr_min = 1.5;
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("partition buckets are disjoint and cover the input", "[stats][partition][property]") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::uint64_t> n(0, 100);
    std::vector<ConfusionCounts> evals;
    for (int i = 0; i < 500; ++i) evals.push_back(cc(n(rng), n(rng), n(rng)));
    const Partition p = partition_by_quality(evals, QualityThresholds{});
    std::vector<int> seen(evals.size(), 0);
    for (const auto* bucket : {&p.good, &p.bad, &p.unclassified}) {
        for (std::size_t i : *bucket) ++seen[i];
    }
    for (int s : seen) REQUIRE(s == 1);
    CHECK_FALSE(p.good.empty());
    CHECK_FALSE(p.bad.empty());
}

TEST_CASE("welch t-test", "[stats][welch]") {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 3, 4, 5, 6};
    const TestResult r = welch_t_test(a, b);
    CHECK_THAT(r.statistic, WithinAbs(-1.0, 1e-12));
    CHECK_THAT(r.dof, WithinAbs(8.0, 1e-12));
    CHECK_THAT(r.p_value, WithinAbs(t_two_sided_by_integration(-1.0, 8.0), 1e-9));
    CHECK_THAT(r.p_value, WithinAbs(0.3466, 5e-4));
    CHECK_FALSE(r.rejects());

    const std::vector<double> copy = a;
    const TestResult same = welch_t_test(a, copy);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    const std::vector<double> good{0.9, 0.92, 0.88, 0.91};
    const std::vector<double> bad{0.1, 0.12, 0.08, 0.11};
    const TestResult sep = welch_t_test(good, bad);
    CHECK(sep.p_value < 1e-5);
    CHECK(sep.rejects());
    CHECK(sep.alpha == kDefaultAlpha);

    const TestResult swapped = welch_t_test(b, a);
    CHECK(swapped.statistic == -r.statistic);
    CHECK(swapped.p_value == r.p_value);

    const std::vector<double> one{1.0};
    const std::vector<double> flat{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(welch_t_test(one, b), std::invalid_argument);
    CHECK_THROWS_AS(welch_t_test(a, flat), std::invalid_argument);
}

TEST_CASE("welch t-test against hand formulas on random samples", "[stats][welch][property]") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t na = 2 + trial % 9;
        const std::size_t nb = 2 + (trial * 7) % 13;
        std::vector<double> a(na);
        std::vector<double> b(nb);
        for (double& x : a) x = z(rng);
        for (double& x : b) x = 0.5 + 2.0 * z(rng);
        const auto stats_of = [](const std::vector<double>& v) {
            double m = 0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            double s = 0;
            for (double x : v) s += (x - m) * (x - m);
            return std::pair{m, s / static_cast<double>(v.size() - 1)};
        };
        const auto [ma, va] = stats_of(a);
        const auto [mb, vb] = stats_of(b);
        const double qa = va / static_cast<double>(na);
        const double qb = vb / static_cast<double>(nb);
        const double t = (ma - mb) / std::sqrt(qa + qb);
        const double dof = (qa + qb) * (qa + qb) /
                           (qa * qa / static_cast<double>(na - 1) + qb * qb / static_cast<double>(nb - 1));
        const TestResult r = welch_t_test(a, b);
        REQUIRE_THAT(r.statistic, WithinRel(t, 1e-12));
        REQUIRE_THAT(r.dof, WithinRel(dof, 1e-12));
        REQUIRE_THAT(r.p_value, WithinAbs(2.0 * boost::math::cdf(boost::math::students_t(dof), -std::abs(t)), 1e-12));
    }
}

TEST_CASE("levene test", "[stats][levene]") {
    const std::vector<double> a{1, 2, 3, 4, 5, 6};
    const std::vector<double> b{10, 10.1, 9.9, 10.05, 9.95, 10};
    const TestResult r = levene_test(a, b);
    // Absolute deviations: a -> {2.5,1.5,.5,.5,1.5,2.5}, b -> {0,.1,.1,.05,.05,0}.
    const double za = 1.5;
    const double zb = 0.05;
    const double z = (za + zb) / 2.0;
    const double between = 6 * (za - z) * (za - z) + 6 * (zb - z) * (zb - z);
    double within = 0.0;
    for (double d : {2.5, 1.5, 0.5, 0.5, 1.5, 2.5}) within += (d - za) * (d - za);
    for (double d : {0.0, 0.1, 0.1, 0.05, 0.05, 0.0}) within += (d - zb) * (d - zb);
    const double w = 10.0 * between / within;
    CHECK_THAT(r.statistic, WithinRel(w, 1e-12));
    CHECK(r.dof_num == 1.0);
    CHECK(r.dof == 10.0);
    CHECK_THAT(r.p_value, WithinAbs(f_survival_by_integration(w, 1.0, 10.0), 1e-7));
    CHECK(r.p_value < 0.05);

    const std::vector<double> copy = a;
    const TestResult same = levene_test(a, copy);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    const std::vector<double> ones{1.0, 1.0};
    const std::vector<double> twos{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(levene_test(ones, twos), std::invalid_argument);
    CHECK_THROWS_AS(levene_test(std::vector<double>{1.0}, a), std::invalid_argument);
}

TEST_CASE("mos deviation", "[stats][mos]") {
    const std::vector<double> mos{0.75, 0.20, 0.76, 0.81, 0.03};
    const std::vector<double> ssegep{0.63, 0.20, 0.75, 0.82, 0.0};
    const std::vector<double> dice{0.68, 0.22, 0.68, 0.53, 0.04};
    // (0.12 + 0 + 0.01 + 0.01 + 0.03) / 5 and (0.07 + 0.02 + 0.08 + 0.28 + 0.01) / 5
    CHECK_THAT(mos_deviation(ssegep, mos), WithinAbs(0.034, 1e-12));
    CHECK_THAT(mos_deviation(dice, mos), WithinAbs(0.092, 1e-12));
    CHECK(mos_deviation(ssegep, mos) < mos_deviation(dice, mos));

    CHECK(mos_deviation(mos, mos) == 0.0);
    CHECK(mos_deviation(std::vector<double>{0.5}, std::vector<double>{1.0}) == 0.5);
    CHECK(mos_deviation(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<double>{0, 1, 0, 1}) == 0.5);
    CHECK(mos_deviation(dice, mos) == mos_deviation(mos, dice));

    CHECK_THROWS_AS(mos_deviation(dice, std::vector<double>{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(mos_deviation(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(mos_deviation(std::vector<double>{0.5}, std::vector<double>{1.5}), std::invalid_argument);
}

TEST_CASE("mos deviation is symmetric and bounded", "[stats][mos][property]") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(1 + trial % 17);
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
        }
        const double d = mos_deviation(x, y);
        REQUIRE(d == mos_deviation(y, x));
        REQUIRE(d >= 0.0);
        REQUIRE(d <= 1.0);
    }
}
