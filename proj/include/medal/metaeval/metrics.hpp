#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medal/core/types.hpp"

namespace medal::metaeval {

// ---------------------------------------------------------------------------
// Correlation
// ---------------------------------------------------------------------------

struct Correlation {
    std::optional<double> r;  // absent for constant input
    std::optional<double> p;  // two-sided, t-approximation
    std::size_t n = 0;
};

/// Product-moment correlation; p from t = r*sqrt((n-2)/(1-r^2)) with n-2
/// degrees of freedom. Needs n >= 3 and non-constant inputs for a defined r.
Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Pearson on average ranks; ties receive their mean rank.
Correlation spearman(const std::vector<double>& xs, const std::vector<double>& ys);

/// Average ranks (1-based); ties share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values);

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation. Exposed because the t-distribution tail is built on it.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

/// Fraction of positions where both vectors agree exactly.
double exact_agreement(const std::vector<int>& a, const std::vector<int>& b);

/// Fraction of positions differing by at most 1 (overall scores).
double adjacent_agreement(const std::vector<int>& a, const std::vector<int>& b);

enum class AlphaLevel { nominal, interval };

/// Rating matrix for Krippendorff's alpha: one row per rater, one column per
/// item, missing ratings as nullopt.
using RatingMatrix = std::vector<std::vector<std::optional<double>>>;

/// Coincidence-matrix Krippendorff's alpha with pairable-values weighting.
/// Returns nullopt when no item has two ratings or all pairable values are
/// identical (expected disagreement zero).
std::optional<double> krippendorff_alpha(const RatingMatrix& ratings, AlphaLevel level);

// ---------------------------------------------------------------------------
// McNemar
// ---------------------------------------------------------------------------

struct McNemarResult {
    int b = 0;  // a correct, b wrong
    int c = 0;  // a wrong, b correct
    double statistic = 0.0;  // (b-c)^2 / (b+c), 0 when b+c == 0
    double p = 1.0;          // exact two-sided binomial on (min(b,c), b+c)
    bool significant_at_05 = false;
};

/// Exact binomial McNemar over paired binary predictions against a shared
/// gold vector; p = min(1, 2 * P[Bin(b+c, 1/2) <= min(b, c)]).
McNemarResult mcnemar(const std::vector<int>& pred_a, const std::vector<int>& pred_b,
                      const std::vector<int>& gold);

// ---------------------------------------------------------------------------
// Classification metrics
// ---------------------------------------------------------------------------

struct IssueMetrics {
    std::optional<double> f1_plus;
    std::optional<double> f1_minus;
    std::optional<double> precision_plus;
    std::optional<double> recall_plus;
    std::optional<double> accuracy;
    double predicted_positive_count = 0.0;
};

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
    void add(int predicted, int actual);
};

/// Metrics from a confusion matrix. F1 for a class with no predicted and no
/// actual members is reported absent (never 1.0); precision/recall are
/// absent when their denominators are zero.
IssueMetrics metrics_from_confusion(const ConfusionCounts& counts);

/// Unweighted mean of per-set metrics; absent components are skipped, and a
/// value is absent only when absent in every set.
IssueMetrics mean_metrics(const std::vector<IssueMetrics>& per_set);

}  // namespace medal::metaeval
