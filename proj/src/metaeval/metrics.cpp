#include "medal/metaeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "medal/util/errors.hpp"

namespace medal::metaeval {
namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b)
        throw Error("vector length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

bool is_constant(const std::vector<double>& xs) {
    for (double x : xs)
        if (x != xs.front()) return false;
    return true;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // continued fraction (Lentz), with the symmetry transform for convergence
    auto betacf = [](double a, double b, double x) {
        constexpr int kMaxIter = 300;
        constexpr double kEps = 3e-16;
        constexpr double kFpMin = 1e-300;
        double qab = a + b, qap = a + 1.0, qam = a - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * x / qap;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= kMaxIter; ++m) {
            int m2 = 2 * m;
            double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
            d = 1.0 + aa * d;
            if (std::fabs(d) < kFpMin) d = kFpMin;
            c = 1.0 + aa / c;
            if (std::fabs(c) < kFpMin) c = kFpMin;
            d = 1.0 / d;
            h *= d * c;
            aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
            d = 1.0 + aa * d;
            if (std::fabs(d) < kFpMin) d = kFpMin;
            c = 1.0 + aa / c;
            if (std::fabs(c) < kFpMin) c = kFpMin;
            d = 1.0 / d;
            double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < kEps) break;
        }
        return h;
    };

    double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - ln_beta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0) return 1.0;
    if (!std::isfinite(t)) return 0.0;
    double x = df / (df + t * t);
    return incomplete_beta(df / 2.0, 0.5, x);
}

Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    check_lengths(xs.size(), ys.size());
    Correlation result;
    result.n = xs.size();
    if (xs.size() < 3) return result;
    if (is_constant(xs) || is_constant(ys)) return result;

    const double n = static_cast<double>(xs.size());
    double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mean_x;
        double dy = ys[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);
    result.r = r;

    double df = n - 2.0;
    if (std::fabs(r) >= 1.0) {
        result.p = 0.0;
    } else {
        double t = r * std::sqrt(df / (1.0 - r * r));
        result.p = student_t_two_sided_p(t, df);
    }
    return result;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

Correlation spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    check_lengths(xs.size(), ys.size());
    if (xs.size() < 3 || is_constant(xs) || is_constant(ys)) {
        Correlation result;
        result.n = xs.size();
        return result;
    }
    return pearson(average_ranks(xs), average_ranks(ys));
}

double exact_agreement(const std::vector<int>& a, const std::vector<int>& b) {
    check_lengths(a.size(), b.size());
    if (a.empty()) throw Error("agreement over empty vectors");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] == b[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(a.size());
}

double adjacent_agreement(const std::vector<int>& a, const std::vector<int>& b) {
    check_lengths(a.size(), b.size());
    if (a.empty()) throw Error("agreement over empty vectors");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) <= 1) ++hits;
    return static_cast<double>(hits) / static_cast<double>(a.size());
}

std::optional<double> krippendorff_alpha(const RatingMatrix& ratings, AlphaLevel level) {
    if (ratings.empty()) return std::nullopt;
    const std::size_t items = ratings.front().size();
    for (const auto& row : ratings) check_lengths(row.size(), items);

    auto delta = [level](double v, double w) {
        if (level == AlphaLevel::nominal) return v == w ? 0.0 : 1.0;
        return (v - w) * (v - w);
    };

    // distinct pairable values and per-value totals
    std::map<double, double> value_totals;  // n_v
    double n_pairable = 0.0;
    // observed disagreement accumulated item by item
    double observed = 0.0;

    for (std::size_t u = 0; u < items; ++u) {
        std::vector<double> unit;
        for (const auto& row : ratings)
            if (row[u]) unit.push_back(*row[u]);
        const std::size_t m = unit.size();
        if (m < 2) continue;  // unpaired values carry no weight
        for (double v : unit) value_totals[v] += 1.0;
        n_pairable += static_cast<double>(m);
        double pair_sum = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (i != j) pair_sum += delta(unit[i], unit[j]);
        observed += pair_sum / (static_cast<double>(m) - 1.0);
    }

    if (n_pairable < 2.0 || value_totals.size() < 2) return std::nullopt;

    double expected = 0.0;
    for (const auto& [v, nv] : value_totals)
        for (const auto& [w, nw] : value_totals) expected += nv * nw * delta(v, w);
    expected /= n_pairable * (n_pairable - 1.0);
    if (expected == 0.0) return std::nullopt;

    double d_observed = observed / n_pairable;
    return 1.0 - d_observed / expected;
}

void ConfusionCounts::add(int predicted, int actual) {
    if (predicted == 1 && actual == 1) ++tp;
    else if (predicted == 1 && actual == 0) ++fp;
    else if (predicted == 0 && actual == 1) ++fn;
    else ++tn;
}

IssueMetrics metrics_from_confusion(const ConfusionCounts& counts) {
    IssueMetrics m;
    m.predicted_positive_count = static_cast<double>(counts.tp + counts.fp);

    if (counts.tp + counts.fp > 0)
        m.precision_plus = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
    if (counts.tp + counts.fn > 0)
        m.recall_plus = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);

    // F1 with no predicted and no actual positives stays absent so rare
    // issues cannot score a vacuous 1.0
    if (counts.tp + counts.fp + counts.fn > 0)
        m.f1_plus = 2.0 * static_cast<double>(counts.tp) /
                    static_cast<double>(2 * counts.tp + counts.fp + counts.fn);
    if (counts.tn + counts.fn + counts.fp > 0)
        m.f1_minus = 2.0 * static_cast<double>(counts.tn) /
                     static_cast<double>(2 * counts.tn + counts.fn + counts.fp);
    if (counts.total() > 0)
        m.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
    return m;
}

IssueMetrics mean_metrics(const std::vector<IssueMetrics>& per_set) {
    IssueMetrics out;
    auto mean_component = [&](auto accessor) -> std::optional<double> {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& m : per_set) {
            if (auto v = accessor(m)) {
                sum += *v;
                ++n;
            }
        }
        if (n == 0) return std::nullopt;
        return sum / static_cast<double>(n);
    };
    out.f1_plus = mean_component([](const IssueMetrics& m) { return m.f1_plus; });
    out.f1_minus = mean_component([](const IssueMetrics& m) { return m.f1_minus; });
    out.precision_plus = mean_component([](const IssueMetrics& m) { return m.precision_plus; });
    out.recall_plus = mean_component([](const IssueMetrics& m) { return m.recall_plus; });
    out.accuracy = mean_component([](const IssueMetrics& m) { return m.accuracy; });
    double count_sum = 0.0;
    for (const auto& m : per_set) count_sum += m.predicted_positive_count;
    out.predicted_positive_count =
        per_set.empty() ? 0.0 : count_sum / static_cast<double>(per_set.size());
    return out;
}

McNemarResult mcnemar(const std::vector<int>& pred_a, const std::vector<int>& pred_b,
                      const std::vector<int>& gold) {
    check_lengths(pred_a.size(), gold.size());
    check_lengths(pred_b.size(), gold.size());
    McNemarResult result;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        bool a_right = pred_a[i] == gold[i];
        bool b_right = pred_b[i] == gold[i];
        if (a_right && !b_right) ++result.b;
        if (!a_right && b_right) ++result.c;
    }
    int n = result.b + result.c;
    if (n == 0) {
        result.statistic = 0.0;
        result.p = 1.0;
        return result;
    }
    double diff = static_cast<double>(result.b - result.c);
    result.statistic = diff * diff / static_cast<double>(n);

    // exact two-sided binomial tail at p = 1/2
    int k = std::min(result.b, result.c);
    // log-space partial sums keep large n stable
    double tail = 0.0;
    for (int i = 0; i <= k; ++i) {
        double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                          std::lgamma(n - i + 1.0) - n * std::log(2.0);
        tail += std::exp(log_term);
    }
    result.p = std::min(1.0, 2.0 * tail);
    result.significant_at_05 = result.p < 0.05;
    return result;
}

}  // namespace medal::metaeval
