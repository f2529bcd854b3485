#include "anchscgan/metrics.hpp"

#include "anchscgan/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace anchscgan {

ConfusionCounts confusion_counts(const IntVector& truth, const IntVector& predicted) {
    if (truth.size() != predicted.size()) fail(ErrorCode::value, "label vectors differ in size");
    ConfusionCounts c;
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        if (truth(i) == 1)
            ++(predicted(i) == 1 ? c.tp : c.fn);
        else
            ++(predicted(i) == 1 ? c.fp : c.tn);
    }
    return c;
}

Metrics metrics_from_counts(const ConfusionCounts& c) {
    auto ratio = [](long num, long denom) {
        return denom == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(denom);
    };
    Metrics m;
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.specificity = ratio(c.tn, c.tn + c.fp);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    m.gmean = std::sqrt(m.recall * m.specificity);
    m.auc = (m.recall + m.specificity) / 2.0;
    return m;
}

double roc_auc(const Vector& decision, const IntVector& truth) {
    if (decision.size() != truth.size()) fail(ErrorCode::value, "size mismatch");
    const Eigen::Index n = decision.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return decision(a) != decision(b) ? decision(a) < decision(b) : a < b;
    });

    std::vector<double> rank(static_cast<std::size_t>(n));
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && decision(order[static_cast<std::size_t>(j + 1)]) ==
                                decision(order[static_cast<std::size_t>(i)]))
            ++j;
        const double average = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index t = i; t <= j; ++t)
            rank[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] = average;
        i = j + 1;
    }

    double positive_ranks = 0.0;
    long n_pos = 0, n_neg = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (truth(t) == 1) {
            positive_ranks += rank[static_cast<std::size_t>(t)];
            ++n_pos;
        } else {
            ++n_neg;
        }
    }
    if (n_pos == 0 || n_neg == 0) return 0.0;
    return (positive_ranks - 0.5 * static_cast<double>(n_pos) * (n_pos + 1.0)) /
           (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

constexpr double kGammaEps = 1e-12;
constexpr int kGammaMaxIter = 10000;

// Regularized lower incomplete gamma P(a,x) by series, for x < a+1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < kGammaMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kGammaEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by continued fraction (modified
// Lentz), for x >= a+1.
double gamma_q_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kGammaMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kGammaEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_upper_tail(double x, double degrees_of_freedom) {
    if (degrees_of_freedom <= 0.0) fail(ErrorCode::value, "degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    const double a = degrees_of_freedom / 2.0;
    const double half = x / 2.0;
    return half < a + 1.0 ? 1.0 - gamma_p_series(a, half) : gamma_q_fraction(a, half);
}

FriedmanResult friedman_test(const Matrix& scores) {
    const Eigen::Index n = scores.rows();  // datasets
    const Eigen::Index k = scores.cols();  // methods
    if (n < 2 || k < 2) fail(ErrorCode::value, "friedman test needs >=2 datasets and >=2 methods");

    Matrix ranks(n, k);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    for (Eigen::Index row = 0; row < n; ++row) {
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            const double sa = scores(row, a), sb = scores(row, b);
            return sa != sb ? sa > sb : a < b;  // rank 1 = highest score
        });
        Eigen::Index i = 0;
        while (i < k) {
            Eigen::Index j = i;
            while (j + 1 < k && scores(row, order[static_cast<std::size_t>(j + 1)]) ==
                                    scores(row, order[static_cast<std::size_t>(i)]))
                ++j;
            const double average = 0.5 * static_cast<double>(i + j) + 1.0;
            for (Eigen::Index t = i; t <= j; ++t)
                ranks(row, order[static_cast<std::size_t>(t)]) = average;
            i = j + 1;
        }
    }

    FriedmanResult result;
    result.average_ranks = ranks.colwise().mean();
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    result.statistic = 12.0 * nd / (kd * (kd + 1.0)) *
                       (result.average_ranks.squaredNorm() -
                        kd * (kd + 1.0) * (kd + 1.0) / 4.0);
    result.statistic = std::max(result.statistic, 0.0);
    result.p_value = chi_square_upper_tail(result.statistic, kd - 1.0);
    return result;
}

}  // namespace anchscgan
