#pragma once

#include "anchscgan/types.hpp"

namespace anchscgan {

// Minority (label 1) is the positive class.
struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;
};

ConfusionCounts confusion_counts(const IntVector& truth, const IntVector& predicted);

// Zero-denominator convention: a ratio with an empty denominator is 0.
// auc here is balanced accuracy from hard predictions, (recall+specificity)/2.
struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double specificity = 0.0;
    double f1 = 0.0;
    double gmean = 0.0;
    double auc = 0.0;
};

Metrics metrics_from_counts(const ConfusionCounts& c);

// Rank-based ROC-AUC over a continuous decision value (average ranks on
// ties). Available behind a benchmark flag; never used for acceptance.
double roc_auc(const Vector& decision, const IntVector& truth);

// Upper tail of the chi-square distribution via the regularized incomplete
// gamma function, converged to relative accuracy 1e-12.
double chi_square_upper_tail(double x, double degrees_of_freedom);

struct FriedmanResult {
    double statistic = 0.0;
    double p_value = 1.0;
    Vector average_ranks;  // per method; rank 1 = best (highest score)
};

// scores: datasets x methods, higher = better; ties get average ranks.
FriedmanResult friedman_test(const Matrix& scores);

}  // namespace anchscgan
