#pragma once

#include "anchscgan/types.hpp"

namespace anchscgan {

// RBF-kernel C-SVM solved by sequential minimal optimization with
// max-violating-pair selection; fully deterministic.
struct SvmModel {
    Matrix support_vectors;
    Vector dual_coef;  // alpha_i * y_i per support vector
    double bias = 0.0;
    double gamma = 1.0;
    double C = 1.0;
    bool converged = true;
};

// labels in {0,1}, minority = 1 = positive. gamma <= 0 picks the "scale"
// convention 1/(d * variance of all feature entries).
SvmModel train_svm(const Matrix& x, const IntVector& labels, double C = 1.0,
                   double gamma = -1.0, double tolerance = 1e-3);

Vector svm_decision(const SvmModel& model, const Matrix& x);
IntVector svm_predict(const SvmModel& model, const Matrix& x);

}  // namespace anchscgan
