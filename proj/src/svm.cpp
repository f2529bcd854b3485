#include "anchscgan/svm.hpp"

#include "anchscgan/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>
#include <vector>

namespace anchscgan {

namespace {

double scale_gamma(const Matrix& x) {
    const double mean = x.mean();
    const double var = (x.array() - mean).square().sum() / static_cast<double>(x.size());
    const double denom = static_cast<double>(x.cols()) * var;
    return denom > 0.0 ? 1.0 / denom : 1.0 / static_cast<double>(x.cols());
}

// Gram rows on demand: full matrix for small problems, an LRU-ish FIFO cache
// of rows otherwise. Deterministic either way.
class KernelSource {
  public:
    KernelSource(const Matrix& x, double gamma) : x_(x), gamma_(gamma) {
        const Eigen::Index n = x.rows();
        norms_ = x.rowwise().squaredNorm();
        full_ = n <= 2048;
        if (full_) {
            gram_.noalias() = x * x.transpose();
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    gram_(i, j) = std::exp(-gamma_ * (norms_(i) + norms_(j) - 2.0 * gram_(i, j)));
        }
    }

    Vector row(Eigen::Index i) {
        if (full_) return gram_.row(i);
        auto it = cache_.find(i);
        if (it != cache_.end()) return it->second;
        Vector r = (x_ * x_.row(i).transpose()).eval();
        for (Eigen::Index j = 0; j < r.size(); ++j)
            r(j) = std::exp(-gamma_ * (norms_(i) + norms_(j) - 2.0 * r(j)));
        if (cache_.size() >= 384) {
            cache_.erase(insertion_order_.front());
            insertion_order_.pop_front();
        }
        insertion_order_.push_back(i);
        return cache_.emplace(i, std::move(r)).first->second;
    }

  private:
    const Matrix& x_;
    double gamma_;
    Vector norms_;
    bool full_ = false;
    Matrix gram_;
    std::unordered_map<Eigen::Index, Vector> cache_;
    std::list<Eigen::Index> insertion_order_;
};

}  // namespace

SvmModel train_svm(const Matrix& x, const IntVector& labels, double C, double gamma,
                   double tolerance) {
    const Eigen::Index n = x.rows();
    if (n < 2) fail(ErrorCode::state, "svm needs at least 2 rows");
    if ((labels.array() == 1).count() == 0 || (labels.array() == 0).count() == 0)
        fail(ErrorCode::state, "svm needs both classes");
    if (C <= 0.0) fail(ErrorCode::value, "C must be positive");

    SvmModel model;
    model.C = C;
    model.gamma = gamma > 0.0 ? gamma : scale_gamma(x);

    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = labels(i) == 1 ? 1.0 : -1.0;

    KernelSource kernel(x, model.gamma);
    Vector alpha = Vector::Zero(n);
    Vector grad = Vector::Constant(n, -1.0);

    const long max_iter = 100000 + 100 * static_cast<long>(n);
    double violation_high = 0.0, violation_low = 0.0;
    long iter = 0;
    for (; iter < max_iter; ++iter) {
        Eigen::Index i = -1, j = -1;
        violation_high = -std::numeric_limits<double>::infinity();
        violation_low = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double v = -y(t) * grad(t);
            const bool in_up = (y(t) > 0 && alpha(t) < C) || (y(t) < 0 && alpha(t) > 0);
            const bool in_low = (y(t) < 0 && alpha(t) < C) || (y(t) > 0 && alpha(t) > 0);
            if (in_up && v > violation_high) {
                violation_high = v;
                i = t;
            }
            if (in_low && v < violation_low) {
                violation_low = v;
                j = t;
            }
        }
        if (i < 0 || j < 0 || violation_high - violation_low <= tolerance) break;

        const Vector ki = kernel.row(i);
        const Vector kj = kernel.row(j);

        double quad = ki(i) + kj(j) - 2.0 * ki(j);
        if (quad <= 0.0) quad = 1e-12;
        // Direction alpha_i += y_i*t, alpha_j -= y_j*t keeps sum(y.alpha)=0.
        double t_star = (violation_high - violation_low) / quad;
        auto room = [&](double yv, double av, bool positive_direction) {
            // remaining movement of alpha along +t for this coordinate
            const double up = positive_direction ? (yv > 0 ? C - av : av)
                                                 : (yv > 0 ? av : C - av);
            return up;
        };
        t_star = std::min(t_star, room(y(i), alpha(i), true));
        t_star = std::min(t_star, room(y(j), alpha(j), false));

        const double delta_i = y(i) * t_star;
        const double delta_j = -y(j) * t_star;
        alpha(i) += delta_i;
        alpha(j) += delta_j;
        alpha(i) = std::clamp(alpha(i), 0.0, C);
        alpha(j) = std::clamp(alpha(j), 0.0, C);
        grad += (y(i) * delta_i) * (y.array() * ki.array()).matrix();
        grad += (y(j) * delta_j) * (y.array() * kj.array()).matrix();
    }
    model.converged = iter < max_iter;

    // Bias from free support vectors, midpoint of the violation band as the
    // fallback when every alpha sits on the box.
    double bias_sum = 0.0;
    long free_count = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (alpha(t) > 1e-12 && alpha(t) < C - 1e-12) {
            bias_sum += -y(t) * grad(t);
            ++free_count;
        }
    }
    if (free_count > 0) {
        model.bias = bias_sum / static_cast<double>(free_count);
    } else {
        double high = -std::numeric_limits<double>::infinity();
        double low = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double v = -y(t) * grad(t);
            const bool in_up = (y(t) > 0 && alpha(t) < C) || (y(t) < 0 && alpha(t) > 0);
            const bool in_low = (y(t) < 0 && alpha(t) < C) || (y(t) > 0 && alpha(t) > 0);
            if (in_up) high = std::max(high, v);
            if (in_low) low = std::min(low, v);
        }
        model.bias = (high + low) / 2.0;
    }

    std::vector<Eigen::Index> sv;
    for (Eigen::Index t = 0; t < n; ++t)
        if (alpha(t) > 1e-12) sv.push_back(t);
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
    model.dual_coef.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t s = 0; s < sv.size(); ++s) {
        model.support_vectors.row(static_cast<Eigen::Index>(s)) = x.row(sv[s]);
        model.dual_coef(static_cast<Eigen::Index>(s)) = alpha(sv[s]) * y(sv[s]);
    }
    return model;
}

Vector svm_decision(const SvmModel& model, const Matrix& x) {
    if (x.cols() != model.support_vectors.cols()) fail(ErrorCode::value, "feature width mismatch");
    const Vector sv_norms = model.support_vectors.rowwise().squaredNorm();
    Vector decision(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Vector cross = model.support_vectors * x.row(i).transpose();
        const double xn = x.row(i).squaredNorm();
        double sum = model.bias;
        for (Eigen::Index s = 0; s < model.dual_coef.size(); ++s)
            sum += model.dual_coef(s) *
                   std::exp(-model.gamma * (sv_norms(s) + xn - 2.0 * cross(s)));
        decision(i) = sum;
    }
    return decision;
}

IntVector svm_predict(const SvmModel& model, const Matrix& x) {
    const Vector decision = svm_decision(model, x);
    IntVector labels(decision.size());
    for (Eigen::Index i = 0; i < decision.size(); ++i) labels(i) = decision(i) > 0.0 ? 1 : 0;
    return labels;
}

}  // namespace anchscgan
