#pragma once

#include "anchscgan/types.hpp"

#include <memory>
#include <vector>

namespace anchscgan {

// Exact Euclidean k-nearest-neighbor index. Ties break toward the lower row
// index; the KD-tree path returns bit-identical results to the linear scan.
class NeighborIndex {
  public:
    explicit NeighborIndex(Matrix points, bool accelerate = true);

    const Matrix& points() const { return points_; }
    Eigen::Index size() const { return points_.rows(); }

    // k smallest by (distance, index), ascending; `exclude` skips one row.
    std::vector<Eigen::Index> knn(const Vector& query, Eigen::Index k,
                                  Eigen::Index exclude = -1) const;

  private:
    struct Node {
        Eigen::Index axis = -1;  // -1 marks a leaf
        double split = 0.0;
        Eigen::Index left = -1, right = -1;
        Eigen::Index begin = 0, end = 0;  // leaf range into order_
    };
    Eigen::Index build(std::vector<Eigen::Index>& order, Eigen::Index lo, Eigen::Index hi);

    Matrix points_;
    std::vector<Node> nodes_;
    std::vector<Eigen::Index> order_;
    bool accelerated_ = false;
};

// counts[y] = number of minority rows whose k-neighborhood (over the stacked
// pool P then N, self excluded) contains majority row y.
struct FrequencyTable {
    std::vector<Eigen::Index> counts;  // indexed by majority row
};

FrequencyTable majority_frequency_table(const Matrix& minority, const Matrix& majority,
                                        Eigen::Index k);

}  // namespace anchscgan
