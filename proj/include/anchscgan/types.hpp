#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace anchscgan {

// 64-bit floats throughout: problem sizes are tiny and the finite-difference
// gradient contract (rel err < 1e-4) needs the headroom.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

// Binarized tabular dataset. Class 1 is the minority by construction; the
// original label strings are kept so CSV round-trips preserve them.
struct Dataset {
    Matrix features;                        // n x d
    IntVector labels;                       // n, values in {0,1}
    std::vector<std::string> column_names;  // d feature names
    std::string label_column = "class";
    std::string minority_value = "1";
    std::vector<std::string> label_strings;  // n, original label cells

    Eigen::Index n() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }
    Eigen::Index count(int label) const {
        return (labels.array() == label).count();
    }
    Eigen::Index minority_count() const { return count(1); }
    Eigen::Index majority_count() const { return count(0); }
};

std::vector<Eigen::Index> rows_with_label(const Dataset& data, int label);
Matrix take_rows(const Matrix& m, const std::vector<Eigen::Index>& rows);
Dataset take_rows(const Dataset& data, const std::vector<Eigen::Index>& rows);

}  // namespace anchscgan
