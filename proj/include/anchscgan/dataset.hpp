#pragma once

#include "anchscgan/types.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace anchscgan {

// Per-column min-max state. Fitted on training rows only; constant columns
// map to 0 and invert back to their constant.
struct Scaler {
    Vector col_min;
    Vector col_max;
};

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& minority_value);
void write_csv(const Dataset& data, const std::string& path);

Scaler fit_scaler(const Matrix& train_features);
inline Scaler fit_scaler(const Dataset& train) { return fit_scaler(train.features); }
Matrix apply_scaler(const Scaler& s, const Matrix& x);
Matrix invert_scaler(const Scaler& s, const Matrix& x);

std::pair<Dataset, Dataset> stratified_split(const Dataset& data,
                                             double test_fraction,
                                             std::uint64_t seed);

}  // namespace anchscgan
