#pragma once

#include "anchscgan/nn.hpp"
#include "anchscgan/types.hpp"

#include <cstdint>
#include <vector>

namespace anchscgan {

// MLP over normalized features: d -> 2d relu -> 4d relu -> d sigmoid -> 1
// sigmoid. The width-d sigmoid layer doubles as the class representation.
struct PriorClassifier {
    NetworkParams net;
    bool frozen = false;
};

// One epoch is a full pass over the shuffled anchor rows in consecutive
// mini-batches. batch_size 0 picks min(128, max(8, n/10)).
PriorClassifier train_prior(const Dataset& anchors, int epochs, Eigen::Index batch_size,
                            double lr, std::uint64_t seed);

Vector score(const PriorClassifier& c, const Matrix& x);                 // sigmoid output
IntVector classify(const PriorClassifier& c, const Matrix& x);           // score >= 0.5 -> 1
Matrix class_representation(const PriorClassifier& c, const Matrix& x);  // third layer

struct FilterOutcome {
    Dataset kept;
    std::vector<Eigen::Index> kept_rows;  // into the input dataset
    Eigen::Index removed_minority = 0;
    Eigen::Index removed_majority = 0;
    bool safeguard_triggered = false;  // >50% of minority rows were misclassified
};

// Keeps rows whose prediction matches their label. If more than half the
// minority rows would be lost, every minority row is kept instead.
FilterOutcome filter_misclassified(const PriorClassifier& c, const Dataset& data);

}  // namespace anchscgan
