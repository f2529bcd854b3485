#pragma once

#include "anchscgan/neighbors.hpp"
#include "anchscgan/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace anchscgan {

// Index convention: minority indices are positions within the train split's
// minority rows (original order), majority indices likewise; rows discarded
// as noise or overlap keep their positions.
struct AnchorSet {
    std::vector<Eigen::Index> minority_indices;
    std::vector<Eigen::Index> majority_indices;
    Eigen::Index k_used_minority = 0;
    Eigen::Index k_used_majority = 0;
    std::vector<Eigen::Index> discarded_noise;    // minority rows
    std::vector<Eigen::Index> discarded_overlap;  // majority rows
    bool exhausted = false;  // balancing ran out of candidates
};

struct MinoritySelection {
    std::vector<Eigen::Index> anchors;
    std::vector<Eigen::Index> noise;
};

struct MajoritySelection {
    std::vector<Eigen::Index> anchors;
    std::vector<Eigen::Index> overlap_discard;
};

// Pass 1: minority x is an anchor iff 1 <= |NN(x) ∩ majority| < k, noise iff
// the count equals k and removal is enabled. Pass 2 (single pass): remaining
// minority rows adjacent to a pass-1 anchor join.
MinoritySelection select_minority_anchors(const Matrix& minority, const Matrix& majority,
                                          Eigen::Index k, bool noise_removal);

// counts > k/2: overlap discard; 0 < counts < k/2: anchor; counts of 0 or
// exactly k/2: kept but not an anchor. Compared as 2*count vs k.
MajoritySelection select_majority_anchors(const FrequencyTable& freq, Eigen::Index k);

// Grows the deficient side's k by +2 over the pruned data (noise and overlap
// rows removed), never dropping an already-selected anchor, then draws the
// shortfall seeded-uniform from the newly available candidates.
AnchorSet balance_anchors(const Matrix& minority, const Matrix& majority, Eigen::Index k0,
                          const MinoritySelection& min_sel, const MajoritySelection& maj_sel,
                          bool noise_removal, std::uint64_t seed);

struct AnchorResult {
    AnchorSet set;
    Dataset pruned_train;                          // train minus noise minus overlap
    std::vector<Eigen::Index> minority_train_rows;  // class-local -> train row
    std::vector<Eigen::Index> majority_train_rows;
    bool noise_removal = false;
};

// Full three-step composition. noise_removal defaults to on when the
// imbalance ratio is below 30.
AnchorResult select_anchors(const Dataset& train, Eigen::Index k,
                            std::optional<bool> noise_removal, std::uint64_t seed);

}  // namespace anchscgan
