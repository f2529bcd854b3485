#pragma once

#include "anchscgan/types.hpp"

#include <cstdint>
#include <vector>

namespace anchscgan {

struct BaselineNotes {
    bool k_reduced = false;       // minority count forced a smaller k
    bool fell_back_to_smote = false;
    Eigen::Index k_used = 0;
};

// Duplicate seeded-uniform minority rows until exact balance.
Dataset ros(const Dataset& train, std::uint64_t seed);

// Each synthetic row is x + delta*(nn - x) with delta ~ U[0,1), x a seeded
// minority row and nn one of its k minority-only nearest neighbors.
Dataset smote(const Dataset& train, Eigen::Index k, std::uint64_t seed,
              BaselineNotes* notes = nullptr);

// borderline-1: parents come from the danger set (minority rows whose m-sized
// mixed neighborhood is at least half majority but not all majority);
// interpolation neighbors stay minority-only.
Dataset borderline_smote(const Dataset& train, Eigen::Index k, Eigen::Index m,
                         std::uint64_t seed, BaselineNotes* notes = nullptr);

// Per-row synthetic quota proportional to the majority share of the mixed
// k-neighborhood; rounding residue settled on the largest shares first.
Dataset adasyn(const Dataset& train, Eigen::Index k, std::uint64_t seed,
               BaselineNotes* notes = nullptr);

}  // namespace anchscgan
