#pragma once

#include "anchscgan/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace anchscgan {

struct KMeansResult {
    Matrix centroids;  // c x d
    std::vector<Eigen::Index> assignments;
    double inertia = 0.0;
    Eigen::Index c = 0;
    bool reduced = false;  // requested c exceeded the distinct point count
};

// Seeded farthest-point init, then Lloyd iterations until the assignment
// fixpoint, an inertia improvement below tol, or max_iter. An emptied cluster
// is reseeded to the point farthest from its assigned centroid.
KMeansResult kmeans(const Matrix& points, Eigen::Index c, std::uint64_t seed,
                    int max_iter = 100, double tol = 1e-8);

struct CentroidSet {
    Matrix minority_centroids;  // c_min x d
    Matrix majority_centroids;  // c_maj x d
    double inertia_minority = 0.0;
    double inertia_majority = 0.0;
    bool reduced = false;
};

CentroidSet build_centroids(const Matrix& minority_anchor_rows,
                            const Matrix& majority_anchor_rows, Eigen::Index c,
                            std::uint64_t seed);

// Uniform seeded draw over the 2 nearest same-class centroids (all of them
// when fewer than 2 exist); returns the centroid row index.
Eigen::Index pick_positive(const Vector& x, const Matrix& same_class_centroids,
                           std::mt19937_64& rng);

}  // namespace anchscgan
