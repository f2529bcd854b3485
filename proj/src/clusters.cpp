#include "anchscgan/clusters.hpp"

#include "anchscgan/error.hpp"
#include "anchscgan/rng.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace anchscgan {

namespace {

Eigen::Index count_distinct(const Matrix& points) {
    std::set<std::vector<double>> seen;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        std::vector<double> row(points.row(i).begin(), points.row(i).end());
        seen.insert(std::move(row));
    }
    return static_cast<Eigen::Index>(seen.size());
}

}  // namespace

KMeansResult kmeans(const Matrix& points, Eigen::Index c, std::uint64_t seed, int max_iter,
                    double tol) {
    const Eigen::Index n = points.rows();
    if (n == 0) fail(ErrorCode::state, "k-means needs at least one point");
    if (c < 1) fail(ErrorCode::value, "cluster count must be >= 1");

    KMeansResult result;
    const Eigen::Index distinct = count_distinct(points);
    if (c > distinct) {
        c = distinct;
        result.reduced = true;
    }
    result.c = c;

    // Farthest-point seeding: first pick seeded-uniform, the rest greedy.
    auto rng = make_rng(seed, SeedStream::clusters);
    std::vector<Eigen::Index> chosen;
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    chosen.push_back(first(rng));
    Vector nearest_d2 = Vector::Constant(n, std::numeric_limits<double>::infinity());
    while (static_cast<Eigen::Index>(chosen.size()) < c) {
        const Eigen::Index latest = chosen.back();
        for (Eigen::Index i = 0; i < n; ++i)
            nearest_d2(i) = std::min(nearest_d2(i),
                                     (points.row(i) - points.row(latest)).squaredNorm());
        Eigen::Index far = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (nearest_d2(i) > nearest_d2(far)) far = i;
        chosen.push_back(far);
    }

    result.centroids.resize(c, points.cols());
    for (Eigen::Index j = 0; j < c; ++j) result.centroids.row(j) = points.row(chosen[static_cast<std::size_t>(j)]);

    result.assignments.assign(static_cast<std::size_t>(n), 0);
    double previous_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = 0;
            double best_d2 = (points.row(i) - result.centroids.row(0)).squaredNorm();
            for (Eigen::Index j = 1; j < c; ++j) {
                const double d2 = (points.row(i) - result.centroids.row(j)).squaredNorm();
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = j;
                }
            }
            if (result.assignments[static_cast<std::size_t>(i)] != best) {
                result.assignments[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
            inertia += best_d2;
        }

        // Reseed empties to the worst-fitting point before the mean update.
        std::vector<Eigen::Index> sizes(static_cast<std::size_t>(c), 0);
        for (Eigen::Index a : result.assignments) ++sizes[static_cast<std::size_t>(a)];
        for (Eigen::Index j = 0; j < c; ++j) {
            if (sizes[static_cast<std::size_t>(j)] > 0) continue;
            Eigen::Index worst = -1;
            double worst_d2 = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const Eigen::Index a = result.assignments[static_cast<std::size_t>(i)];
                if (sizes[static_cast<std::size_t>(a)] <= 1) continue;
                const double d2 = (points.row(i) - result.centroids.row(a)).squaredNorm();
                if (d2 > worst_d2) {
                    worst_d2 = d2;
                    worst = i;
                }
            }
            if (worst < 0) continue;
            --sizes[static_cast<std::size_t>(result.assignments[static_cast<std::size_t>(worst)])];
            result.assignments[static_cast<std::size_t>(worst)] = j;
            ++sizes[static_cast<std::size_t>(j)];
            result.centroids.row(j) = points.row(worst);
            changed = true;
        }

        Matrix sums = Matrix::Zero(c, points.cols());
        for (Eigen::Index i = 0; i < n; ++i)
            sums.row(result.assignments[static_cast<std::size_t>(i)]) += points.row(i);
        for (Eigen::Index j = 0; j < c; ++j)
            if (sizes[static_cast<std::size_t>(j)] > 0)
                result.centroids.row(j) = sums.row(j) / static_cast<double>(sizes[static_cast<std::size_t>(j)]);

        result.inertia = inertia;
        if (!changed || previous_inertia - inertia < tol) break;
        previous_inertia = inertia;
    }

    // Final inertia against the final centroids.
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        double best_d2 = (points.row(i) - result.centroids.row(0)).squaredNorm();
        for (Eigen::Index j = 1; j < c; ++j) {
            const double d2 = (points.row(i) - result.centroids.row(j)).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = j;
            }
        }
        result.assignments[static_cast<std::size_t>(i)] = best;
        inertia += best_d2;
    }
    result.inertia = inertia;
    return result;
}

CentroidSet build_centroids(const Matrix& minority_anchor_rows,
                            const Matrix& majority_anchor_rows, Eigen::Index c,
                            std::uint64_t seed) {
    CentroidSet set;
    const KMeansResult min_side = kmeans(minority_anchor_rows, c, splitmix64(seed ^ 0x1));
    const KMeansResult maj_side = kmeans(majority_anchor_rows, c, splitmix64(seed ^ 0x2));
    set.minority_centroids = min_side.centroids;
    set.majority_centroids = maj_side.centroids;
    set.inertia_minority = min_side.inertia;
    set.inertia_majority = maj_side.inertia;
    set.reduced = min_side.reduced || maj_side.reduced;
    return set;
}

Eigen::Index pick_positive(const Vector& x, const Matrix& same_class_centroids,
                           std::mt19937_64& rng) {
    const Eigen::Index c = same_class_centroids.rows();
    if (c < 1) fail(ErrorCode::state, "no centroids to pick a positive from");
    if (c == 1) return 0;

    Eigen::Index best = 0, second = 1;
    double best_d2 = (same_class_centroids.row(0).transpose() - x).squaredNorm();
    double second_d2 = (same_class_centroids.row(1).transpose() - x).squaredNorm();
    if (second_d2 < best_d2) {
        std::swap(best, second);
        std::swap(best_d2, second_d2);
    }
    for (Eigen::Index j = 2; j < c; ++j) {
        const double d2 = (same_class_centroids.row(j).transpose() - x).squaredNorm();
        if (d2 < best_d2) {
            second = best;
            second_d2 = best_d2;
            best = j;
            best_d2 = d2;
        } else if (d2 < second_d2) {
            second = j;
            second_d2 = d2;
        }
    }
    std::uniform_int_distribution<int> flip(0, 1);
    return flip(rng) == 0 ? best : second;
}

}  // namespace anchscgan
