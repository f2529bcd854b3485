#include "anchscgan/baselines.hpp"

#include "anchscgan/error.hpp"
#include "anchscgan/neighbors.hpp"
#include "anchscgan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace anchscgan {

namespace {

void require_both_classes(const Dataset& train) {
    if (train.minority_count() == 0 || train.majority_count() == 0)
        fail(ErrorCode::state, "oversampling needs both classes");
    if (train.minority_count() > train.majority_count())
        fail(ErrorCode::state, "class 1 not minority in the train split");
}

Dataset append_minority(const Dataset& train, const Matrix& synthetic) {
    Dataset out = train;
    const Eigen::Index n = train.n();
    if (out.label_strings.size() != static_cast<std::size_t>(n)) {
        out.label_strings.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            out.label_strings[static_cast<std::size_t>(i)] =
                out.labels(i) == 1 ? out.minority_value : "0";
    }
    out.features.conservativeResize(n + synthetic.rows(), Eigen::NoChange);
    out.labels.conservativeResize(n + synthetic.rows());
    out.features.bottomRows(synthetic.rows()) = synthetic;
    for (Eigen::Index i = 0; i < synthetic.rows(); ++i) {
        out.labels(n + i) = 1;
        out.label_strings.push_back(train.minority_value);
    }
    return out;
}

// k minority-only nearest neighbors of every minority row (self excluded);
// k shrinks with a note when the class is too small.
std::vector<std::vector<Eigen::Index>> minority_neighbor_table(const Matrix& minority,
                                                               Eigen::Index& k,
                                                               BaselineNotes* notes) {
    const Eigen::Index n_min = minority.rows();
    if (n_min < 2) fail(ErrorCode::state, "interpolation needs at least 2 minority rows");
    if (k > n_min - 1) {
        k = n_min - 1;
        if (notes != nullptr) notes->k_reduced = true;
    }
    if (notes != nullptr) notes->k_used = k;
    NeighborIndex index(minority);
    std::vector<std::vector<Eigen::Index>> table(static_cast<std::size_t>(n_min));
    for (Eigen::Index i = 0; i < n_min; ++i)
        table[static_cast<std::size_t>(i)] = index.knn(minority.row(i).transpose(), k, i);
    return table;
}

// Majority counts of each minority row's k-neighborhood over the mixed pool.
std::vector<Eigen::Index> mixed_majority_counts(const Matrix& minority, const Matrix& majority,
                                                Eigen::Index k) {
    const Eigen::Index n_min = minority.rows();
    const Eigen::Index pool_rows = n_min + majority.rows();
    if (k > pool_rows - 1) k = pool_rows - 1;
    Matrix pool(pool_rows, minority.cols());
    pool.topRows(n_min) = minority;
    pool.bottomRows(majority.rows()) = majority;
    NeighborIndex index(std::move(pool));
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(n_min), 0);
    for (Eigen::Index i = 0; i < n_min; ++i) {
        for (Eigen::Index nb : index.knn(minority.row(i).transpose(), k, i))
            if (nb >= n_min) ++counts[static_cast<std::size_t>(i)];
    }
    return counts;
}

// Draws parents from `parent_rows` (indices into the minority matrix) and
// interpolates toward one of the parent's minority-only neighbors.
Matrix interpolate(const Matrix& minority, const std::vector<Eigen::Index>& parent_rows,
                   const std::vector<std::vector<Eigen::Index>>& neighbors, Eigen::Index count,
                   std::mt19937_64& rng) {
    Matrix synthetic(count, minority.cols());
    std::uniform_int_distribution<std::size_t> pick_parent(0, parent_rows.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index s = 0; s < count; ++s) {
        const Eigen::Index parent = parent_rows[pick_parent(rng)];
        const auto& hood = neighbors[static_cast<std::size_t>(parent)];
        std::uniform_int_distribution<std::size_t> pick_neighbor(0, hood.size() - 1);
        const Eigen::Index neighbor = hood[pick_neighbor(rng)];
        const double delta = unit(rng);
        synthetic.row(s) =
            minority.row(parent) + delta * (minority.row(neighbor) - minority.row(parent));
    }
    return synthetic;
}

}  // namespace

Dataset ros(const Dataset& train, std::uint64_t seed) {
    require_both_classes(train);
    const Eigen::Index deficit = train.majority_count() - train.minority_count();
    if (deficit == 0) return train;

    const auto minority_rows = rows_with_label(train, 1);
    auto rng = make_rng(seed, SeedStream::baseline);
    std::uniform_int_distribution<std::size_t> pick(0, minority_rows.size() - 1);
    Matrix copies(deficit, train.dim());
    for (Eigen::Index i = 0; i < deficit; ++i)
        copies.row(i) = train.features.row(minority_rows[pick(rng)]);
    return append_minority(train, copies);
}

Dataset smote(const Dataset& train, Eigen::Index k, std::uint64_t seed, BaselineNotes* notes) {
    require_both_classes(train);
    if (k < 1) fail(ErrorCode::value, "k must be >= 1");
    const Eigen::Index deficit = train.majority_count() - train.minority_count();
    if (deficit == 0) return train;

    const Matrix minority = take_rows(train.features, rows_with_label(train, 1));
    const auto neighbors = minority_neighbor_table(minority, k, notes);
    std::vector<Eigen::Index> all_rows(static_cast<std::size_t>(minority.rows()));
    std::iota(all_rows.begin(), all_rows.end(), Eigen::Index{0});

    auto rng = make_rng(seed, SeedStream::baseline);
    return append_minority(train, interpolate(minority, all_rows, neighbors, deficit, rng));
}

Dataset borderline_smote(const Dataset& train, Eigen::Index k, Eigen::Index m,
                         std::uint64_t seed, BaselineNotes* notes) {
    require_both_classes(train);
    if (k < 1 || m < 1) fail(ErrorCode::value, "k and m must be >= 1");
    const Eigen::Index deficit = train.majority_count() - train.minority_count();
    if (deficit == 0) return train;

    const Matrix minority = take_rows(train.features, rows_with_label(train, 1));
    const Matrix majority = take_rows(train.features, rows_with_label(train, 0));
    const auto counts = mixed_majority_counts(minority, majority, m);
    std::vector<Eigen::Index> danger;
    for (Eigen::Index i = 0; i < minority.rows(); ++i) {
        const Eigen::Index c = counts[static_cast<std::size_t>(i)];
        if (2 * c >= m && c < m) danger.push_back(i);
    }
    if (danger.empty()) {
        if (notes != nullptr) notes->fell_back_to_smote = true;
        return smote(train, k, seed, notes);
    }

    const auto neighbors = minority_neighbor_table(minority, k, notes);
    auto rng = make_rng(seed, SeedStream::baseline);
    return append_minority(train, interpolate(minority, danger, neighbors, deficit, rng));
}

Dataset adasyn(const Dataset& train, Eigen::Index k, std::uint64_t seed, BaselineNotes* notes) {
    require_both_classes(train);
    if (k < 1) fail(ErrorCode::value, "k must be >= 1");
    const Eigen::Index deficit = train.majority_count() - train.minority_count();
    if (deficit == 0) return train;

    const Matrix minority = take_rows(train.features, rows_with_label(train, 1));
    const Matrix majority = take_rows(train.features, rows_with_label(train, 0));
    const auto counts = mixed_majority_counts(minority, majority, k);
    const double total =
        static_cast<double>(std::accumulate(counts.begin(), counts.end(), Eigen::Index{0}));
    if (total == 0.0) {
        if (notes != nullptr) notes->fell_back_to_smote = true;
        return smote(train, k, seed, notes);
    }

    const Eigen::Index n_min = minority.rows();
    std::vector<double> share(static_cast<std::size_t>(n_min));
    std::vector<Eigen::Index> quota(static_cast<std::size_t>(n_min));
    Eigen::Index assigned = 0;
    for (Eigen::Index i = 0; i < n_min; ++i) {
        share[static_cast<std::size_t>(i)] =
            static_cast<double>(counts[static_cast<std::size_t>(i)]) / total;
        quota[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(
            std::lround(share[static_cast<std::size_t>(i)] * static_cast<double>(deficit)));
        assigned += quota[static_cast<std::size_t>(i)];
    }

    // Rounding residue: top up the largest shares, trim the smallest
    // positive quotas, until the totals match exactly.
    std::vector<Eigen::Index> by_share(static_cast<std::size_t>(n_min));
    std::iota(by_share.begin(), by_share.end(), Eigen::Index{0});
    std::sort(by_share.begin(), by_share.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double sa = share[static_cast<std::size_t>(a)];
        const double sb = share[static_cast<std::size_t>(b)];
        return sa != sb ? sa > sb : a < b;
    });
    std::size_t cursor = 0;
    while (assigned < deficit) {
        ++quota[static_cast<std::size_t>(by_share[cursor])];
        ++assigned;
        cursor = (cursor + 1) % by_share.size();
    }
    while (assigned > deficit) {
        for (std::size_t r = by_share.size(); r-- > 0 && assigned > deficit;) {
            Eigen::Index& q = quota[static_cast<std::size_t>(by_share[r])];
            if (q > 0) {
                --q;
                --assigned;
            }
        }
    }

    Eigen::Index k_table = k;
    const auto neighbors = minority_neighbor_table(minority, k_table, notes);
    auto rng = make_rng(seed, SeedStream::baseline);
    Matrix synthetic(deficit, train.dim());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n_min; ++i) {
        const auto& hood = neighbors[static_cast<std::size_t>(i)];
        std::uniform_int_distribution<std::size_t> pick_neighbor(0, hood.size() - 1);
        for (Eigen::Index s = 0; s < quota[static_cast<std::size_t>(i)]; ++s) {
            const Eigen::Index neighbor = hood[pick_neighbor(rng)];
            const double delta = unit(rng);
            synthetic.row(row++) =
                minority.row(i) + delta * (minority.row(neighbor) - minority.row(i));
        }
    }
    return append_minority(train, synthetic);
}

}  // namespace anchscgan
