#include "anchscgan/anchor_select.hpp"

#include "anchscgan/error.hpp"
#include "anchscgan/rng.hpp"

#include <algorithm>
#include <set>

namespace anchscgan {

namespace {

Matrix stack(const Matrix& top, const Matrix& bottom) {
    Matrix out(top.rows() + bottom.rows(), top.cols());
    out.topRows(top.rows()) = top;
    out.bottomRows(bottom.rows()) = bottom;
    return out;
}

std::vector<Eigen::Index> erase_rows(Eigen::Index n, const std::vector<Eigen::Index>& removed) {
    std::vector<char> gone(static_cast<std::size_t>(n), 0);
    for (Eigen::Index r : removed) gone[static_cast<std::size_t>(r)] = 1;
    std::vector<Eigen::Index> kept;
    kept.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        if (!gone[static_cast<std::size_t>(i)]) kept.push_back(i);
    return kept;
}

}  // namespace

MinoritySelection select_minority_anchors(const Matrix& minority, const Matrix& majority,
                                          Eigen::Index k, bool noise_removal) {
    if (minority.rows() == 0) fail(ErrorCode::state, "minority class is empty");
    if (majority.rows() == 0) fail(ErrorCode::state, "majority class is empty");
    const Eigen::Index n_min = minority.rows();
    const Eigen::Index pool_size = n_min + majority.rows();
    if (k < 1 || k > pool_size - 1)
        fail(ErrorCode::value, "k=" + std::to_string(k) + " outside [1," +
                                   std::to_string(pool_size - 1) + "]");

    NeighborIndex index(stack(minority, majority));
    std::vector<std::vector<Eigen::Index>> hoods(static_cast<std::size_t>(n_min));
    std::vector<char> pass1(static_cast<std::size_t>(n_min), 0);
    std::vector<char> is_noise(static_cast<std::size_t>(n_min), 0);
    for (Eigen::Index i = 0; i < n_min; ++i) {
        auto nn = index.knn(minority.row(i).transpose(), k, i);
        Eigen::Index majority_hits = 0;
        for (Eigen::Index nb : nn)
            if (nb >= n_min) ++majority_hits;
        if (majority_hits >= 1 && majority_hits < k) pass1[static_cast<std::size_t>(i)] = 1;
        if (majority_hits == k && noise_removal) is_noise[static_cast<std::size_t>(i)] = 1;
        hoods[static_cast<std::size_t>(i)] = std::move(nn);
    }

    MinoritySelection sel;
    for (Eigen::Index i = 0; i < n_min; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        if (pass1[si]) {
            sel.anchors.push_back(i);
        } else if (is_noise[si]) {
            sel.noise.push_back(i);
        } else {
            for (Eigen::Index nb : hoods[si]) {
                if (nb < n_min && pass1[static_cast<std::size_t>(nb)]) {
                    sel.anchors.push_back(i);
                    break;
                }
            }
        }
    }
    std::sort(sel.anchors.begin(), sel.anchors.end());
    return sel;
}

MajoritySelection select_majority_anchors(const FrequencyTable& freq, Eigen::Index k) {
    if (k < 1) fail(ErrorCode::value, "k must be >= 1");
    MajoritySelection sel;
    for (std::size_t y = 0; y < freq.counts.size(); ++y) {
        const Eigen::Index twice = 2 * freq.counts[y];
        if (twice > k)
            sel.overlap_discard.push_back(static_cast<Eigen::Index>(y));
        else if (freq.counts[y] > 0 && twice < k)
            sel.anchors.push_back(static_cast<Eigen::Index>(y));
    }
    return sel;
}

AnchorSet balance_anchors(const Matrix& minority, const Matrix& majority, Eigen::Index k0,
                          const MinoritySelection& min_sel, const MajoritySelection& maj_sel,
                          bool noise_removal, std::uint64_t seed) {
    AnchorSet set;
    set.minority_indices = min_sel.anchors;
    set.majority_indices = maj_sel.anchors;
    set.discarded_noise = min_sel.noise;
    set.discarded_overlap = maj_sel.overlap_discard;
    set.k_used_minority = k0;
    set.k_used_majority = k0;
    std::sort(set.minority_indices.begin(), set.minority_indices.end());
    std::sort(set.majority_indices.begin(), set.majority_indices.end());

    const Eigen::Index n_min_anch = static_cast<Eigen::Index>(set.minority_indices.size());
    const Eigen::Index n_maj_anch = static_cast<Eigen::Index>(set.majority_indices.size());
    if (n_min_anch == n_maj_anch) return set;

    const bool grow_minority = n_min_anch < n_maj_anch;
    const Eigen::Index target = std::max(n_min_anch, n_maj_anch);

    // Growth happens on the pruned data: noise and overlap rows are already
    // out of the training set by this point.
    const auto kept_min = erase_rows(minority.rows(), min_sel.noise);
    const auto kept_maj = erase_rows(majority.rows(), maj_sel.overlap_discard);
    const Matrix pruned_min = take_rows(minority, kept_min);
    const Matrix pruned_maj = take_rows(majority, kept_maj);
    const Eigen::Index eligible = pruned_min.rows() + pruned_maj.rows() - 1;

    std::vector<Eigen::Index>& side =
        grow_minority ? set.minority_indices : set.majority_indices;
    std::set<Eigen::Index> cumulative(side.begin(), side.end());
    const std::set<Eigen::Index> current = cumulative;

    Eigen::Index k = k0;
    while (static_cast<Eigen::Index>(cumulative.size()) < target && k + 2 <= eligible) {
        k += 2;
        if (grow_minority) {
            const auto sel = select_minority_anchors(pruned_min, pruned_maj, k, noise_removal);
            for (Eigen::Index a : sel.anchors) cumulative.insert(kept_min[static_cast<std::size_t>(a)]);
        } else {
            const auto freq = majority_frequency_table(pruned_min, pruned_maj, k);
            const auto sel = select_majority_anchors(freq, k);
            for (Eigen::Index a : sel.anchors) cumulative.insert(kept_maj[static_cast<std::size_t>(a)]);
        }
    }

    std::vector<Eigen::Index> fresh;
    for (Eigen::Index c : cumulative)
        if (!current.count(c)) fresh.push_back(c);

    const Eigen::Index need = target - static_cast<Eigen::Index>(current.size());
    std::vector<Eigen::Index> taken;
    if (static_cast<Eigen::Index>(fresh.size()) <= need) {
        taken = fresh;
    } else {
        auto rng = make_rng(seed, SeedStream::anchors);
        const auto order = shuffled_indices(static_cast<Eigen::Index>(fresh.size()), rng, need);
        for (Eigen::Index o : order) taken.push_back(fresh[static_cast<std::size_t>(o)]);
    }

    side.insert(side.end(), taken.begin(), taken.end());
    std::sort(side.begin(), side.end());
    if (grow_minority)
        set.k_used_minority = k;
    else
        set.k_used_majority = k;
    set.exhausted = static_cast<Eigen::Index>(side.size()) < target;
    return set;
}

AnchorResult select_anchors(const Dataset& train, Eigen::Index k,
                            std::optional<bool> noise_removal, std::uint64_t seed) {
    AnchorResult result;
    result.minority_train_rows = rows_with_label(train, 1);
    result.majority_train_rows = rows_with_label(train, 0);
    const Eigen::Index n_min = static_cast<Eigen::Index>(result.minority_train_rows.size());
    const Eigen::Index n_maj = static_cast<Eigen::Index>(result.majority_train_rows.size());
    if (n_min == 0 || n_maj == 0) fail(ErrorCode::state, "anchor selection needs both classes");

    const double imbalance = static_cast<double>(n_maj) / static_cast<double>(n_min);
    result.noise_removal = noise_removal.value_or(imbalance < 30.0);

    const Matrix minority = take_rows(train.features, result.minority_train_rows);
    const Matrix majority = take_rows(train.features, result.majority_train_rows);

    const auto min_sel = select_minority_anchors(minority, majority, k, result.noise_removal);

    const auto kept_min = erase_rows(n_min, min_sel.noise);
    const Matrix pruned_min = take_rows(minority, kept_min);
    MajoritySelection maj_sel;
    if (pruned_min.rows() > 0) {
        FrequencyTable freq = majority_frequency_table(pruned_min, majority, k);
        maj_sel = select_majority_anchors(freq, k);
    }

    result.set = balance_anchors(minority, majority, k, min_sel, maj_sel,
                                 result.noise_removal, seed);

    std::vector<char> drop(static_cast<std::size_t>(train.n()), 0);
    for (Eigen::Index i : result.set.discarded_noise)
        drop[static_cast<std::size_t>(result.minority_train_rows[static_cast<std::size_t>(i)])] = 1;
    for (Eigen::Index i : result.set.discarded_overlap)
        drop[static_cast<std::size_t>(result.majority_train_rows[static_cast<std::size_t>(i)])] = 1;
    std::vector<Eigen::Index> kept_rows;
    for (Eigen::Index i = 0; i < train.n(); ++i)
        if (!drop[static_cast<std::size_t>(i)]) kept_rows.push_back(i);
    result.pruned_train = take_rows(train, kept_rows);
    return result;
}

}  // namespace anchscgan
