#include "anchscgan/neighbors.hpp"

#include "anchscgan/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace anchscgan {

namespace {

struct Candidate {
    double d2;
    Eigen::Index index;
    bool operator<(const Candidate& o) const {  // max-heap: worst on top
        return d2 != o.d2 ? d2 < o.d2 : index < o.index;
    }
};

}  // namespace

namespace {
constexpr Eigen::Index kLeafSize = 16;
}  // namespace

NeighborIndex::NeighborIndex(Matrix points, bool accelerate) : points_(std::move(points)) {
    if (points_.rows() == 0) fail(ErrorCode::value, "neighbor index needs at least one point");
    accelerated_ = accelerate && points_.rows() > 2 * kLeafSize;
    if (accelerated_) {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(points_.rows()));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        nodes_.reserve(static_cast<std::size_t>(2 * points_.rows() / kLeafSize + 2));
        build(order, 0, points_.rows());
        order_ = std::move(order);
    }
}

Eigen::Index NeighborIndex::build(std::vector<Eigen::Index>& order, Eigen::Index lo,
                                  Eigen::Index hi) {
    const Eigen::Index node_id = static_cast<Eigen::Index>(nodes_.size());
    nodes_.emplace_back();
    if (hi - lo <= kLeafSize) {
        nodes_[static_cast<std::size_t>(node_id)].begin = lo;
        nodes_[static_cast<std::size_t>(node_id)].end = hi;
        return node_id;
    }

    // Widest-extent axis, median split; (value, index) ordering keeps the
    // partition deterministic under duplicate coordinates.
    Eigen::Index axis = 0;
    double best_extent = -1.0;
    for (Eigen::Index j = 0; j < points_.cols(); ++j) {
        double mn = points_(order[static_cast<std::size_t>(lo)], j);
        double mx = mn;
        for (Eigen::Index i = lo + 1; i < hi; ++i) {
            const double v = points_(order[static_cast<std::size_t>(i)], j);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (mx - mn > best_extent) {
            best_extent = mx - mn;
            axis = j;
        }
    }

    const Eigen::Index mid = lo + (hi - lo) / 2;
    auto cmp = [&](Eigen::Index a, Eigen::Index b) {
        const double va = points_(a, axis), vb = points_(b, axis);
        return va != vb ? va < vb : a < b;
    };
    std::nth_element(order.begin() + lo, order.begin() + mid, order.begin() + hi, cmp);

    const double split = points_(order[static_cast<std::size_t>(mid)], axis);
    const Eigen::Index left = build(order, lo, mid);
    const Eigen::Index right = build(order, mid, hi);
    Node& node = nodes_[static_cast<std::size_t>(node_id)];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return node_id;
}

std::vector<Eigen::Index> NeighborIndex::knn(const Vector& query, Eigen::Index k,
                                             Eigen::Index exclude) const {
    const Eigen::Index n = points_.rows();
    const Eigen::Index eligible = n - (exclude >= 0 && exclude < n ? 1 : 0);
    if (k < 1 || k > eligible)
        fail(ErrorCode::value, "k=" + std::to_string(k) + " outside [1," +
                                   std::to_string(eligible) + "]");
    if (query.size() != points_.cols()) fail(ErrorCode::value, "query width mismatch");

    std::priority_queue<Candidate> heap;
    auto offer = [&](Eigen::Index i) {
        if (i == exclude) return;
        const double d2 = (points_.row(i).transpose() - query).squaredNorm();
        const Candidate c{d2, i};
        if (static_cast<Eigen::Index>(heap.size()) < k) {
            heap.push(c);
        } else if (c < heap.top()) {
            heap.pop();
            heap.push(c);
        }
    };

    if (!accelerated_) {
        for (Eigen::Index i = 0; i < n; ++i) offer(i);
    } else {
        // Prune only when the plane is strictly farther than the current
        // worst; equal distance may still win on the index tie rule.
        auto visit = [&](auto&& self, Eigen::Index node_id) -> void {
            const Node& node = nodes_[static_cast<std::size_t>(node_id)];
            if (node.axis < 0) {
                for (Eigen::Index i = node.begin; i < node.end; ++i)
                    offer(order_[static_cast<std::size_t>(i)]);
                return;
            }
            const double delta = query(node.axis) - node.split;
            const Eigen::Index near = delta < 0 ? node.left : node.right;
            const Eigen::Index far = delta < 0 ? node.right : node.left;
            self(self, near);
            if (static_cast<Eigen::Index>(heap.size()) < k || delta * delta <= heap.top().d2)
                self(self, far);
        };
        visit(visit, 0);
    }

    std::vector<Candidate> best;
    best.reserve(heap.size());
    while (!heap.empty()) {
        best.push_back(heap.top());
        heap.pop();
    }
    std::sort(best.begin(), best.end());
    std::vector<Eigen::Index> out;
    out.reserve(best.size());
    for (const Candidate& c : best) out.push_back(c.index);
    return out;
}

FrequencyTable majority_frequency_table(const Matrix& minority, const Matrix& majority,
                                        Eigen::Index k) {
    if (minority.rows() == 0 || majority.rows() == 0)
        fail(ErrorCode::state, "frequency table needs both classes");
    if (k < 1) fail(ErrorCode::value, "k must be >= 1");

    const Eigen::Index n_min = minority.rows();
    Matrix pool(n_min + majority.rows(), minority.cols());
    pool.topRows(n_min) = minority;
    pool.bottomRows(majority.rows()) = majority;
    NeighborIndex index(std::move(pool));

    FrequencyTable table;
    table.counts.assign(static_cast<std::size_t>(majority.rows()), 0);
    for (Eigen::Index i = 0; i < n_min; ++i) {
        for (Eigen::Index nb : index.knn(minority.row(i).transpose(), k, i))
            if (nb >= n_min) ++table.counts[static_cast<std::size_t>(nb - n_min)];
    }
    return table;
}

}  // namespace anchscgan
