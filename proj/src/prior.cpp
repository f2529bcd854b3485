#include "anchscgan/prior.hpp"

#include "anchscgan/error.hpp"
#include "anchscgan/rng.hpp"

#include <algorithm>

namespace anchscgan {

PriorClassifier train_prior(const Dataset& anchors, int epochs, Eigen::Index batch_size,
                            double lr, std::uint64_t seed) {
    const Eigen::Index n = anchors.n();
    const Eigen::Index d = anchors.dim();
    if (anchors.minority_count() == 0 || anchors.majority_count() == 0)
        fail(ErrorCode::state, "prior training needs anchors from both classes");
    if (epochs < 0) fail(ErrorCode::value, "epochs must be >= 0");

    if (batch_size <= 0)
        batch_size = std::min<Eigen::Index>(128, std::max<Eigen::Index>(8, n / 10));
    batch_size = std::min(batch_size, n);

    PriorClassifier prior;
    prior.net = init_network({{d, 2 * d, Activation::relu},
                              {2 * d, 4 * d, Activation::relu},
                              {4 * d, d, Activation::sigmoid},
                              {d, 1, Activation::sigmoid}},
                             mix_seed(seed, SeedStream::prior));

    Matrix targets(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) targets(i, 0) = anchors.labels(i);

    auto rng = make_rng(seed, SeedStream::prior);
    AdamState adam = make_adam(prior.net, lr);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        const auto order = shuffled_indices(n, rng);
        for (Eigen::Index start = 0; start < n; start += batch_size) {
            const Eigen::Index m = std::min(batch_size, n - start);
            Matrix batch(m, d);
            Matrix y(m, 1);
            for (Eigen::Index i = 0; i < m; ++i) {
                const Eigen::Index row = order[static_cast<std::size_t>(start + i)];
                batch.row(i) = anchors.features.row(row);
                y(i, 0) = targets(row, 0);
            }
            const ForwardTrace trace = forward(prior.net, batch);
            const Matrix dout = bce_grad(trace.output(), y);
            const GradientSet grads = backward(prior.net, trace, dout);
            adam_step(prior.net, grads, adam);
        }
    }
    prior.frozen = true;
    return prior;
}

Vector score(const PriorClassifier& c, const Matrix& x) {
    return forward(c.net, x).output().col(0);
}

IntVector classify(const PriorClassifier& c, const Matrix& x) {
    const Vector s = score(c, x);
    IntVector labels(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) labels(i) = s(i) >= 0.5 ? 1 : 0;
    return labels;
}

Matrix class_representation(const PriorClassifier& c, const Matrix& x) {
    return forward(head(c.net, 3), x).output();
}

FilterOutcome filter_misclassified(const PriorClassifier& c, const Dataset& data) {
    const IntVector predicted = classify(c, data.features);
    FilterOutcome outcome;

    Eigen::Index minority_total = 0, minority_wrong = 0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        if (data.labels(i) == 1) {
            ++minority_total;
            if (predicted(i) != 1) ++minority_wrong;
        }
    }
    outcome.safeguard_triggered = 2 * minority_wrong > minority_total;

    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const bool match = predicted(i) == data.labels(i);
        const bool minority_kept = data.labels(i) == 1 && outcome.safeguard_triggered;
        if (match || minority_kept) {
            outcome.kept_rows.push_back(i);
        } else if (data.labels(i) == 1) {
            ++outcome.removed_minority;
        } else {
            ++outcome.removed_majority;
        }
    }
    outcome.kept = take_rows(data, outcome.kept_rows);
    return outcome;
}

}  // namespace anchscgan
