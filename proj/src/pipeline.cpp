#include "anchscgan/pipeline.hpp"

#include "anchscgan/error.hpp"
#include "anchscgan/prior.hpp"
#include "anchscgan/rng.hpp"

#include <algorithm>

namespace anchscgan {

namespace {

Dataset assemble_anchor_dataset(const Dataset& normalized_train, const AnchorResult& anchors) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i : anchors.set.minority_indices)
        rows.push_back(anchors.minority_train_rows[static_cast<std::size_t>(i)]);
    for (Eigen::Index i : anchors.set.majority_indices)
        rows.push_back(anchors.majority_train_rows[static_cast<std::size_t>(i)]);
    return take_rows(normalized_train, rows);
}

}  // namespace

PipelineResult run_pipeline(const Dataset& train, const PipelineConfig& config,
                            std::uint64_t seed) {
    PipelineResult result;
    PipelineSummary& summary = result.summary;
    summary.train_rows = train.n();
    summary.minority_rows = train.minority_count();
    summary.majority_rows = train.majority_count();
    if (summary.minority_rows == 0 || summary.majority_rows == 0)
        fail(ErrorCode::state, "training split needs both classes");
    if (summary.minority_rows > summary.majority_rows)
        fail(ErrorCode::state, "class 1 not minority in the train split");

    // All anchor/classifier/GAN work happens in the scaler's [0,1] space;
    // the original rows are only touched again when the output is assembled.
    const Scaler scaler = fit_scaler(train.features);
    Dataset normalized = train;
    normalized.features = apply_scaler(scaler, train.features);

    const AnchorResult anchors =
        select_anchors(normalized, config.k, config.noise_removal, seed);
    summary.minority_anchors = static_cast<Eigen::Index>(anchors.set.minority_indices.size());
    summary.majority_anchors = static_cast<Eigen::Index>(anchors.set.majority_indices.size());
    summary.noise_discarded = static_cast<Eigen::Index>(anchors.set.discarded_noise.size());
    summary.overlap_discarded = static_cast<Eigen::Index>(anchors.set.discarded_overlap.size());
    summary.k_used_minority = anchors.set.k_used_minority;
    summary.k_used_majority = anchors.set.k_used_majority;
    summary.noise_removal = anchors.noise_removal;
    summary.anchors_exhausted = anchors.set.exhausted;
    if (anchors.set.exhausted)
        summary.warnings.push_back("anchor balancing exhausted the deficient class");
    if (summary.minority_anchors == 0)
        fail(ErrorCode::state, "no minority anchors found; classes may be fully separated");
    if (summary.majority_anchors == 0)
        fail(ErrorCode::state, "no majority anchors found");

    const Dataset anchor_data = assemble_anchor_dataset(normalized, anchors);
    summary.anchor_rows = anchor_data.n();
    const PriorClassifier prior = train_prior(anchor_data, config.prior_epochs,
                                              config.prior_batch, config.prior_lr, seed);

    const FilterOutcome clean = filter_misclassified(prior, anchors.pruned_train);
    const FilterOutcome anchor_clean = filter_misclassified(prior, anchor_data);
    summary.clean_rows = clean.kept.n();
    summary.anchor_clean_rows = anchor_clean.kept.n();
    summary.filter_safeguard = clean.safeguard_triggered || anchor_clean.safeguard_triggered;
    if (summary.filter_safeguard)
        summary.warnings.push_back(
            "filter would have removed over half the minority rows; kept them all");
    if (clean.kept.n() < 2) fail(ErrorCode::state, "filtering left fewer than 2 training rows");

    // Centroid pools come from the filtered anchors; a side the filter wiped
    // out falls back to its unfiltered anchors so clustering stays possible.
    Matrix centroid_min =
        take_rows(anchor_clean.kept.features, rows_with_label(anchor_clean.kept, 1));
    Matrix centroid_maj =
        take_rows(anchor_clean.kept.features, rows_with_label(anchor_clean.kept, 0));
    if (centroid_min.rows() == 0) {
        centroid_min = take_rows(anchor_data.features, rows_with_label(anchor_data, 1));
        summary.warnings.push_back(
            "filter removed every minority anchor; clustering uses unfiltered ones");
    }
    if (centroid_maj.rows() == 0) {
        centroid_maj = take_rows(anchor_data.features, rows_with_label(anchor_data, 0));
        summary.warnings.push_back(
            "filter removed every majority anchor; clustering uses unfiltered ones");
    }

    Eigen::Index cluster_count = config.gan.clusters;
    const Eigen::Index scarcest = std::min(centroid_min.rows(), centroid_maj.rows());
    if (cluster_count > scarcest) {
        cluster_count = scarcest;
        summary.warnings.push_back("cluster count reduced to " + std::to_string(cluster_count) +
                                   " (anchors are scarce)");
    }
    const CentroidSet centroids =
        build_centroids(centroid_min, centroid_maj, cluster_count,
                        mix_seed(seed, SeedStream::clusters));

    GanConfig gan_config = config.gan;
    gan_config.seed = seed;
    result.model = build_gan(prior, scaler, centroids, train.dim(), gan_config);

    auto rng = make_rng(seed, SeedStream::gan);
    train_gan(result.model, clean.kept.features, gan_config, gan_config.lr_main,
              gan_config.epochs_main, result.log, rng);
    if (gan_config.epochs_finetune > 0) {
        if (anchor_clean.kept.n() >= 2) {
            train_gan(result.model, anchor_clean.kept.features, gan_config,
                      gan_config.lr_finetune, gan_config.epochs_finetune, result.log, rng);
        } else {
            summary.warnings.push_back("finetuning skipped: not enough clean anchors");
        }
    }

    result.balanced = oversample(result.model, train, seed);
    summary.generated = result.balanced.n() - train.n();
    return result;
}

}  // namespace anchscgan
