#pragma once

#include "anchscgan/anchor_select.hpp"
#include "anchscgan/gan.hpp"
#include "anchscgan/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace anchscgan {

struct PipelineConfig {
    Eigen::Index k = 5;
    std::optional<bool> noise_removal;  // unset: on when imbalance ratio < 30
    int prior_epochs = 1000;
    Eigen::Index prior_batch = 0;  // 0 = min(128, max(8, n/10))
    double prior_lr = 1e-3;
    GanConfig gan;
};

struct PipelineSummary {
    Eigen::Index train_rows = 0, minority_rows = 0, majority_rows = 0;
    Eigen::Index minority_anchors = 0, majority_anchors = 0;
    Eigen::Index noise_discarded = 0, overlap_discarded = 0;
    Eigen::Index k_used_minority = 0, k_used_majority = 0;
    bool noise_removal = false;
    bool anchors_exhausted = false;
    Eigen::Index clean_rows = 0, anchor_rows = 0, anchor_clean_rows = 0;
    bool filter_safeguard = false;
    Eigen::Index generated = 0;
    std::vector<std::string> warnings;
};

struct PipelineResult {
    Dataset balanced;
    GanModel model;
    PipelineSummary summary;
    TrainLog log;
};

// Anchor selection -> prior training -> filtering -> clustering -> GAN
// training -> finetuning -> oversampling. Train rows pass through untouched;
// only generated rows are appended.
PipelineResult run_pipeline(const Dataset& train, const PipelineConfig& config,
                            std::uint64_t seed);

}  // namespace anchscgan
