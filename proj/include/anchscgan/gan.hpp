#pragma once

#include "anchscgan/clusters.hpp"
#include "anchscgan/dataset.hpp"
#include "anchscgan/nn.hpp"
#include "anchscgan/prior.hpp"
#include "anchscgan/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace anchscgan {

struct GanConfig {
    Eigen::Index noise_dim = 100;
    int epochs_main = 800;
    int epochs_finetune = 200;
    int batches_per_epoch = 20;
    Eigen::Index batch_size = 64;
    double lr_main = 1e-3;
    double lr_finetune = 5e-4;
    double lambda1 = 0.5;  // minority anchor-loss weight
    double lambda2 = 0.5;  // majority anchor-loss weight
    Eigen::Index clusters = 5;
    bool use_score_stabilization = true;
    bool nonsaturating_generator = false;
    std::uint64_t seed = 1;
};

// Generators map noise to the scaler's [0,1] box; the discriminator reads the
// sample concatenated with its class representation (width 2d).
struct GanModel {
    NetworkParams discriminator;
    NetworkParams gen_min;
    NetworkParams gen_maj;
    PriorClassifier prior;      // frozen
    NetworkParams prior_head3;  // representation layers of the prior
    Scaler scaler;
    CentroidSet centroids;
    Eigen::Index data_dim = 0;
    Eigen::Index noise_dim = 0;
};

GanModel build_gan(PriorClassifier prior, Scaler scaler, CentroidSet centroids,
                   Eigen::Index data_dim, const GanConfig& config);

Matrix discriminator_input(const GanModel& model, const Matrix& x);

// Real rows target 1, both generators' fakes target 0, the two fake halves
// weighted equally inside one mean. d_grads, when non-null, receives the
// discriminator's parameter gradients.
double discriminator_loss(const GanModel& model, const Matrix& real_batch,
                          const Matrix& fake_min_batch, const Matrix& fake_maj_batch,
                          GradientSet* d_grads = nullptr);

// Mean over rows of -log( exp(r.p) / (exp(r.p) + sum_j exp(r.n_j)) ) with
// r, p, n_j the representations of x, its positive, and every negative.
// dx, when non-null, receives dL/dx through the frozen representation head.
double anchor_loss(const NetworkParams& prior_head3, const Matrix& x_gen,
                   const Matrix& positives, const Matrix& negatives, Matrix* dx = nullptr);

// Stabilized generator objective: mean(w * adv(x)) + lambda * anchor term,
// where adv = log(1-D) (or -log D behind the nonsaturating flag) and w is the
// per-sample score weight, treated as a constant. Passing fixed_weights
// overrides the weights (the finite-difference tests pin them).
double generator_loss(const GanModel& model, const GanConfig& config, bool minority,
                      const Matrix& z_batch, const Matrix& positives,
                      GradientSet* g_grads = nullptr, const Vector* fixed_weights = nullptr);

struct EpochLosses {
    double d = 0.0;
    double g_min = 0.0;
    double g_maj = 0.0;
};

struct TrainLog {
    std::vector<EpochLosses> epochs;
};

// Algorithm: per epoch, batches_per_epoch rounds of {D step, G_min step,
// G_maj step}. The caller owns the rng so main training and finetuning share
// one stream.
void train_gan(GanModel& model, const Matrix& real_pool, const GanConfig& config, double lr,
               int epochs, TrainLog& log, std::mt19937_64& rng);

// Adds majority-minus-minority generated minority rows (inverse-scaled) to
// the original train split; exact class balance by construction.
Dataset oversample(const GanModel& model, const Dataset& train, std::uint64_t seed);

void save_model(const GanModel& model, const std::string& path);
GanModel load_model(const std::string& path);

}  // namespace anchscgan
