#include "anchscgan/gan.hpp"

#include "anchscgan/error.hpp"
#include "anchscgan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace anchscgan {

GanModel build_gan(PriorClassifier prior, Scaler scaler, CentroidSet centroids,
                   Eigen::Index data_dim, const GanConfig& config) {
    if (data_dim < 1) fail(ErrorCode::value, "data dimension must be positive");
    if (config.noise_dim < 1) fail(ErrorCode::value, "noise dimension must be positive");
    if (!prior.frozen) fail(ErrorCode::state, "prior classifier must be frozen");

    GanModel model;
    model.data_dim = data_dim;
    model.noise_dim = config.noise_dim;
    model.prior = std::move(prior);
    model.prior_head3 = head(model.prior.net, 3);
    model.scaler = std::move(scaler);
    model.centroids = std::move(centroids);

    const std::uint64_t root = mix_seed(config.seed, SeedStream::gan);
    model.discriminator = init_network({{2 * data_dim, 512, Activation::relu},
                                        {512, 128, Activation::relu},
                                        {128, 32, Activation::relu},
                                        {32, 1, Activation::sigmoid}},
                                       splitmix64(root ^ 0x10));
    const std::vector<LayerSpec> gen_spec{{config.noise_dim, 512, Activation::relu},
                                          {512, 128, Activation::relu},
                                          {128, 32, Activation::relu},
                                          {32, data_dim, Activation::sigmoid}};
    model.gen_min = init_network(gen_spec, splitmix64(root ^ 0x20));
    model.gen_maj = init_network(gen_spec, splitmix64(root ^ 0x30));
    return model;
}

Matrix discriminator_input(const GanModel& model, const Matrix& x) {
    if (x.cols() != model.data_dim) fail(ErrorCode::value, "sample width mismatch");
    Matrix out(x.rows(), 2 * model.data_dim);
    out.leftCols(model.data_dim) = x;
    out.rightCols(model.data_dim) = forward(model.prior_head3, x).output();
    return out;
}

namespace {

// dL/dp for the generator's adversarial mean: log(1-p) by default, -log(p)
// in the nonsaturating form; weighted per row, zero where the clamp bites.
Matrix adversarial_grad(const Matrix& p, bool nonsaturating, double denom,
                        const Vector& weights) {
    Matrix grad(p.rows(), 1);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        const double raw = p(i, 0);
        double g = 0.0;
        if (raw >= kProbClamp && raw <= 1.0 - kProbClamp)
            g = nonsaturating ? -1.0 / raw : -1.0 / (1.0 - raw);
        grad(i, 0) = weights(i) * g / denom;
    }
    return grad;
}

double clamped(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

}  // namespace

double discriminator_loss(const GanModel& model, const Matrix& real_batch,
                          const Matrix& fake_min_batch, const Matrix& fake_maj_batch,
                          GradientSet* d_grads) {
    if (real_batch.rows() == 0) fail(ErrorCode::value, "empty real batch");
    if (fake_min_batch.rows() + fake_maj_batch.rows() == 0)
        fail(ErrorCode::value, "empty fake batch");

    Matrix fakes(fake_min_batch.rows() + fake_maj_batch.rows(), model.data_dim);
    fakes.topRows(fake_min_batch.rows()) = fake_min_batch;
    fakes.bottomRows(fake_maj_batch.rows()) = fake_maj_batch;

    const Matrix real_in = discriminator_input(model, real_batch);
    const Matrix fake_in = discriminator_input(model, fakes);
    const ForwardTrace real_trace = forward(model.discriminator, real_in);
    const ForwardTrace fake_trace = forward(model.discriminator, fake_in);

    const Matrix ones = Matrix::Ones(real_batch.rows(), 1);
    const Matrix zeros = Matrix::Zero(fakes.rows(), 1);
    const double loss = bce(real_trace.output(), ones) + bce(fake_trace.output(), zeros);
    if (!std::isfinite(loss)) fail(ErrorCode::divergence, "non-finite discriminator loss");

    if (d_grads != nullptr) {
        *d_grads = backward(model.discriminator, real_trace,
                            bce_grad(real_trace.output(), ones));
        accumulate(*d_grads, backward(model.discriminator, fake_trace,
                                      bce_grad(fake_trace.output(), zeros)));
    }
    return loss;
}

double anchor_loss(const NetworkParams& prior_head3, const Matrix& x_gen,
                   const Matrix& positives, const Matrix& negatives, Matrix* dx) {
    const Eigen::Index m = x_gen.rows();
    if (m == 0) fail(ErrorCode::value, "empty batch");
    if (positives.rows() != m) fail(ErrorCode::value, "positives must align with the batch");
    if (negatives.rows() == 0) fail(ErrorCode::state, "anchor loss needs negatives");

    const ForwardTrace trace = forward(prior_head3, x_gen);
    const Matrix& reps = trace.output();                             // m x d
    const Matrix pos_reps = forward(prior_head3, positives).output();  // m x d
    const Matrix neg_reps = forward(prior_head3, negatives).output();  // c x d

    const Eigen::Index c = neg_reps.rows();
    Matrix neg_scores(m, c);
    neg_scores.noalias() = reps * neg_reps.transpose();
    Vector pos_scores(m);
    for (Eigen::Index i = 0; i < m; ++i) pos_scores(i) = reps.row(i).dot(pos_reps.row(i));

    double total = 0.0;
    Matrix d_reps;
    if (dx != nullptr) d_reps = Matrix::Zero(m, reps.cols());
    for (Eigen::Index i = 0; i < m; ++i) {
        double peak = pos_scores(i);
        for (Eigen::Index j = 0; j < c; ++j) peak = std::max(peak, neg_scores(i, j));
        const double pos_exp = std::exp(pos_scores(i) - peak);
        double z = pos_exp;
        for (Eigen::Index j = 0; j < c; ++j) z += std::exp(neg_scores(i, j) - peak);
        total += -(pos_scores(i) - peak) + std::log(z);
        if (dx != nullptr) {
            d_reps.row(i) = (pos_exp / z - 1.0) * pos_reps.row(i);
            for (Eigen::Index j = 0; j < c; ++j)
                d_reps.row(i) += (std::exp(neg_scores(i, j) - peak) / z) * neg_reps.row(j);
        }
    }
    const double loss = total / static_cast<double>(m);
    if (!std::isfinite(loss)) fail(ErrorCode::divergence, "non-finite anchor loss");
    if (dx != nullptr) {
        d_reps /= static_cast<double>(m);
        backward(prior_head3, trace, d_reps, dx);
    }
    return loss;
}

double generator_loss(const GanModel& model, const GanConfig& config, bool minority,
                      const Matrix& z_batch, const Matrix& positives, GradientSet* g_grads,
                      const Vector* fixed_weights) {
    const NetworkParams& gen = minority ? model.gen_min : model.gen_maj;
    const Matrix& negatives =
        minority ? model.centroids.majority_centroids : model.centroids.minority_centroids;
    const double lambda = minority ? config.lambda1 : config.lambda2;
    const Eigen::Index m = z_batch.rows();
    if (m == 0) fail(ErrorCode::value, "empty noise batch");

    const ForwardTrace gen_trace = forward(gen, z_batch);
    const Matrix& x = gen_trace.output();  // m x d, in [0,1]

    // Score weights are per-sample constants: no gradient flows through them.
    Vector weights = Vector::Ones(m);
    if (fixed_weights != nullptr) {
        weights = *fixed_weights;
    } else if (config.use_score_stabilization) {
        const Vector s = score(model.prior, x);
        weights = minority ? Vector(1.0 - s.array()) : s;
    }

    const ForwardTrace rep_trace = forward(model.prior_head3, x);
    Matrix d_in(x.rows(), 2 * model.data_dim);
    d_in.leftCols(model.data_dim) = x;
    d_in.rightCols(model.data_dim) = rep_trace.output();
    const ForwardTrace d_trace = forward(model.discriminator, d_in);
    const Matrix& p = d_trace.output();

    double adversarial = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double pc = clamped(p(i, 0));
        adversarial += weights(i) * (config.nonsaturating_generator ? -std::log(pc)
                                                                    : std::log(1.0 - pc));
    }
    adversarial /= static_cast<double>(m);

    Matrix dx_anchor;
    const double anchor =
        anchor_loss(model.prior_head3, x, positives, negatives,
                    g_grads != nullptr ? &dx_anchor : nullptr);
    const double loss = adversarial + lambda * anchor;
    if (!std::isfinite(loss)) fail(ErrorCode::divergence, "non-finite generator loss");

    if (g_grads != nullptr) {
        // Adversarial term: through D into [x ; rep(x)], the representation
        // half chaining through the frozen prior head.
        const Matrix dp = adversarial_grad(p, config.nonsaturating_generator,
                                           static_cast<double>(m), weights);
        Matrix d_din;
        backward(model.discriminator, d_trace, dp, &d_din);
        Matrix dx = d_din.leftCols(model.data_dim);
        Matrix dx_rep;
        backward(model.prior_head3, rep_trace, d_din.rightCols(model.data_dim), &dx_rep);
        dx += dx_rep;
        dx += lambda * dx_anchor;
        *g_grads = backward(gen, gen_trace, dx);
    }
    return loss;
}

namespace {

// Deterministic cursor over a reshuffled permutation of the pool.
class BatchCycle {
  public:
    BatchCycle(Eigen::Index n, std::mt19937_64& rng) : n_(n), rng_(rng) { reshuffle(); }

    Matrix next(const Matrix& pool, Eigen::Index m) {
        Matrix batch(m, pool.cols());
        for (Eigen::Index i = 0; i < m; ++i) {
            if (cursor_ >= n_) reshuffle();
            batch.row(i) = pool.row(order_[static_cast<std::size_t>(cursor_++)]);
        }
        return batch;
    }

  private:
    void reshuffle() {
        order_ = shuffled_indices(n_, rng_);
        cursor_ = 0;
    }
    Eigen::Index n_;
    std::mt19937_64& rng_;
    std::vector<Eigen::Index> order_;
    Eigen::Index cursor_ = 0;
};

Matrix draw_noise(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) z(i, j) = normal(rng);
    return z;
}

Matrix pick_positive_rows(const Matrix& x, const Matrix& centroids, std::mt19937_64& rng) {
    Matrix positives(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        positives.row(i) = centroids.row(pick_positive(x.row(i).transpose(), centroids, rng));
    return positives;
}

}  // namespace

void train_gan(GanModel& model, const Matrix& real_pool, const GanConfig& config, double lr,
               int epochs, TrainLog& log, std::mt19937_64& rng) {
    if (epochs <= 0) return;
    if (real_pool.rows() < 2) fail(ErrorCode::state, "training pool needs at least 2 rows");
    if (config.batches_per_epoch < 1) fail(ErrorCode::value, "batches_per_epoch must be >= 1");

    const Eigen::Index m = std::max<Eigen::Index>(2, std::min(config.batch_size, real_pool.rows()));
    const Eigen::Index fake_min_rows = m / 2;
    const Eigen::Index fake_maj_rows = m - fake_min_rows;

    AdamState adam_d = make_adam(model.discriminator, lr);
    AdamState adam_min = make_adam(model.gen_min, lr);
    AdamState adam_maj = make_adam(model.gen_maj, lr);
    BatchCycle cycle(real_pool.rows(), rng);

    for (int epoch = 0; epoch < epochs; ++epoch) {
        EpochLosses mean;
        for (int round = 0; round < config.batches_per_epoch; ++round) {
            try {
                const Matrix real = cycle.next(real_pool, m);
                const Matrix fake_min =
                    forward(model.gen_min, draw_noise(fake_min_rows, model.noise_dim, rng))
                        .output();
                const Matrix fake_maj =
                    forward(model.gen_maj, draw_noise(fake_maj_rows, model.noise_dim, rng))
                        .output();
                GradientSet d_grads;
                mean.d += discriminator_loss(model, real, fake_min, fake_maj, &d_grads);
                adam_step(model.discriminator, d_grads, adam_d);

                for (bool minority : {true, false}) {
                    const Matrix z = draw_noise(m, model.noise_dim, rng);
                    const Matrix x = forward(minority ? model.gen_min : model.gen_maj, z).output();
                    const Matrix positives = pick_positive_rows(
                        x,
                        minority ? model.centroids.minority_centroids
                                 : model.centroids.majority_centroids,
                        rng);
                    GradientSet g_grads;
                    const double value =
                        generator_loss(model, config, minority, z, positives, &g_grads);
                    adam_step(minority ? model.gen_min : model.gen_maj, g_grads,
                              minority ? adam_min : adam_maj);
                    (minority ? mean.g_min : mean.g_maj) += value;
                }
            } catch (const Error& e) {
                if (e.code() == ErrorCode::divergence)
                    fail(ErrorCode::divergence,
                         std::string(e.what()) + " at epoch " + std::to_string(epoch));
                throw;
            }
        }
        const double rounds = static_cast<double>(config.batches_per_epoch);
        mean.d /= rounds;
        mean.g_min /= rounds;
        mean.g_maj /= rounds;
        log.epochs.push_back(mean);
    }
}

Dataset oversample(const GanModel& model, const Dataset& train, std::uint64_t seed) {
    const Eigen::Index deficit = train.majority_count() - train.minority_count();
    if (deficit < 0) fail(ErrorCode::state, "class 1 not minority in the train split");
    if (deficit == 0) return train;

    auto rng = make_rng(seed, SeedStream::oversample);
    const Matrix z = draw_noise(deficit, model.noise_dim, rng);
    const Matrix generated = invert_scaler(model.scaler, forward(model.gen_min, z).output());

    Dataset out = train;
    const Eigen::Index n = train.n();
    if (out.label_strings.size() != static_cast<std::size_t>(n)) {
        out.label_strings.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            out.label_strings[static_cast<std::size_t>(i)] =
                out.labels(i) == 1 ? out.minority_value : "0";
    }
    out.features.conservativeResize(n + deficit, Eigen::NoChange);
    out.labels.conservativeResize(n + deficit);
    out.features.bottomRows(deficit) = generated;
    for (Eigen::Index i = 0; i < deficit; ++i) {
        out.labels(n + i) = 1;
        out.label_strings.push_back(train.minority_value);
    }
    return out;
}

namespace {

void put_bytes(std::ofstream& out, const void* data, std::size_t size) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

void put_u32(std::ofstream& out, std::uint32_t v) { put_bytes(out, &v, 4); }
void put_f64(std::ofstream& out, double v) { put_bytes(out, &v, 8); }

void get_bytes(std::ifstream& in, void* data, std::size_t size) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (!in) fail(ErrorCode::format, "model file truncated");
}

std::uint32_t get_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    get_bytes(in, &v, 4);
    return v;
}

double get_f64(std::ifstream& in) {
    double v = 0.0;
    get_bytes(in, &v, 8);
    return v;
}

void put_network(std::ofstream& out, const NetworkParams& net) {
    put_u32(out, static_cast<std::uint32_t>(net.layers.size()));
    for (const Layer& layer : net.layers) {
        put_u32(out, static_cast<std::uint32_t>(layer.weights.cols()));
        put_u32(out, static_cast<std::uint32_t>(layer.weights.rows()));
        const std::uint8_t act = static_cast<std::uint8_t>(layer.act);
        put_bytes(out, &act, 1);
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
                put_f64(out, layer.weights(r, c));
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) put_f64(out, layer.bias(i));
    }
}

NetworkParams get_network(std::ifstream& in) {
    NetworkParams net;
    const std::uint32_t n_layers = get_u32(in);
    if (n_layers == 0 || n_layers > 64) fail(ErrorCode::format, "implausible layer count");
    for (std::uint32_t li = 0; li < n_layers; ++li) {
        const std::uint32_t fan_in = get_u32(in);
        const std::uint32_t fan_out = get_u32(in);
        if (fan_in == 0 || fan_out == 0 || fan_in > (1u << 20) || fan_out > (1u << 20))
            fail(ErrorCode::format, "implausible layer dimensions");
        std::uint8_t act = 0;
        get_bytes(in, &act, 1);
        if (act > 2) fail(ErrorCode::format, "unknown activation code");
        Layer layer;
        layer.act = static_cast<Activation>(act);
        layer.weights.resize(fan_out, fan_in);
        for (std::uint32_t r = 0; r < fan_out; ++r)
            for (std::uint32_t c = 0; c < fan_in; ++c) layer.weights(r, c) = get_f64(in);
        layer.bias.resize(fan_out);
        for (std::uint32_t i = 0; i < fan_out; ++i) layer.bias(i) = get_f64(in);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

constexpr char kMagic[8] = {'A', 'N', 'C', 'H', 'G', 'A', 'N', '1'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

void save_model(const GanModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
    put_bytes(out, kMagic, 8);
    put_u32(out, kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(model.data_dim));
    put_u32(out, static_cast<std::uint32_t>(model.noise_dim));
    put_network(out, model.discriminator);
    put_network(out, model.gen_min);
    put_network(out, model.gen_maj);
    put_network(out, model.prior.net);
    for (Eigen::Index i = 0; i < model.scaler.col_min.size(); ++i)
        put_f64(out, model.scaler.col_min(i));
    for (Eigen::Index i = 0; i < model.scaler.col_max.size(); ++i)
        put_f64(out, model.scaler.col_max(i));
    auto put_centroids = [&](const Matrix& c) {
        put_u32(out, static_cast<std::uint32_t>(c.rows()));
        for (Eigen::Index r = 0; r < c.rows(); ++r)
            for (Eigen::Index j = 0; j < c.cols(); ++j) put_f64(out, c(r, j));
    };
    put_centroids(model.centroids.minority_centroids);
    put_centroids(model.centroids.majority_centroids);
    if (!out) fail(ErrorCode::io, "write failed for '" + path + "'");
}

GanModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
    char magic[8] = {};
    get_bytes(in, magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
        fail(ErrorCode::format, "bad magic in '" + path + "'");
    const std::uint32_t version = get_u32(in);
    if (version != kFormatVersion)
        fail(ErrorCode::format, "unsupported model format version " + std::to_string(version));

    GanModel model;
    model.data_dim = get_u32(in);
    model.noise_dim = get_u32(in);
    model.discriminator = get_network(in);
    model.gen_min = get_network(in);
    model.gen_maj = get_network(in);
    model.prior.net = get_network(in);
    model.prior.frozen = true;
    model.prior_head3 = head(model.prior.net, 3);
    model.scaler.col_min.resize(model.data_dim);
    model.scaler.col_max.resize(model.data_dim);
    for (Eigen::Index i = 0; i < model.data_dim; ++i) model.scaler.col_min(i) = get_f64(in);
    for (Eigen::Index i = 0; i < model.data_dim; ++i) model.scaler.col_max(i) = get_f64(in);
    auto get_centroids = [&]() {
        const std::uint32_t rows = get_u32(in);
        Matrix c(rows, model.data_dim);
        for (std::uint32_t r = 0; r < rows; ++r)
            for (Eigen::Index j = 0; j < model.data_dim; ++j) c(r, j) = get_f64(in);
        return c;
    };
    model.centroids.minority_centroids = get_centroids();
    model.centroids.majority_centroids = get_centroids();
    return model;
}

}  // namespace anchscgan
