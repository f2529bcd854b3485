// Go/no-go gate for the library: ten checks, one PASS/FAIL line each.
// Every tolerance is pinned next to its check and each line carries the
// measured values, so a red line is diagnosable from the output alone.
// Exit status 0 only when all ten pass.

#include "anchscgan/anchor_select.hpp"
#include "anchscgan/baselines.hpp"
#include "anchscgan/benchmark.hpp"
#include "anchscgan/dataset.hpp"
#include "anchscgan/dirac.hpp"
#include "anchscgan/gan.hpp"
#include "anchscgan/metrics.hpp"
#include "anchscgan/neighbors.hpp"
#include "anchscgan/nn.hpp"
#include "anchscgan/pipeline.hpp"
#include "anchscgan/prior.hpp"
#include "anchscgan/rng.hpp"
#include "anchscgan/types.hpp"

#include "../fixtures.hpp"
#include "../oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace anchscgan;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path work_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& dir) {
    const std::string cmd = "cd '" + dir.string() + "' && '" + CLI_BINARY_PATH + "' " + args +
                            " >'" + (dir / "_stdout.txt").string() + "' 2>'" +
                            (dir / "_stderr.txt").string() + "'";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Matrix noise(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) z(i, j) = normal(rng);
    return z;
}

bool networks_equal(const NetworkParams& a, const NetworkParams& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        if (a.layers[i].weights != b.layers[i].weights) return false;
        if (a.layers[i].bias != b.layers[i].bias) return false;
        if (a.layers[i].act != b.layers[i].act) return false;
    }
    return true;
}

Dataset tiny_anchors() {
    Dataset d;
    d.features.resize(6, 2);
    d.features << 0.2, 0.3, 0.25, 0.4, 0.3, 0.2, 0.7, 0.8, 0.8, 0.7, 0.75, 0.9;
    d.labels.resize(6);
    d.labels << 1, 1, 1, 0, 0, 0;
    d.column_names = {"x1", "x2"};
    d.label_strings = {"1", "1", "1", "0", "0", "0"};
    return d;
}

// Hand-assembled model small enough for exhaustive finite differences:
// d=2, noise 4, one hidden layer per network.
GanModel tiny_model(std::uint64_t seed) {
    GanModel m;
    m.data_dim = 2;
    m.noise_dim = 4;
    m.prior = train_prior(tiny_anchors(), 0, 0, 1e-3, seed);
    m.prior_head3 = head(m.prior.net, 3);

    Matrix corners(2, 2);
    corners << 0.0, -1.0, 2.0, 3.0;
    m.scaler = fit_scaler(corners);

    m.centroids.minority_centroids.resize(3, 2);
    m.centroids.minority_centroids << 0.8, 0.9, 0.7, 0.7, 0.9, 0.6;
    m.centroids.majority_centroids.resize(3, 2);
    m.centroids.majority_centroids << 0.1, 0.2, 0.3, 0.1, 0.2, 0.35;

    m.discriminator = init_network({{4, 8, Activation::relu}, {8, 1, Activation::sigmoid}},
                                   splitmix64(seed ^ 0xD));
    const std::vector<LayerSpec> gen{{4, 6, Activation::relu}, {6, 2, Activation::sigmoid}};
    m.gen_min = init_network(gen, splitmix64(seed ^ 0xA));
    m.gen_maj = init_network(gen, splitmix64(seed ^ 0xB));
    return m;
}

// 1. Analytic gradients of the adversarial, anchor, and weighted generator
//    losses against central finite differences.
Outcome gradient_exactness() {
    double worst = 0.0;
    {
        GanModel m = tiny_model(11);
        const Matrix real = tiny_anchors().features.topRows(3);
        const Matrix fake_min = forward(m.gen_min, noise(2, 4, 3)).output();
        const Matrix fake_maj = forward(m.gen_maj, noise(2, 4, 4)).output();
        GradientSet grads;
        discriminator_loss(m, real, fake_min, fake_maj, &grads);
        worst = std::max(worst,
                         finite_diff_check(
                             m.discriminator,
                             [&] { return discriminator_loss(m, real, fake_min, fake_maj); },
                             grads));
    }
    {
        const GanModel m = tiny_model(13);
        Matrix x(3, 2);
        x << 0.3, 0.7, 0.5, 0.5, 0.9, 0.1;
        const Matrix pos = m.centroids.minority_centroids.topRows(3);
        const Matrix negs = m.centroids.majority_centroids;
        Matrix dx;
        anchor_loss(m.prior_head3, x, pos, negs, &dx);
        const double h = 1e-6;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double saved = x.data()[i];
            x.data()[i] = saved + h;
            const double up = anchor_loss(m.prior_head3, x, pos, negs);
            x.data()[i] = saved - h;
            const double down = anchor_loss(m.prior_head3, x, pos, negs);
            x.data()[i] = saved;
            const double fd = (up - down) / (2.0 * h);
            worst = std::max(worst,
                             std::abs(dx.data()[i] - fd) / std::max(1.0, std::abs(fd)));
        }
    }
    for (const bool nonsaturating : {false, true})
        for (const bool minority : {true, false}) {
            GanModel m = tiny_model(19);
            GanConfig cfg;
            cfg.lambda1 = 0.6;
            cfg.lambda2 = 0.4;
            cfg.nonsaturating_generator = nonsaturating;
            const Matrix z = noise(3, 4, 7);
            const Matrix pos =
                (minority ? m.centroids.minority_centroids : m.centroids.majority_centroids)
                    .topRows(3);
            Vector w(3);
            w << 0.5, 1.0, 1.25;  // score weights pinned: the loss treats them as constants
            GradientSet grads;
            generator_loss(m, cfg, minority, z, pos, &grads, &w);
            NetworkParams& gen = minority ? m.gen_min : m.gen_maj;
            const double err = finite_diff_check(
                gen, [&] { return generator_loss(m, cfg, minority, z, pos, nullptr, &w); },
                grads);
            worst = std::max(worst, err);
        }
    return {worst < 1e-4, "worst relative error " + fmt(worst) + " (tol 1e-4)"};
}

// 2. The full selection composition on five crafted 2-D configurations must
//    equal a literal re-evaluation of the rules, including the balanced set.
Outcome anchor_oracle() {
    int checked = 0;
    for (const auto& cfg : fixtures::exact_configs()) {
        const MinoritySelection min_sel =
            select_minority_anchors(cfg.minority, cfg.majority, cfg.k, cfg.noise_removal);
        std::vector<Eigen::Index> kept;
        for (Eigen::Index i = 0; i < cfg.minority.rows(); ++i)
            if (std::find(min_sel.noise.begin(), min_sel.noise.end(), i) == min_sel.noise.end())
                kept.push_back(i);
        const Matrix pruned = take_rows(cfg.minority, kept);
        MajoritySelection maj_sel;
        if (pruned.rows() > 0)
            maj_sel = select_majority_anchors(
                majority_frequency_table(pruned, cfg.majority, cfg.k), cfg.k);
        const AnchorSet set = balance_anchors(cfg.minority, cfg.majority, cfg.k, min_sel,
                                              maj_sel, cfg.noise_removal, 1);

        const oracle::AnchorOracle rules =
            oracle::anchor_rules(cfg.minority, cfg.majority, cfg.k, cfg.noise_removal);
        const oracle::BalanceOracle bal =
            oracle::balanced_rules(cfg.minority, cfg.majority, cfg.k, cfg.noise_removal);
        if (bal.needed_draw)
            return {false, std::string(cfg.name) + ": re-evaluation is not draw-free"};
        if (min_sel.anchors != rules.minority_anchors ||
            min_sel.noise != rules.minority_noise ||
            maj_sel.anchors != rules.majority_anchors ||
            maj_sel.overlap_discard != rules.majority_overlap ||
            set.minority_indices != bal.minority_anchors ||
            set.majority_indices != bal.majority_anchors ||
            set.k_used_minority != bal.k_minority || set.k_used_majority != bal.k_majority ||
            set.exhausted != bal.exhausted)
            return {false, std::string(cfg.name) + ": library and re-evaluation disagree"};
        ++checked;
    }
    return {checked == 5,
            std::to_string(checked) + " configurations equal the literal re-evaluation"};
}

// 3. Count-based metrics against an extended-precision re-computation.
Outcome metric_arithmetic() {
    auto rng = make_rng(404);
    std::uniform_int_distribution<long> count(0, 50);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        ConfusionCounts c;
        c.tp = count(rng);
        c.fp = count(rng);
        c.tn = count(rng);
        c.fn = count(rng);
        const Metrics m = metrics_from_counts(c);
        const oracle::OracleMetrics ref = oracle::metrics_reference(c.tp, c.fp, c.tn, c.fn);
        worst = std::max({worst, std::abs(m.precision - ref.precision),
                          std::abs(m.recall - ref.recall),
                          std::abs(m.specificity - ref.specificity), std::abs(m.f1 - ref.f1),
                          std::abs(m.gmean - ref.gmean), std::abs(m.auc - ref.auc)});
    }
    return {worst < 1e-12,
            "20 random count vectors, worst deviation " + fmt(worst) + " (tol 1e-12)"};
}

// 4. The published 16x9 AUC table must reproduce the reported significance
//    level within one order of magnitude, with or without column 0.
Outcome rank_test_significance() {
    const Matrix table = fixtures::auc_table();
    const FriedmanResult with_ref = friedman_test(table);
    const FriedmanResult without_ref = friedman_test(table.rightCols(table.cols() - 1));
    const double lo = 6.58e-11, hi = 6.58e-9;
    const bool w = with_ref.p_value > lo && with_ref.p_value < hi;
    const bool wo = without_ref.p_value > lo && without_ref.p_value < hi;
    return {w || wo, "p " + fmt(with_ref.p_value) + " with the reference column, " +
                         fmt(without_ref.p_value) + " without (window 6.58e-11..6.58e-9)"};
}

// 5. One-parameter GAN from (1,1), eta 0.01, 10000 steps: the plain updates
//    keep the generator far from the target, the score-weighted ones land it.
Outcome one_parameter_regimes() {
    const DiracTrajectory plain = simulate_trajectory(1.0, 1.0, 0.01, 10000, false);
    const DiracTrajectory scored = simulate_trajectory(1.0, 1.0, 0.01, 10000, true);
    const double plain_dist = std::abs(plain.theta.back());
    const double scored_dist = std::abs(scored.theta.back());
    return {plain_dist >= 0.9 && scored_dist < 0.1,
            "final |theta| " + fmt(plain_dist) + " plain (floor 0.9), " + fmt(scored_dist) +
                " score-weighted (ceiling 0.1)"};
}

// 6. Every oversampler balances exactly; interpolating samplers stay on
//    minority segments; generated rows sit inside the scaler's unit box.
Outcome balance_and_containment() {
    struct Toy {
        Eigen::Index n_maj, n_min;
        double center, spread;
        std::uint64_t seed;
    };
    const Toy toys[5] = {{50, 10, 1.3, 0.7, 101},
                         {60, 12, 1.2, 0.8, 102},
                         {45, 9, 1.5, 0.6, 103},
                         {70, 14, 1.1, 0.7, 104},
                         {40, 8, 1.4, 0.8, 105}};
    for (const Toy& t : toys) {
        const Dataset train =
            oracle::two_cluster_toy(t.n_maj, t.n_min, t.center, t.spread, t.seed);
        const Matrix minority = take_rows(train.features, rows_with_label(train, 1));
        const std::string tag =
            " on toy " + std::to_string(t.n_maj) + "/" + std::to_string(t.n_min);

        struct Interpolating {
            const char* name;
            Dataset out;
            Eigen::Index k_used;
        };
        std::vector<Interpolating> runs;
        BaselineNotes notes;
        runs.push_back({"smote", smote(train, 5, t.seed, &notes), notes.k_used});
        runs.push_back(
            {"bsmote", borderline_smote(train, 5, 5, t.seed, &notes), notes.k_used});
        runs.push_back({"adasyn", adasyn(train, 5, t.seed, &notes), notes.k_used});
        for (const Interpolating& r : runs) {
            if (r.out.minority_count() != r.out.majority_count())
                return {false, std::string(r.name) + " left the classes unequal" + tag};
            for (Eigen::Index i = train.n(); i < r.out.n(); ++i) {
                const Vector row = r.out.features.row(i).transpose();
                if (!oracle::on_minority_segment(minority, row, r.k_used, 1e-9))
                    return {false, std::string(r.name) + " row " + std::to_string(i) +
                                       " is off every minority segment" + tag};
            }
        }

        const Dataset copies = ros(train, t.seed);
        if (copies.minority_count() != copies.majority_count())
            return {false, "ros left the classes unequal" + tag};

        PipelineConfig pc;
        pc.k = 3;
        pc.prior_epochs = 200;
        pc.gan = fixtures::desk_gan();
        pc.gan.epochs_main = 60;
        pc.gan.epochs_finetune = 20;
        pc.gan.clusters = 2;
        const PipelineResult res = run_pipeline(train, pc, t.seed);
        if (res.balanced.minority_count() != res.balanced.majority_count())
            return {false, "the pipeline left the classes unequal" + tag};
        const Matrix scaled = apply_scaler(
            res.model.scaler, res.balanced.features.bottomRows(res.balanced.n() - train.n()));
        if ((scaled.array() < -1e-9).any() || (scaled.array() > 1.0 + 1e-9).any())
            return {false, "a generated row leaves the unit box" + tag};
    }
    return {true, "5 toys x 5 oversamplers: exact balance, segments within 1e-9, "
                  "generated rows inside the unit box"};
}

// 7. The classifier the adversarial phases condition on must never move.
Outcome frozen_prior() {
    GanModel m = tiny_model(23);
    const NetworkParams prior_before = m.prior.net;
    const NetworkParams head_before = m.prior_head3;
    const NetworkParams gen_before = m.gen_min;
    const Matrix pool = (Matrix(6, 2) << 0.8, 0.9, 0.7, 0.8, 0.9, 0.7, 0.75, 0.85, 0.85, 0.65,
                         0.8, 0.75)
                            .finished();
    GanConfig cfg;
    cfg.batches_per_epoch = 3;
    cfg.batch_size = 4;
    TrainLog log;
    auto rng = make_rng(31, SeedStream::gan);
    train_gan(m, pool, cfg, 1e-3, 3, log, rng);
    train_gan(m, pool, cfg, 5e-4, 2, log, rng);
    if (networks_equal(m.gen_min, gen_before))
        return {false, "training did not move the generator; the check is vacuous"};
    return {networks_equal(m.prior.net, prior_before) &&
                networks_equal(m.prior_head3, head_before),
            "prior parameters bit-identical across main training and finetuning"};
}

// 8. Directional end-to-end check on a 500-row, ratio-10 toy: paired
//    benchmark repeats, medians over 5 seeds, vanilla SVM as the judge.
Outcome directional_uplift() {
    const Dataset toy = oracle::two_cluster_toy(455, 45, 1.35, 0.7, 7);
    BenchmarkConfig bc;
    bc.repeats = 5;
    bc.pipeline.gan = fixtures::desk_gan();
    const BenchmarkReport report =
        run_benchmark({{"toy", toy}}, {Method::none, Method::anchscgan}, bc, 1);

    std::vector<double> f1_none, f1_anch, gm_none, gm_anch;
    for (const BenchmarkCell& c : report.cells) {
        if (c.failed)
            return {false, "repeat " + std::to_string(c.repeat) + " failed: " + c.error};
        (c.method == Method::none ? f1_none : f1_anch).push_back(c.metrics.f1);
        (c.method == Method::none ? gm_none : gm_anch).push_back(c.metrics.gmean);
    }
    const double f0 = oracle::median(f1_none);
    const double f1 = oracle::median(f1_anch);
    const double g0 = oracle::median(gm_none);
    const double g1 = oracle::median(gm_anch);
    return {f1 >= f0 && g1 >= g0 + 0.05,
            "median F1 " + fmt(f0) + " -> " + fmt(f1) + ", median G-mean " + fmt(g0) + " -> " +
                fmt(g1) + " (needs >= +0.05)"};
}

// 9. Same seed, same flags: byte-identical CSV and model file from the CLI.
Outcome cli_determinism() {
    const fs::path dir_a = work_dir("acceptance_det_a");
    const fs::path dir_b = work_dir("acceptance_det_b");
    for (const fs::path* dir : {&dir_a, &dir_b})
        write_csv(oracle::two_cluster_toy(20, 8, 1.3, 0.7, 11), (*dir / "train.csv").string());

    const std::string args =
        "--seed 5 oversample train.csv --model-out model.bin"
        " --prior-epochs 80 --epochs-main 3 --epochs-finetune 2 --batches-per-epoch 4"
        " --batch-size 16 --clusters 2 --noise-dim 8 --k 3";
    const int ea = run_cli(args, dir_a);
    const int eb = run_cli(args, dir_b);
    if (ea != 0 || eb != 0)
        return {false,
                "CLI exits " + std::to_string(ea) + " and " + std::to_string(eb) + ", not 0"};
    const bool same_csv = slurp(dir_a / "balanced.csv") == slurp(dir_b / "balanced.csv");
    const bool same_model = slurp(dir_a / "model.bin") == slurp(dir_b / "model.bin");
    if (!same_csv) return {false, "balanced.csv differs between the two seeded runs"};
    if (!same_model) return {false, "model.bin differs between the two seeded runs"};
    return {true, "balanced.csv and model.bin byte-identical across two seeded runs"};
}

// 10. A saved and reloaded model must compute bit-identical forward passes.
Outcome persistence_round_trip() {
    const Dataset train = oracle::two_cluster_toy(40, 10, 1.3, 0.7, 77);
    PipelineConfig pc;
    pc.k = 3;
    pc.prior_epochs = 60;
    pc.gan = fixtures::desk_gan();
    pc.gan.epochs_main = 4;
    pc.gan.epochs_finetune = 2;
    pc.gan.batches_per_epoch = 2;
    pc.gan.batch_size = 16;
    pc.gan.noise_dim = 16;
    pc.gan.clusters = 2;
    const GanModel m = run_pipeline(train, pc, 9).model;

    const std::string path = (work_dir("acceptance_persist") / "model.bin").string();
    save_model(m, path);
    const GanModel back = load_model(path);

    const Matrix z = noise(100, m.noise_dim, 123);
    const Matrix x = forward(m.gen_min, z).output();
    const Matrix di = discriminator_input(m, x);
    const bool ok =
        forward(back.gen_min, z).output() == x &&
        forward(back.gen_maj, z).output() == forward(m.gen_maj, z).output() &&
        discriminator_input(back, x) == di &&
        forward(back.discriminator, di).output() == forward(m.discriminator, di).output() &&
        score(back.prior, x) == score(m.prior, x);
    return {ok, "reloaded model reproduces 100-row forward passes bit for bit"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"gradient-exactness", gradient_exactness},
        {"anchor-oracle", anchor_oracle},
        {"metric-arithmetic", metric_arithmetic},
        {"rank-test-significance", rank_test_significance},
        {"one-parameter-regimes", one_parameter_regimes},
        {"balance-and-containment", balance_and_containment},
        {"frozen-prior", frozen_prior},
        {"directional-uplift", directional_uplift},
        {"cli-determinism", cli_determinism},
        {"persistence-round-trip", persistence_round_trip},
    };

    int number = 0;
    int failures = 0;
    for (const Criterion& c : criteria) {
        ++number;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%2d] %s %s: %s\n", number, o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("acceptance: %d/10 passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
