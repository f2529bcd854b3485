#include "anchscgan/anchor_select.hpp"
#include "anchscgan/benchmark.hpp"
#include "anchscgan/dataset.hpp"
#include "anchscgan/dirac.hpp"
#include "anchscgan/error.hpp"
#include "anchscgan/gan.hpp"
#include "anchscgan/pipeline.hpp"
#include "anchscgan/prior.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace anchscgan;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void kv(const std::string& key, const std::string& value) {
    std::cout << "  " << key << " = " << value << "\n";
}
void kv(const std::string& key, double value) { kv(key, fmt(value)); }
void kv(const std::string& key, Eigen::Index value) { kv(key, std::to_string(value)); }
void kv(const std::string& key, int value) { kv(key, std::to_string(value)); }
void kv(const std::string& key, std::uint64_t value) { kv(key, std::to_string(value)); }
void kv(const std::string& key, bool value) { kv(key, value ? std::string("on") : std::string("off")); }

struct DataOptions {
    std::string input;
    std::string label_column = "class";
    std::string minority_value = "1";
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
    cmd->add_option("input", opts.input, "input CSV file")->required();
    cmd->add_option("--label-column", opts.label_column, "name of the label column")
        ->capture_default_str();
    cmd->add_option("--minority-value", opts.minority_value,
                    "label value of the minority class")
        ->capture_default_str();
}

struct PipelineOptions {
    PipelineConfig config;
    std::string noise_removal = "auto";
    bool no_finetune = false;
};

void add_pipeline_options(CLI::App* cmd, PipelineOptions& opts) {
    auto& pc = opts.config;
    cmd->add_option("--k", pc.k, "neighborhood size for anchor selection")
        ->capture_default_str();
    cmd->add_option("--noise-removal", opts.noise_removal,
                    "noise removal during anchor selection; auto = on below imbalance 30")
        ->check(CLI::IsMember({"auto", "on", "off"}))
        ->capture_default_str();
    cmd->add_option("--prior-epochs", pc.prior_epochs, "prior classifier training epochs")
        ->capture_default_str();
    cmd->add_option("--prior-batch", pc.prior_batch,
                    "prior classifier batch size; 0 = min(128, max(8, n/10))")
        ->capture_default_str();
    cmd->add_option("--prior-lr", pc.prior_lr, "prior classifier learning rate")
        ->capture_default_str();
    cmd->add_option("--noise-dim", pc.gan.noise_dim, "generator input noise width")
        ->capture_default_str();
    cmd->add_option("--epochs-main", pc.gan.epochs_main, "main GAN training epochs")
        ->capture_default_str();
    cmd->add_option("--epochs-finetune", pc.gan.epochs_finetune, "finetuning epochs")
        ->capture_default_str();
    cmd->add_flag("--no-finetune", opts.no_finetune, "skip the finetuning phase");
    cmd->add_option("--batches-per-epoch", pc.gan.batches_per_epoch,
                    "update rounds per epoch")
        ->capture_default_str();
    cmd->add_option("--batch-size", pc.gan.batch_size, "GAN batch size")
        ->capture_default_str();
    cmd->add_option("--lr-main", pc.gan.lr_main, "learning rate for main training")
        ->capture_default_str();
    cmd->add_option("--lr-finetune", pc.gan.lr_finetune, "learning rate for finetuning")
        ->capture_default_str();
    cmd->add_option("--lambda1", pc.gan.lambda1, "minority anchor-loss weight")
        ->capture_default_str();
    cmd->add_option("--lambda2", pc.gan.lambda2, "majority anchor-loss weight")
        ->capture_default_str();
    cmd->add_option("--clusters", pc.gan.clusters, "centroids per class for the anchor loss")
        ->capture_default_str();
    cmd->add_flag("--score,!--no-score", pc.gan.use_score_stabilization,
                  "weight generator updates by the prior score (on by default)");
    cmd->add_flag("--nonsaturating", pc.gan.nonsaturating_generator,
                  "use the -log D generator objective instead of log(1-D)");
}

PipelineConfig resolve_pipeline(const PipelineOptions& opts) {
    PipelineConfig pc = opts.config;
    if (opts.noise_removal == "on") pc.noise_removal = true;
    if (opts.noise_removal == "off") pc.noise_removal = false;
    if (opts.no_finetune) pc.gan.epochs_finetune = 0;
    return pc;
}

void print_pipeline_options(const PipelineOptions& opts) {
    const PipelineConfig& pc = opts.config;
    kv("k", pc.k);
    kv("noise_removal", opts.noise_removal);
    kv("prior_epochs", pc.prior_epochs);
    kv("prior_batch", pc.prior_batch);
    kv("prior_lr", pc.prior_lr);
    kv("noise_dim", pc.gan.noise_dim);
    kv("epochs_main", pc.gan.epochs_main);
    kv("epochs_finetune", opts.no_finetune ? Eigen::Index(0)
                                           : Eigen::Index(pc.gan.epochs_finetune));
    kv("batches_per_epoch", pc.gan.batches_per_epoch);
    kv("batch_size", pc.gan.batch_size);
    kv("lr_main", pc.gan.lr_main);
    kv("lr_finetune", pc.gan.lr_finetune);
    kv("lambda1", pc.gan.lambda1);
    kv("lambda2", pc.gan.lambda2);
    kv("clusters", pc.gan.clusters);
    kv("score_stabilization", pc.gan.use_score_stabilization);
    kv("nonsaturating", pc.gan.nonsaturating_generator);
}

void print_summary(const PipelineSummary& s) {
    std::cout << "results\n";
    kv("train_rows", s.train_rows);
    kv("minority_rows", s.minority_rows);
    kv("majority_rows", s.majority_rows);
    kv("noise_removal", s.noise_removal);
    kv("minority_anchors", s.minority_anchors);
    kv("majority_anchors", s.majority_anchors);
    kv("k_used_minority", s.k_used_minority);
    kv("k_used_majority", s.k_used_majority);
    kv("noise_discarded", s.noise_discarded);
    kv("overlap_discarded", s.overlap_discarded);
    kv("anchors_exhausted", s.anchors_exhausted);
    kv("filtered_train_rows", s.clean_rows);
    kv("anchor_rows", s.anchor_rows);
    kv("filtered_anchor_rows", s.anchor_clean_rows);
    kv("filter_safeguard", s.filter_safeguard);
    kv("generated_rows", s.generated);
    for (const auto& w : s.warnings) std::cout << "  warning: " << w << "\n";
}

struct DatasetSpecLine {
    std::string path;
    std::string label_column = "class";
    std::string minority_value = "1";
};

DatasetSpecLine parse_spec_line(const std::string& line) {
    DatasetSpecLine spec;
    std::size_t first = line.find(',');
    if (first == std::string::npos) {
        spec.path = line;
        return spec;
    }
    spec.path = line.substr(0, first);
    std::size_t second = line.find(',', first + 1);
    if (second == std::string::npos) {
        spec.label_column = line.substr(first + 1);
    } else {
        spec.label_column = line.substr(first + 1, second - first - 1);
        spec.minority_value = line.substr(second + 1);
    }
    if (spec.path.empty() || spec.label_column.empty() || spec.minority_value.empty())
        fail(ErrorCode::format, "bad dataset spec '" + line +
                                    "' (expected path[,label_column[,minority_value]])");
    return spec;
}

std::vector<DatasetSpecLine> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open manifest file: " + path);
    std::vector<DatasetSpecLine> specs;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        specs.push_back(parse_spec_line(line));
    }
    if (specs.empty()) fail(ErrorCode::format, "manifest lists no datasets: " + path);
    return specs;
}

std::vector<std::string> split_methods(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        if (comma == std::string::npos) comma = csv.size();
        std::string item = csv.substr(start, comma - start);
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anchor-guided GAN oversampling for imbalanced binary tabular data"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    std::string out_path;
    app.add_option("--seed", seed, "root seed; every stage derives from it")
        ->capture_default_str();
    app.add_option("--out", out_path, "primary output path (per-command default otherwise)");
    app.set_config("--config", "", "key=value config file; command-line flags override it");

    auto* over = app.add_subcommand("oversample",
                                    "balance a CSV by appending generated minority rows");
    over->configurable();
    DataOptions over_data;
    PipelineOptions over_pipeline;
    std::string model_out;
    add_data_options(over, over_data);
    add_pipeline_options(over, over_pipeline);
    over->add_option("--model-out", model_out, "also save the trained model here");

    auto* bench = app.add_subcommand("benchmark",
                                     "compare oversamplers with a downstream SVM");
    bench->configurable();
    std::vector<std::string> bench_datasets;
    std::string bench_manifest;
    std::string bench_methods = "none,ros,smote,bsmote,adasyn,anchscgan";
    BenchmarkConfig bench_config;
    PipelineOptions bench_pipeline;
    bench->add_option("--dataset", bench_datasets,
                      "dataset spec path[,label_column[,minority_value]]; repeatable");
    bench->add_option("--manifest", bench_manifest, "file with one dataset spec per line");
    bench->add_option("--methods", bench_methods, "comma-separated method list")
        ->capture_default_str();
    bench->add_option("--repeats", bench_config.repeats, "splits per dataset")
        ->capture_default_str();
    bench->add_option("--test-fraction", bench_config.test_fraction,
                      "held-out fraction per split")
        ->capture_default_str();
    bench->add_option("--borderline-m", bench_config.borderline_m,
                      "mixed neighborhood size for borderline SMOTE")
        ->capture_default_str();
    add_pipeline_options(bench, bench_pipeline);

    auto* anchors = app.add_subcommand("anchors", "emit the selected anchor rows as CSV");
    anchors->configurable();
    DataOptions anchors_data;
    Eigen::Index anchors_k = 5;
    std::string anchors_noise = "auto";
    add_data_options(anchors, anchors_data);
    anchors->add_option("--k", anchors_k, "neighborhood size")->capture_default_str();
    anchors->add_option("--noise-removal", anchors_noise, "auto, on or off")
        ->check(CLI::IsMember({"auto", "on", "off"}))
        ->capture_default_str();

    auto* filter = app.add_subcommand(
        "filter", "train the prior on anchors and drop the rows it mislabels");
    filter->configurable();
    DataOptions filter_data;
    Eigen::Index filter_k = 5;
    std::string filter_noise = "auto";
    int filter_epochs = 1000;
    Eigen::Index filter_batch = 0;
    double filter_lr = 1e-3;
    std::string filter_anchor_out = "anchors_clean.csv";
    add_data_options(filter, filter_data);
    filter->add_option("--k", filter_k, "neighborhood size for anchor selection")
        ->capture_default_str();
    filter->add_option("--noise-removal", filter_noise, "auto, on or off")
        ->check(CLI::IsMember({"auto", "on", "off"}))
        ->capture_default_str();
    filter->add_option("--epochs", filter_epochs, "prior training epochs")
        ->capture_default_str();
    filter->add_option("--batch", filter_batch, "prior batch size; 0 = auto")
        ->capture_default_str();
    filter->add_option("--lr", filter_lr, "prior learning rate")->capture_default_str();
    filter->add_option("--anchor-out", filter_anchor_out,
                       "output path for the filtered anchor rows")
        ->capture_default_str();

    auto* dirac = app.add_subcommand(
        "dirac-demo", "one-parameter GAN trajectory with or without score weighting");
    dirac->configurable();
    long dirac_steps = 10000;
    double dirac_eta = 0.01;
    double dirac_psi = 1.0;
    double dirac_theta = 1.0;
    bool dirac_score = true;
    dirac->add_option("--steps", dirac_steps, "update steps")->capture_default_str();
    dirac->add_option("--eta", dirac_eta, "step size")->capture_default_str();
    dirac->add_option("--psi", dirac_psi, "initial discriminator slope")
        ->capture_default_str();
    dirac->add_option("--theta", dirac_theta, "initial generator position")
        ->capture_default_str();
    dirac->add_flag("--score,!--no-score", dirac_score,
                    "weight the generator step by e^-|theta| (on by default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // exit 1 for any usage problem; library failures use 2..6
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(over)) {
            if (out_path.empty()) out_path = "balanced.csv";
            PipelineConfig pc = resolve_pipeline(over_pipeline);
            std::cout << "run manifest\n";
            kv("command", std::string("oversample"));
            kv("input", over_data.input);
            kv("out", out_path);
            kv("model_out", model_out.empty() ? std::string("(none)") : model_out);
            kv("label_column", over_data.label_column);
            kv("minority_value", over_data.minority_value);
            kv("seed", seed);
            print_pipeline_options(over_pipeline);
            Dataset train =
                load_csv(over_data.input, over_data.label_column, over_data.minority_value);
            PipelineResult result = run_pipeline(train, pc, seed);
            write_csv(result.balanced, out_path);
            if (!model_out.empty()) save_model(result.model, model_out);
            print_summary(result.summary);
            kv("balanced_rows", result.balanced.n());
            return 0;
        }

        if (app.got_subcommand(bench)) {
            if (out_path.empty()) out_path = "report.txt";
            std::vector<DatasetSpecLine> specs;
            if (!bench_manifest.empty()) specs = read_manifest(bench_manifest);
            for (const auto& line : bench_datasets) specs.push_back(parse_spec_line(line));
            if (specs.empty())
                fail(ErrorCode::value, "benchmark needs --manifest or --dataset");
            std::vector<NamedDataset> datasets;
            for (std::size_t i = 0; i < specs.size(); ++i) {
                std::string name = std::filesystem::path(specs[i].path).stem().string();
                for (const auto& existing : datasets)
                    if (existing.name == name) {
                        name += "#" + std::to_string(i);
                        break;
                    }
                datasets.push_back(
                    {name, load_csv(specs[i].path, specs[i].label_column,
                                    specs[i].minority_value)});
            }
            std::vector<Method> methods;
            for (const auto& name : split_methods(bench_methods))
                methods.push_back(parse_method(name));
            if (methods.empty()) fail(ErrorCode::value, "empty method list");
            bench_config.pipeline = resolve_pipeline(bench_pipeline);
            bench_config.baseline_k = bench_config.pipeline.k;
            BenchmarkReport report =
                run_benchmark(datasets, methods, bench_config, seed);
            write_report(report, out_path);
            std::cout << format_report(report);
            std::cout << "report written to " << out_path << "\n";
            return 0;
        }

        if (app.got_subcommand(anchors)) {
            if (out_path.empty()) out_path = "anchors.csv";
            Dataset train = load_csv(anchors_data.input, anchors_data.label_column,
                                     anchors_data.minority_value);
            Dataset scaled = train;
            scaled.features = apply_scaler(fit_scaler(train.features), train.features);
            std::optional<bool> noise;
            if (anchors_noise == "on") noise = true;
            if (anchors_noise == "off") noise = false;
            AnchorResult result = select_anchors(scaled, anchors_k, noise, seed);
            std::vector<Eigen::Index> rows;
            for (Eigen::Index i : result.set.minority_indices)
                rows.push_back(result.minority_train_rows[static_cast<std::size_t>(i)]);
            for (Eigen::Index i : result.set.majority_indices)
                rows.push_back(result.majority_train_rows[static_cast<std::size_t>(i)]);
            write_csv(take_rows(train, rows), out_path);
            std::cout << "run manifest\n";
            kv("command", std::string("anchors"));
            kv("input", anchors_data.input);
            kv("out", out_path);
            kv("seed", seed);
            kv("k", anchors_k);
            kv("noise_removal", anchors_noise);
            std::cout << "results\n";
            kv("minority_anchors",
               static_cast<Eigen::Index>(result.set.minority_indices.size()));
            kv("majority_anchors",
               static_cast<Eigen::Index>(result.set.majority_indices.size()));
            kv("k_used_minority", result.set.k_used_minority);
            kv("k_used_majority", result.set.k_used_majority);
            kv("noise_discarded",
               static_cast<Eigen::Index>(result.set.discarded_noise.size()));
            kv("overlap_discarded",
               static_cast<Eigen::Index>(result.set.discarded_overlap.size()));
            kv("anchors_exhausted", result.set.exhausted);
            return 0;
        }

        if (app.got_subcommand(filter)) {
            if (out_path.empty()) out_path = "filtered.csv";
            Dataset data = load_csv(filter_data.input, filter_data.label_column,
                                    filter_data.minority_value);
            Dataset scaled = data;
            scaled.features = apply_scaler(fit_scaler(data.features), data.features);
            std::optional<bool> noise;
            if (filter_noise == "on") noise = true;
            if (filter_noise == "off") noise = false;
            AnchorResult anchor = select_anchors(scaled, filter_k, noise, seed);

            std::vector<Eigen::Index> anchor_rows;
            for (Eigen::Index i : anchor.set.minority_indices)
                anchor_rows.push_back(anchor.minority_train_rows[static_cast<std::size_t>(i)]);
            for (Eigen::Index i : anchor.set.majority_indices)
                anchor_rows.push_back(anchor.majority_train_rows[static_cast<std::size_t>(i)]);
            PriorClassifier prior = train_prior(take_rows(scaled, anchor_rows),
                                                filter_epochs, filter_batch, filter_lr, seed);

            // pruned_train keeps original row order, so it maps back to the
            // input rows by skipping the discarded ones.
            std::vector<bool> discarded(static_cast<std::size_t>(data.n()), false);
            for (Eigen::Index i : anchor.set.discarded_noise)
                discarded[static_cast<std::size_t>(
                    anchor.minority_train_rows[static_cast<std::size_t>(i)])] = true;
            for (Eigen::Index i : anchor.set.discarded_overlap)
                discarded[static_cast<std::size_t>(
                    anchor.majority_train_rows[static_cast<std::size_t>(i)])] = true;
            std::vector<Eigen::Index> pruned_rows;
            for (Eigen::Index i = 0; i < data.n(); ++i)
                if (!discarded[static_cast<std::size_t>(i)]) pruned_rows.push_back(i);

            FilterOutcome clean = filter_misclassified(prior, anchor.pruned_train);
            std::vector<Eigen::Index> clean_rows;
            for (Eigen::Index i : clean.kept_rows)
                clean_rows.push_back(pruned_rows[static_cast<std::size_t>(i)]);
            write_csv(take_rows(data, clean_rows), out_path);

            FilterOutcome anchor_clean =
                filter_misclassified(prior, take_rows(scaled, anchor_rows));
            std::vector<Eigen::Index> anchor_clean_rows;
            for (Eigen::Index i : anchor_clean.kept_rows)
                anchor_clean_rows.push_back(anchor_rows[static_cast<std::size_t>(i)]);
            write_csv(take_rows(data, anchor_clean_rows), filter_anchor_out);

            std::cout << "run manifest\n";
            kv("command", std::string("filter"));
            kv("input", filter_data.input);
            kv("out", out_path);
            kv("anchor_out", filter_anchor_out);
            kv("seed", seed);
            kv("k", filter_k);
            kv("noise_removal", filter_noise);
            kv("epochs", filter_epochs);
            kv("batch", filter_batch);
            kv("lr", filter_lr);
            std::cout << "results\n";
            kv("input_rows", data.n());
            kv("pruned_rows", static_cast<Eigen::Index>(pruned_rows.size()));
            kv("anchor_rows", static_cast<Eigen::Index>(anchor_rows.size()));
            kv("kept_rows", static_cast<Eigen::Index>(clean_rows.size()));
            kv("removed_minority", clean.removed_minority);
            kv("removed_majority", clean.removed_majority);
            kv("safeguard_triggered", clean.safeguard_triggered);
            kv("kept_anchor_rows", static_cast<Eigen::Index>(anchor_clean_rows.size()));
            return 0;
        }

        if (app.got_subcommand(dirac)) {
            if (out_path.empty()) out_path = "dirac.csv";
            if (dirac_steps < 0) fail(ErrorCode::value, "steps must be non-negative");
            DiracTrajectory trajectory =
                simulate_trajectory(dirac_psi, dirac_theta, dirac_eta, dirac_steps,
                                    dirac_score);
            write_trajectory_csv(trajectory, out_path);
            const double psi_final = trajectory.psi.back();
            const double theta_final = trajectory.theta.back();
            std::cout << "run manifest\n";
            kv("command", std::string("dirac-demo"));
            kv("out", out_path);
            kv("steps", static_cast<Eigen::Index>(dirac_steps));
            kv("eta", dirac_eta);
            kv("psi0", dirac_psi);
            kv("theta0", dirac_theta);
            kv("score", dirac_score);
            std::cout << "results\n";
            kv("psi_final", psi_final);
            kv("theta_final", theta_final);
            kv("theta_distance", std::abs(theta_final));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    }
    return 0;
}
