#include "anchscgan/benchmark.hpp"

#include "anchscgan/dataset.hpp"
#include "anchscgan/error.hpp"
#include "anchscgan/rng.hpp"
#include "anchscgan/svm.hpp"

#include <cstdio>
#include <fstream>

namespace anchscgan {
namespace {

constexpr const char* kMethodNames[] = {"none", "ros",    "smote",
                                        "bsmote", "adasyn", "anchscgan"};

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

Dataset apply_method(const Dataset& train, Method method, const BenchmarkConfig& config,
                     std::uint64_t cell_seed) {
    switch (method) {
        case Method::none:
            return train;
        case Method::ros:
            return ros(train, cell_seed);
        case Method::smote:
            return smote(train, config.baseline_k, cell_seed);
        case Method::bsmote:
            return borderline_smote(train, config.baseline_k, config.borderline_m, cell_seed);
        case Method::adasyn:
            return adasyn(train, config.baseline_k, cell_seed);
        case Method::anchscgan: {
            PipelineConfig pc = config.pipeline;
            return run_pipeline(train, pc, cell_seed).balanced;
        }
    }
    fail(ErrorCode::value, "unknown oversampling method");
}

double metric_by_name(const Metrics& m, const std::string& name) {
    if (name == "precision") return m.precision;
    if (name == "recall") return m.recall;
    if (name == "specificity") return m.specificity;
    if (name == "f1") return m.f1;
    if (name == "gmean") return m.gmean;
    return m.auc;
}

}  // namespace

Method parse_method(const std::string& name) {
    for (int i = 0; i < 6; ++i)
        if (name == kMethodNames[i]) return static_cast<Method>(i);
    fail(ErrorCode::value, "unknown method '" + name +
                               "' (expected none, ros, smote, bsmote, adasyn or anchscgan)");
}

std::string method_name(Method method) {
    return kMethodNames[static_cast<int>(method)];
}

BenchmarkReport run_benchmark(const std::vector<NamedDataset>& datasets,
                              const std::vector<Method>& methods, const BenchmarkConfig& config,
                              std::uint64_t seed) {
    if (datasets.empty()) fail(ErrorCode::value, "benchmark needs at least one dataset");
    if (methods.empty()) fail(ErrorCode::value, "benchmark needs at least one method");
    if (config.repeats < 1) fail(ErrorCode::value, "benchmark repeats must be positive");
    if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
        fail(ErrorCode::value, "test fraction must lie strictly between 0 and 1");

    BenchmarkReport report;
    for (const auto& d : datasets) report.dataset_names.push_back(d.name);
    report.methods = methods;
    report.repeats = config.repeats;
    report.test_fraction = config.test_fraction;
    report.seed = seed;

    const std::uint64_t root = mix_seed(seed, SeedStream::benchmark);
    for (std::size_t di = 0; di < datasets.size(); ++di) {
        for (int r = 0; r < config.repeats; ++r) {
            // One split per (dataset, repeat): every method sees the same
            // train/test partition, so comparisons are paired.
            const std::uint64_t repeat_seed =
                mix_seed(root, static_cast<std::uint64_t>(di) * 100003 +
                                   static_cast<std::uint64_t>(r));
            Dataset train, test;
            bool split_ok = true;
            std::string split_error;
            try {
                std::tie(train, test) =
                    stratified_split(datasets[di].data, config.test_fraction, repeat_seed);
            } catch (const Error& e) {
                split_ok = false;
                split_error = e.what();
            }
            for (Method method : methods) {
                BenchmarkCell cell;
                cell.dataset = datasets[di].name;
                cell.method = method;
                cell.repeat = r;
                if (!split_ok) {
                    cell.failed = true;
                    cell.error = split_error;
                    report.cells.push_back(std::move(cell));
                    continue;
                }
                const std::uint64_t cell_seed =
                    mix_seed(repeat_seed, 16 + static_cast<std::uint64_t>(method));
                try {
                    Dataset balanced = apply_method(train, method, config, cell_seed);
                    Scaler scaler = fit_scaler(balanced.features);
                    SvmModel svm =
                        train_svm(apply_scaler(scaler, balanced.features), balanced.labels);
                    IntVector predicted =
                        svm_predict(svm, apply_scaler(scaler, test.features));
                    cell.counts = confusion_counts(test.labels, predicted);
                    cell.metrics = metrics_from_counts(cell.counts);
                } catch (const Error& e) {
                    cell.failed = true;
                    cell.error = e.what();
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }

    for (std::size_t di = 0; di < datasets.size(); ++di) {
        for (Method method : methods) {
            AggregateRow row;
            row.dataset = datasets[di].name;
            row.method = method;
            for (const auto& cell : report.cells) {
                if (cell.dataset != row.dataset || cell.method != method || cell.failed)
                    continue;
                row.mean.precision += cell.metrics.precision;
                row.mean.recall += cell.metrics.recall;
                row.mean.specificity += cell.metrics.specificity;
                row.mean.f1 += cell.metrics.f1;
                row.mean.gmean += cell.metrics.gmean;
                row.mean.auc += cell.metrics.auc;
                ++row.successful_repeats;
            }
            if (row.successful_repeats > 0) {
                const double inv = 1.0 / row.successful_repeats;
                row.mean.precision *= inv;
                row.mean.recall *= inv;
                row.mean.specificity *= inv;
                row.mean.f1 *= inv;
                row.mean.gmean *= inv;
                row.mean.auc *= inv;
            }
            report.aggregates.push_back(std::move(row));
        }
    }

    if (datasets.size() >= 2 && methods.size() >= 2) {
        for (const char* metric :
             {"precision", "recall", "specificity", "f1", "gmean", "auc"}) {
            Matrix scores(static_cast<Eigen::Index>(datasets.size()),
                          static_cast<Eigen::Index>(methods.size()));
            for (std::size_t di = 0; di < datasets.size(); ++di)
                for (std::size_t mi = 0; mi < methods.size(); ++mi)
                    scores(static_cast<Eigen::Index>(di), static_cast<Eigen::Index>(mi)) =
                        metric_by_name(
                            report.aggregates[di * methods.size() + mi].mean, metric);
            report.friedman.push_back({metric, friedman_test(scores)});
        }
    }
    return report;
}

std::string format_report(const BenchmarkReport& report) {
    std::string out;
    out += "anchscgan benchmark report\n";
    out += "seed\t" + std::to_string(report.seed) + "\n";
    out += "repeats\t" + std::to_string(report.repeats) + "\n";
    out += "test_fraction\t" + format_double("%.6f", report.test_fraction) + "\n";
    out += "datasets";
    for (const auto& name : report.dataset_names) out += "\t" + name;
    out += "\nmethods";
    for (Method m : report.methods) out += "\t" + method_name(m);
    out += "\n\n[cells]\n";
    out += "dataset\tmethod\trepeat\tstatus\ttp\tfp\ttn\tfn\tprecision\trecall\t"
           "specificity\tf1\tgmean\tauc\terror\n";
    for (const auto& cell : report.cells) {
        out += cell.dataset + "\t" + method_name(cell.method) + "\t" +
               std::to_string(cell.repeat) + "\t";
        if (cell.failed) {
            out += "failed\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t" + cell.error + "\n";
            continue;
        }
        out += "ok\t" + std::to_string(cell.counts.tp) + "\t" +
               std::to_string(cell.counts.fp) + "\t" + std::to_string(cell.counts.tn) +
               "\t" + std::to_string(cell.counts.fn);
        for (double v : {cell.metrics.precision, cell.metrics.recall,
                         cell.metrics.specificity, cell.metrics.f1, cell.metrics.gmean,
                         cell.metrics.auc})
            out += "\t" + format_double("%.6f", v);
        out += "\t-\n";
    }
    out += "\n[aggregate means]\n";
    out += "dataset\tmethod\trepeats_ok\tprecision\trecall\tspecificity\tf1\tgmean\tauc\n";
    for (const auto& row : report.aggregates) {
        out += row.dataset + "\t" + method_name(row.method) + "\t" +
               std::to_string(row.successful_repeats);
        for (double v : {row.mean.precision, row.mean.recall, row.mean.specificity,
                         row.mean.f1, row.mean.gmean, row.mean.auc})
            out += "\t" + format_double("%.6f", v);
        out += "\n";
    }
    out += "\n[friedman]\n";
    if (report.friedman.empty()) {
        out += "skipped: needs at least 2 methods and 2 datasets\n";
    } else {
        out += "metric\tstatistic\tp_value\taverage_ranks\n";
        for (const auto& row : report.friedman) {
            out += row.metric + "\t" + format_double("%.6f", row.result.statistic) + "\t" +
                   format_double("%.6e", row.result.p_value);
            for (Eigen::Index j = 0; j < row.result.average_ranks.size(); ++j)
                out += (j == 0 ? "\t" : " ") + method_name(report.methods[j]) + "=" +
                       format_double("%.3f", row.result.average_ranks(j));
            out += "\n";
        }
    }
    return out;
}

void write_report(const BenchmarkReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot open report file for writing: " + path);
    out << format_report(report);
    if (!out) fail(ErrorCode::io, "failed while writing report file: " + path);
}

}  // namespace anchscgan
