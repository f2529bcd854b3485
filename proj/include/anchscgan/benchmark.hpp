#pragma once

#include "anchscgan/baselines.hpp"
#include "anchscgan/metrics.hpp"
#include "anchscgan/pipeline.hpp"
#include "anchscgan/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace anchscgan {

enum class Method { none, ros, smote, bsmote, adasyn, anchscgan };

Method parse_method(const std::string& name);
std::string method_name(Method method);

struct NamedDataset {
    std::string name;
    Dataset data;
};

struct BenchmarkCell {
    std::string dataset;
    Method method = Method::none;
    int repeat = 0;
    bool failed = false;
    std::string error;
    ConfusionCounts counts;
    Metrics metrics;
};

struct AggregateRow {
    std::string dataset;
    Method method = Method::none;
    Metrics mean;
    int successful_repeats = 0;
};

struct FriedmanRow {
    std::string metric;
    FriedmanResult result;
};

struct BenchmarkReport {
    std::vector<std::string> dataset_names;
    std::vector<Method> methods;
    int repeats = 0;
    double test_fraction = 0.3;
    std::uint64_t seed = 0;
    std::vector<BenchmarkCell> cells;
    std::vector<AggregateRow> aggregates;
    std::vector<FriedmanRow> friedman;  // empty unless >=2 methods and >=2 datasets
};

struct BenchmarkConfig {
    int repeats = 5;
    double test_fraction = 0.3;
    Eigen::Index baseline_k = 5;
    Eigen::Index borderline_m = 10;
    PipelineConfig pipeline;
};

// Per (dataset, method, repeat): stratified split, oversample the train side
// only, fit the evaluation scaler on the balanced train, train the SVM, score
// the untouched test split. The split is shared across methods of a repeat.
BenchmarkReport run_benchmark(const std::vector<NamedDataset>& datasets,
                              const std::vector<Method>& methods, const BenchmarkConfig& config,
                              std::uint64_t seed);

void write_report(const BenchmarkReport& report, const std::string& path);
std::string format_report(const BenchmarkReport& report);

}  // namespace anchscgan
