#include "anchscgan/dataset.hpp"
#include "anchscgan/types.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace anchscgan;

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Fresh working directory per scenario: default output paths are relative.
fs::path work_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliRun run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out_file = dir / "_stdout.txt";
    const fs::path err_file = dir / "_stderr.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" + CLI_BINARY_PATH + "' " + args +
                            " >'" + out_file.string() + "' 2>'" + err_file.string() + "'";
    const int raw = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

// Value of a "  key = value" line in the run manifest output.
std::string kv(const std::string& text, const std::string& key) {
    const std::string needle = "  " + key + " = ";
    const std::size_t at = text.find(needle);
    if (at == std::string::npos) return "";
    const std::size_t end = text.find('\n', at);
    return text.substr(at + needle.size(), end - at - needle.size());
}

double kv_num(const std::string& text, const std::string& key) {
    const std::string v = kv(text, key);
    REQUIRE_FALSE(v.empty());
    return std::strtod(v.c_str(), nullptr);
}

long line_count(const fs::path& path) {
    std::ifstream in(path);
    long n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

// Data lines whose trailing label field equals `value`.
long label_rows(const fs::path& path, const std::string& value) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    long n = 0;
    while (std::getline(in, line))
        if (line.substr(line.rfind(',') + 1) == value) ++n;
    return n;
}

std::string toy_csv(const fs::path& dir, const std::string& name, Eigen::Index n_maj,
                    Eigen::Index n_min, double center, double sig, std::uint64_t seed) {
    const std::string path = (dir / name).string();
    write_csv(oracle::two_cluster_toy(n_maj, n_min, center, sig, seed), path);
    return path;
}

// Collinear rows with a fully hand-derived outcome: minority x in {0,1,2}
// anchor, the minority row at 4.5 sits inside the majority run and is noise,
// majority x=3 is shared overlap, and growth at k=5 finds nothing.
std::string line_csv(const fs::path& dir) {
    Dataset d;
    d.features.resize(9, 2);
    d.features << 0, 0, 1, 0, 2, 0, 4.5, 0, 3, 0, 4, 0, 5, 0, 50, 0, 100, 0;
    d.labels.resize(9);
    d.labels << 1, 1, 1, 1, 0, 0, 0, 0, 0;
    d.column_names = {"x1", "x2"};
    const std::string path = (dir / "line.csv").string();
    write_csv(d, path);
    return path;
}

const std::string kQuickFlags =
    " --prior-epochs 80 --epochs-main 3 --epochs-finetune 2 --batches-per-epoch 4"
    " --batch-size 16 --clusters 2 --noise-dim 8 --k 3";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("oversample writes a balanced csv deterministically") {
    const fs::path dir_a = work_dir("over_a");
    const fs::path dir_b = work_dir("over_b");
    const std::string csv_a = toy_csv(dir_a, "train.csv", 20, 8, 1.3, 0.7, 11);
    const std::string csv_b = toy_csv(dir_b, "train.csv", 20, 8, 1.3, 0.7, 11);

    const std::string args =
        "--seed 5 oversample train.csv --model-out model.bin" + kQuickFlags;
    const CliRun a = run_cli(args, dir_a);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out.find("run manifest") != std::string::npos);
    CHECK(kv(a.out, "command") == "oversample");
    CHECK(kv_num(a.out, "generated_rows") == 12.0);
    CHECK(kv_num(a.out, "balanced_rows") == 40.0);

    // 40 rows at 20/20, the input file passing through as a byte prefix
    CHECK(line_count(dir_a / "balanced.csv") == 41);
    CHECK(label_rows(dir_a / "balanced.csv", "1") == 20);
    CHECK(label_rows(dir_a / "balanced.csv", "0") == 20);
    const std::string train_text = slurp(csv_a);
    CHECK(slurp(dir_a / "balanced.csv").compare(0, train_text.size(), train_text) == 0);

    // model file announces itself
    std::ifstream model(dir_a / "model.bin", std::ios::binary);
    char magic[8] = {};
    model.read(magic, 8);
    CHECK(std::string(magic, 8) == "ANCHGAN1");

    // same seed, same bytes; different seed, different synthetic rows
    const CliRun b = run_cli(args, dir_b);
    REQUIRE(b.exit_code == 0);
    CHECK(slurp(dir_a / "balanced.csv") == slurp(dir_b / "balanced.csv"));
    CHECK(slurp(dir_a / "model.bin") == slurp(dir_b / "model.bin"));

    const CliRun c = run_cli("--seed 6 oversample train.csv --out other.csv" + kQuickFlags,
                             dir_b);
    REQUIRE(c.exit_code == 0);
    CHECK(slurp(dir_b / "other.csv") != slurp(dir_b / "balanced.csv"));
    (void)csv_b;
}

TEST_CASE("anchors reports the hand-derived selection") {
    const fs::path dir = work_dir("anchors");
    line_csv(dir);

    const CliRun r = run_cli("--seed 3 anchors line.csv --k 3", dir);
    REQUIRE(r.exit_code == 0);
    CHECK(kv_num(r.out, "minority_anchors") == 3.0);
    CHECK(kv_num(r.out, "majority_anchors") == 0.0);
    CHECK(kv_num(r.out, "k_used_minority") == 3.0);
    CHECK(kv_num(r.out, "k_used_majority") == 5.0);
    CHECK(kv_num(r.out, "noise_discarded") == 1.0);
    CHECK(kv_num(r.out, "overlap_discarded") == 1.0);
    CHECK(kv(r.out, "anchors_exhausted") == "on");

    // the csv holds exactly the three boundary minority rows
    CHECK(slurp(dir / "anchors.csv") == "x1,x2,class\n0,0,1\n1,0,1\n2,0,1\n");
}

TEST_CASE("filter drops what the prior mislabels and keeps the books straight") {
    const fs::path dir = work_dir("filter");
    toy_csv(dir, "train.csv", 24, 10, 1.5, 0.6, 13);

    const CliRun r = run_cli("--seed 7 filter train.csv --epochs 300 --k 3", dir);
    REQUIRE(r.exit_code == 0);
    CHECK(kv_num(r.out, "input_rows") == 34.0);

    const double pruned = kv_num(r.out, "pruned_rows");
    const double kept = kv_num(r.out, "kept_rows");
    const double removed_min = kv_num(r.out, "removed_minority");
    const double removed_maj = kv_num(r.out, "removed_majority");
    CHECK(kept == pruned - removed_min - removed_maj);
    CHECK(kept >= 1.0);

    CHECK(line_count(dir / "filtered.csv") == static_cast<long>(kept) + 1);
    CHECK(line_count(dir / "anchors_clean.csv") ==
          static_cast<long>(kv_num(r.out, "kept_anchor_rows")) + 1);

    // byte-stable under the same seed
    const fs::path dir2 = work_dir("filter2");
    toy_csv(dir2, "train.csv", 24, 10, 1.5, 0.6, 13);
    const CliRun r2 = run_cli("--seed 7 filter train.csv --epochs 300 --k 3", dir2);
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(dir / "filtered.csv") == slurp(dir2 / "filtered.csv"));
    CHECK(slurp(dir / "anchors_clean.csv") == slurp(dir2 / "anchors_clean.csv"));
}

TEST_CASE("the one-parameter demo lands on its pinned endpoints") {
    const fs::path dir = work_dir("dirac");

    const CliRun plain = run_cli("dirac-demo --steps 10000 --eta 0.01 --no-score", dir);
    REQUIRE(plain.exit_code == 0);
    CHECK(std::abs(kv_num(plain.out, "psi_final") - 1.077649) < 1e-5);
    CHECK(std::abs(kv_num(plain.out, "theta_final") - 0.915970) < 1e-5);
    CHECK(line_count(dir / "dirac.csv") == 10002);  // header + steps + init

    const CliRun scored = run_cli("dirac-demo --steps 10000 --eta 0.01 --out scored.csv", dir);
    REQUIRE(scored.exit_code == 0);  // score weighting is the default
    CHECK(kv(scored.out, "score") == "on");
    CHECK(std::abs(kv_num(scored.out, "theta_final") - (-0.000495)) < 1e-5);
    CHECK(kv_num(scored.out, "theta_distance") < 1e-3);
}

TEST_CASE("config files feed options and the command line overrides them") {
    const fs::path dir = work_dir("config");
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "seed=4\n\n[dirac-demo]\nsteps=5\neta=0.02\n";
    }

    const CliRun from_config = run_cli("--config run.cfg dirac-demo", dir);
    REQUIRE(from_config.exit_code == 0);
    CHECK(kv(from_config.out, "steps") == "5");
    CHECK(kv(from_config.out, "eta") == "0.02");

    const CliRun overridden = run_cli("--config run.cfg dirac-demo --steps 7", dir);
    REQUIRE(overridden.exit_code == 0);
    CHECK(kv(overridden.out, "steps") == "7");
    CHECK(kv(overridden.out, "eta") == "0.02");

    // the seed reaches commands that report it
    line_csv(dir);
    const CliRun seeded = run_cli("--config run.cfg anchors line.csv --k 3", dir);
    REQUIRE(seeded.exit_code == 0);
    CHECK(kv(seeded.out, "seed") == "4");
}

TEST_CASE("benchmark consumes manifests and custom label schemes") {
    const fs::path dir = work_dir("bench");
    toy_csv(dir, "one.csv", 30, 10, 1.2, 0.7, 21);
    toy_csv(dir, "two.csv", 28, 9, 1.0, 0.8, 22);

    // a dataset that names its label column and minority value
    Dataset named = oracle::two_cluster_toy(26, 8, 1.1, 0.7, 23);
    named.label_column = "outcome";
    named.minority_value = "yes";
    named.label_strings.clear();
    for (Eigen::Index i = 0; i < named.n(); ++i)
        named.label_strings.push_back(named.labels(i) == 1 ? "yes" : "no");
    write_csv(named, (dir / "named.csv").string());

    {
        std::ofstream manifest(dir / "sets.txt");
        manifest << "# two plain toys and one renamed\n";
        manifest << "one.csv\n\n";
        manifest << "two.csv\n";
        manifest << "named.csv,outcome,yes\n";
    }

    const std::string args =
        "--seed 2 benchmark --manifest sets.txt --methods none,ros --repeats 2";
    const CliRun r = run_cli(args, dir);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("report written to report.txt") != std::string::npos);

    const std::string report = slurp(dir / "report.txt");
    CHECK(report.find("anchscgan benchmark report") == 0);
    CHECK(report.find("datasets\tone\ttwo\tnamed") != std::string::npos);
    CHECK(report.find("[friedman]") != std::string::npos);

    // reruns are byte-identical
    const CliRun again = run_cli(args + " --out second.txt", dir);
    REQUIRE(again.exit_code == 0);
    CHECK(slurp(dir / "second.txt") == report);
}

TEST_CASE("failures map to the documented exit codes") {
    const fs::path dir = work_dir("errors");
    toy_csv(dir, "train.csv", 12, 6, 1.3, 0.7, 31);

    // 2: unreadable input
    CHECK(run_cli("anchors missing.csv", dir).exit_code == 2);

    // 3: structurally bad input
    {
        std::ofstream manifest(dir / "empty.txt");
        manifest << "# nothing\n";
    }
    CHECK(run_cli("benchmark --manifest empty.txt", dir).exit_code == 3);

    // 4: invalid parameter value
    CHECK(run_cli("anchors train.csv --k 0", dir).exit_code == 4);

    // 5: dataset state rules out the operation
    {
        std::ofstream csv(dir / "oneclass.csv");
        csv << "x1,x2,class\n";
        for (int i = 0; i < 8; ++i) csv << i << "," << i << ",0\n";
    }
    CHECK(run_cli("anchors oneclass.csv", dir).exit_code == 5);

    // 1: parser-level misuse
    CHECK(run_cli("no-such-command", dir).exit_code == 1);
    CHECK(run_cli("anchors", dir).exit_code == 1);  // missing required input
    CHECK(run_cli("anchors train.csv --noise-removal sometimes", dir).exit_code == 1);

    // errors announce themselves on stderr
    const CliRun miss = run_cli("anchors missing.csv", dir);
    CHECK(miss.err.find("error:") != std::string::npos);
    CHECK(miss.out.empty());

    // 0 with usage text for help
    const CliRun help = run_cli("--help", dir);
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("oversample") != std::string::npos);
    CHECK(help.out.find("benchmark") != std::string::npos);
    CHECK(help.out.find("dirac-demo") != std::string::npos);
}

}  // TEST_SUITE
