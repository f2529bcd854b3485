#include "anchscgan/dataset.hpp"

#include "anchscgan/error.hpp"
#include "anchscgan/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace anchscgan {

std::vector<Eigen::Index> rows_with_label(const Dataset& data, int label) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < data.n(); ++i)
        if (data.labels(i) == label) rows.push_back(i);
    return rows;
}

Matrix take_rows(const Matrix& m, const std::vector<Eigen::Index>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
    return out;
}

Dataset take_rows(const Dataset& data, const std::vector<Eigen::Index>& rows) {
    Dataset out;
    out.features = take_rows(data.features, rows);
    out.labels.resize(static_cast<Eigen::Index>(rows.size()));
    out.column_names = data.column_names;
    out.label_column = data.label_column;
    out.minority_value = data.minority_value;
    // label_strings are optional on programmatic datasets
    const bool with_strings =
        data.label_strings.size() == static_cast<std::size_t>(data.n());
    if (with_strings) out.label_strings.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.labels(static_cast<Eigen::Index>(i)) = data.labels(rows[i]);
        if (with_strings)
            out.label_strings.push_back(data.label_strings[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trimmed(std::string s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    const std::string t = trimmed(cell);
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || t.empty())
        fail(ErrorCode::format, "non-numeric cell at row " + std::to_string(row) +
                                    ", column '" + column + "': '" + t + "'");
    if (!std::isfinite(value))
        fail(ErrorCode::format, "non-finite cell at row " + std::to_string(row) +
                                    ", column '" + column + "'");
    return value;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& minority_value) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::format, "empty file '" + path + "'");
    std::vector<std::string> header = split_line(line);
    for (auto& h : header) h = trimmed(h);

    Eigen::Index label_col = -1;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == label_column) label_col = static_cast<Eigen::Index>(j);
    if (label_col < 0)
        fail(ErrorCode::format, "label column '" + label_column + "' not found in '" + path + "'");

    const std::size_t width = header.size();
    std::vector<std::vector<double>> rows;
    std::vector<std::string> label_cells;
    std::size_t row_number = 1;  // header is row 1
    while (std::getline(in, line)) {
        ++row_number;
        if (trimmed(line).empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != width)
            fail(ErrorCode::format, "row " + std::to_string(row_number) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(width));
        std::vector<double> values;
        values.reserve(width - 1);
        for (std::size_t j = 0; j < width; ++j) {
            if (static_cast<Eigen::Index>(j) == label_col) continue;
            values.push_back(parse_cell(cells[j], row_number, header[j]));
        }
        rows.push_back(std::move(values));
        label_cells.push_back(trimmed(cells[static_cast<std::size_t>(label_col)]));
    }

    Dataset data;
    data.label_column = label_column;
    data.minority_value = minority_value;
    for (std::size_t j = 0; j < width; ++j)
        if (static_cast<Eigen::Index>(j) != label_col) data.column_names.push_back(header[j]);

    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index d = static_cast<Eigen::Index>(width) - 1;
    data.features.resize(n, d);
    data.labels.resize(n);
    data.label_strings = label_cells;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j)
            data.features(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        data.labels(i) = label_cells[static_cast<std::size_t>(i)] == minority_value ? 1 : 0;
    }

    const Eigen::Index n_min = data.minority_count();
    const Eigen::Index n_maj = data.majority_count();
    if (n_min < 2 || n_maj < 2)
        fail(ErrorCode::state, "need at least 2 rows per class, got " + std::to_string(n_min) +
                                   " matching '" + minority_value + "' and " +
                                   std::to_string(n_maj) + " others");
    if (n_min >= n_maj)
        fail(ErrorCode::state, "class 1 not minority: " + std::to_string(n_min) + " rows match '" +
                                   minority_value + "' vs " + std::to_string(n_maj) + " others");
    return data;
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
    for (std::size_t j = 0; j < data.column_names.size(); ++j)
        out << data.column_names[j] << ',';
    out << data.label_column << '\n';

    char buf[64];
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index j = 0; j < data.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", data.features(i, j));
            out << buf << ',';
        }
        const std::size_t si = static_cast<std::size_t>(i);
        if (si < data.label_strings.size())
            out << data.label_strings[si];
        else
            out << (data.labels(i) == 1 ? data.minority_value : "0");
        out << '\n';
    }
    if (!out) fail(ErrorCode::io, "write failed for '" + path + "'");
}

Scaler fit_scaler(const Matrix& train_features) {
    if (train_features.rows() < 1) fail(ErrorCode::value, "scaler needs at least one row");
    Scaler s;
    s.col_min = train_features.colwise().minCoeff();
    s.col_max = train_features.colwise().maxCoeff();
    return s;
}

Matrix apply_scaler(const Scaler& s, const Matrix& x) {
    if (x.cols() != s.col_min.size())
        fail(ErrorCode::value, "scaler width mismatch: " + std::to_string(x.cols()) + " vs " +
                                   std::to_string(s.col_min.size()));
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double range = s.col_max(j) - s.col_min(j);
        if (range == 0.0)
            out.col(j).setZero();
        else
            out.col(j) = (x.col(j).array() - s.col_min(j)) / range;
    }
    return out;
}

Matrix invert_scaler(const Scaler& s, const Matrix& x) {
    if (x.cols() != s.col_min.size())
        fail(ErrorCode::value, "scaler width mismatch: " + std::to_string(x.cols()) + " vs " +
                                   std::to_string(s.col_min.size()));
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double range = s.col_max(j) - s.col_min(j);
        if (range == 0.0)
            out.col(j).setConstant(s.col_min(j));
        else
            out.col(j) = x.col(j).array() * range + s.col_min(j);
    }
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        fail(ErrorCode::value, "test fraction must lie in (0,1), got " +
                                   std::to_string(test_fraction));
    for (int label : {0, 1})
        if (data.count(label) < 2)
            fail(ErrorCode::state, "stratified split needs >=2 rows per class");

    auto rng = make_rng(seed, SeedStream::split);
    std::vector<bool> in_test(static_cast<std::size_t>(data.n()), false);
    for (int label : {1, 0}) {
        const std::vector<Eigen::Index> rows = rows_with_label(data, label);
        const Eigen::Index count = static_cast<Eigen::Index>(rows.size());
        Eigen::Index take = static_cast<Eigen::Index>(
            std::lround(static_cast<double>(count) * test_fraction));
        take = std::clamp<Eigen::Index>(take, 1, count - 1);
        const auto picks = shuffled_indices(count, rng, take);
        for (Eigen::Index p : picks) in_test[static_cast<std::size_t>(rows[static_cast<std::size_t>(p)])] = true;
    }

    std::vector<Eigen::Index> train_rows, test_rows;
    for (Eigen::Index i = 0; i < data.n(); ++i)
        (in_test[static_cast<std::size_t>(i)] ? test_rows : train_rows).push_back(i);
    return {take_rows(data, train_rows), take_rows(data, test_rows)};
}

}  // namespace anchscgan
