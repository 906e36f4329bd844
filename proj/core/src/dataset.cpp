#include "qkband/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qkband/linalg.hpp"
#include "qkband/rng.hpp"

namespace qkband {

namespace {

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

[[noreturn]] void parse_error(std::size_t row, std::size_t col, const std::string& what) {
    throw std::invalid_argument("csv parse error at row " + std::to_string(row + 1) + ", column " +
                                std::to_string(col + 1) + ": " + what);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open csv file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw std::invalid_argument("csv file is empty: " + path);

    // Header detection: any non-numeric cell in the first row.
    std::vector<std::string> header = split_line(lines[0]);
    bool has_header = false;
    for (const std::string& cell : header) {
        double ignored;
        if (!parse_double(cell, ignored)) {
            has_header = true;
            break;
        }
    }
    std::size_t label_idx = static_cast<std::size_t>(-1);
    if (label_column) {
        if (!has_header)
            throw std::invalid_argument("label column '" + *label_column +
                                        "' requested but the csv has no header row");
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == *label_column) label_idx = j;
        if (label_idx == static_cast<std::size_t>(-1))
            throw std::invalid_argument("label column '" + *label_column + "' not found");
    }

    const std::size_t first_data = has_header ? 1 : 0;
    const std::size_t n_rows = lines.size() - first_data;
    if (n_rows == 0) throw std::invalid_argument("csv has a header but no data rows");
    const std::size_t n_cols = split_line(lines[first_data]).size();
    const bool has_label = label_idx != static_cast<std::size_t>(-1);
    if (has_label && n_cols < 2)
        throw std::invalid_argument("csv needs at least one feature column besides the labels");

    Matrix features(n_rows, has_label ? n_cols - 1 : n_cols);
    std::vector<double> raw_labels(has_label ? n_rows : 0);

    for (std::size_t r = 0; r < n_rows; ++r) {
        const std::vector<std::string> cells = split_line(lines[first_data + r]);
        if (cells.size() != n_cols)
            parse_error(first_data + r, cells.size(),
                        "row has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(n_cols));
        std::size_t out_col = 0;
        for (std::size_t cidx = 0; cidx < n_cols; ++cidx) {
            double value;
            if (cells[cidx].empty()) parse_error(first_data + r, cidx, "missing cell");
            if (!parse_double(cells[cidx], value))
                parse_error(first_data + r, cidx, "non-numeric cell '" + cells[cidx] + "'");
            if (!std::isfinite(value))
                parse_error(first_data + r, cidx, "non-finite value");
            if (has_label && cidx == label_idx)
                raw_labels[r] = value;
            else
                features(r, out_col++) = value;
        }
    }

    Dataset ds;
    ds.features = std::move(features);
    ds.name = path;
    if (has_label) {
        std::set<double> distinct(raw_labels.begin(), raw_labels.end());
        if (distinct.size() != 2)
            throw std::invalid_argument("label column must have exactly two distinct values, got " +
                                        std::to_string(distinct.size()));
        const double low = *distinct.begin();
        ds.labels.resize(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r) ds.labels[r] = raw_labels[r] == low ? -1 : 1;
    }
    return ds;
}

Matrix Standardizer::apply(const Matrix& x) const {
    if (x.rows() == 0) return x;
    if (x.cols() != means.size())
        throw std::invalid_argument("standardize: column count mismatch");
    Matrix out = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) -= means[j];
    return out;
}

Standardizer standardize_fit(const Matrix& train) {
    if (train.rows() == 0) throw std::invalid_argument("standardize_fit: empty training fold");
    Standardizer s;
    s.means.assign(train.cols(), 0.0);
    for (std::size_t i = 0; i < train.rows(); ++i)
        for (std::size_t j = 0; j < train.cols(); ++j) s.means[j] += train(i, j);
    for (double& m : s.means) m /= static_cast<double>(train.rows());
    return s;
}

StandardizeResult standardize_fit_apply(const Matrix& train, const Matrix& test) {
    const Standardizer s = standardize_fit(train);
    return StandardizeResult{s.apply(train), s.apply(test), s.means};
}

PcaTransform pca_fit(const Matrix& train, std::size_t n_components) {
    const std::size_t n = train.rows(), d = train.cols();
    if (n_components == 0 || n_components > std::min(n, d))
        throw std::invalid_argument("pca_fit: n_components must be in [1, min(N, d)]");

    const Standardizer s = standardize_fit(train);
    const Matrix centered = s.apply(train);

    Matrix cov(d, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = centered.row(i);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) cov(a, b) += row[a] * row[b];
    }
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) cov(b, a) = cov(a, b) = cov(a, b) / denom;

    const SymEig eig = sym_eig(cov, true);

    PcaTransform t;
    t.mean = s.means;
    t.components = Matrix(d, n_components);
    t.explained_variance.resize(n_components);
    for (std::size_t c = 0; c < n_components; ++c) {
        t.explained_variance[c] = std::max(eig.eigenvalues[c], 0.0);
        // Deterministic sign: largest-magnitude entry positive.
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            const double mag = std::fabs(eig.eigenvectors(r, c));
            if (mag > best) {
                best = mag;
                arg = r;
            }
        }
        const double sign = eig.eigenvectors(arg, c) < 0.0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < d; ++r) t.components(r, c) = sign * eig.eigenvectors(r, c);
    }
    return t;
}

Matrix pca_apply(const PcaTransform& t, const Matrix& x) {
    if (x.rows() == 0) return Matrix(0, t.components.cols());
    if (x.cols() != t.mean.size()) throw std::invalid_argument("pca_apply: column count mismatch");
    Matrix centered = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) centered(i, j) -= t.mean[j];
    return matmul(centered, t.components);
}

SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed) {
    const std::size_t n = data.features.rows();
    if (n < 2) throw std::invalid_argument("split: need at least two rows");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must be in (0, 1)");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    std::size_t n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

    SplitResult result;
    result.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    result.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

    auto take = [&](const std::vector<std::size_t>& idx, const char* suffix) {
        Dataset out;
        out.features = Matrix(idx.size(), data.features.cols());
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < data.features.cols(); ++j)
                out.features(i, j) = data.features(idx[i], j);
        if (data.has_labels()) {
            out.labels.resize(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) out.labels[i] = data.labels[idx[i]];
        }
        out.name = data.name + suffix;
        return out;
    };
    result.train = take(result.train_indices, "/train");
    result.test = take(result.test_indices, "/test");
    return result;
}

Dataset synth_uniform(std::size_t n_samples, int dimension, std::uint64_t seed) {
    if (dimension < 1) throw std::invalid_argument("synth_uniform: dimension must be >= 1");
    Dataset ds;
    ds.features = Matrix(n_samples, static_cast<std::size_t>(dimension));
    Rng rng(seed);
    for (double& v : ds.features.data()) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
    ds.name = "synthetic:uniform";
    return ds;
}

Dataset synth_hidden_manifold(std::size_t n_samples, int ambient_dim, int manifold_dim,
                              std::uint64_t seed) {
    if (manifold_dim < 1 || ambient_dim < 1)
        throw std::invalid_argument("synth_hidden_manifold: dimensions must be >= 1");
    if (manifold_dim > ambient_dim)
        throw std::invalid_argument("synth_hidden_manifold: manifold_dim must not exceed ambient_dim");
    if (n_samples < 2) throw std::invalid_argument("synth_hidden_manifold: need at least 2 samples");

    const auto d = static_cast<std::size_t>(ambient_dim);
    const auto m = static_cast<std::size_t>(manifold_dim);
    Rng rng(seed);

    Matrix latent(n_samples, m);
    for (double& v : latent.data()) v = rng.gaussian();
    Matrix feature_map(d, m);
    for (double& v : feature_map.data()) v = rng.gaussian();
    std::vector<double> teacher(m);
    for (double& v : teacher) v = rng.gaussian();

    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    Dataset ds;
    ds.features = Matrix(n_samples, d);
    std::vector<double> teacher_out(n_samples, 0.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += feature_map(j, k) * latent(i, k);
            ds.features(i, j) = std::tanh(acc * inv_sqrt_m);
        }
        double t = 0.0;
        for (std::size_t k = 0; k < m; ++k) t += teacher[k] * latent(i, k);
        teacher_out[i] = std::tanh(t * inv_sqrt_m);
    }

    // Threshold at the median so labels are balanced regardless of the draw.
    std::vector<double> sorted = teacher_out;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n_samples / 2),
                     sorted.end());
    const double median = sorted[n_samples / 2];
    ds.labels.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) ds.labels[i] = teacher_out[i] > median ? 1 : -1;
    ds.name = "synthetic:hidden_manifold";
    return ds;
}

}  // namespace qkband
