#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkband/matrix.hpp"

namespace qkband {

/// Feature matrix plus optional binary labels in {-1, +1}.
struct Dataset {
    Matrix features;
    std::vector<int> labels;  // empty when unlabeled
    std::string name;

    bool has_labels() const { return !labels.empty(); }
};

/// Parses a rectangular numeric CSV. A header row is detected when the first
/// line contains a non-numeric cell. If label_column names a header column,
/// that column is split off and its two distinct values are mapped to
/// {-1, +1} (smaller value -> -1). Ragged rows, non-numeric cells and more
/// than two label classes are parse errors that name the offending position.
Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& label_column = std::nullopt);

/// Mean-removal transform fitted on the training fold only. No variance
/// scaling.
struct Standardizer {
    std::vector<double> means;
    Matrix apply(const Matrix& x) const;
};

Standardizer standardize_fit(const Matrix& train);

/// Convenience wrapper: fit on train, shift both folds by the train means.
struct StandardizeResult {
    Matrix train;
    Matrix test;
    std::vector<double> means;
};
StandardizeResult standardize_fit_apply(const Matrix& train, const Matrix& test);

/// Principal components of the training covariance, descending by explained
/// variance. Component sign is fixed so the largest-magnitude entry of each
/// column is positive.
struct PcaTransform {
    std::vector<double> mean;
    Matrix components;                      // d x n, orthonormal columns
    std::vector<double> explained_variance;  // descending, >= 0
};

PcaTransform pca_fit(const Matrix& train, std::size_t n_components);
Matrix pca_apply(const PcaTransform& t, const Matrix& x);

struct SplitResult {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Deterministic shuffled split; the same seed always yields the same folds.
SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed);

/// N iid points uniform on [-pi, pi]^dimension, unlabeled.
Dataset synth_uniform(std::size_t n_samples, int dimension, std::uint64_t seed);

/// Latent Gaussian points on a manifold_dim-dimensional manifold, mapped to
/// ambient_dim features through a random tanh feature map; labels come from a
/// smooth teacher on the latent variables, thresholded at its median so both
/// classes are populated.
Dataset synth_hidden_manifold(std::size_t n_samples, int ambient_dim, int manifold_dim,
                              std::uint64_t seed);

}  // namespace qkband
