#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkband/circuits.hpp"
#include "qkband/kernels.hpp"

namespace qkband {

/// count points uniformly spaced on a log scale between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// 40 log-spaced bandwidths in [1e-3, 10^1.5].
std::vector<double> default_bandwidth_grid();

/// Everything a sweep run needs. Defaults mirror the standard protocol:
/// L = 2, gamma = 1, C grid {32, 64, 128, 512, 1024}, 40 log-spaced
/// bandwidths, six split seeds, lambda = 1/(2C) for the geometric
/// difference.
struct ExperimentConfig {
    // Data source: a CSV path, "synthetic:hidden_manifold", or
    // "synthetic:uniform" (unlabeled; metric columns only, no SVM scores).
    std::string dataset = "synthetic:hidden_manifold";
    std::optional<std::string> label_column;
    std::vector<int> dimensions{4};
    std::vector<CircuitFamily> circuits{CircuitFamily::SeparableRX};
    std::vector<KernelKind> kernels{KernelKind::FQK, KernelKind::PQK, KernelKind::RBF,
                                    KernelKind::Poly};
    int layers = 2;
    double gamma = 1.0;
    int poly_order = 2;
    std::vector<double> bandwidth_grid = default_bandwidth_grid();
    std::vector<double> regularization_grid{32.0, 64.0, 128.0, 512.0, 1024.0};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5};
    double train_fraction = 0.8;
    std::size_t synth_samples = 400;
    int synth_ambient_dim = 6;
    int synth_manifold_dim = 3;
    std::uint64_t synth_data_seed = 42;  // the dataset draw; split seeds vary separately
    bool standardize = true;
    bool pca = true;
    bool fit_on_full = false;  // fit preprocessing on the full set instead of the train fold
    std::uint64_t param_seed = 1;
    std::string output_dir = "qkband-out";
};

/// Parses a flat JSON document; unknown keys are rejected so typos fail loud.
ExperimentConfig config_from_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& config);

struct SweepOutcome {
    bool all_cells_ok = false;
    std::size_t n_rows = 0;
    std::string sweep_csv;
    std::string optima_csv;   // empty when the dataset is unlabeled
    std::string summary_csv;
    std::string config_json;  // resolved config echoed for provenance
};

/// Full grid run: per (seed, dimension) the data is split, standardized and
/// projected, then every (circuit, kernel, bandwidth, C) cell produces one
/// CSV row with test ROC-AUC, the Gram diagnostics, and the geometric and
/// Frobenius distances against RBF and polynomial references at the same
/// bandwidth. Cell failures are recorded as flagged rows and the sweep
/// continues. Outputs are byte-deterministic for a fixed config.
SweepOutcome run_sweep(const ExperimentConfig& config);

/// Re-aggregates a sweep CSV from disk: per (dataset, circuit, kernel, n, c,
/// C) group, the mean and median over seeds of every numeric column.
void aggregate_sweep_csv(const std::string& sweep_csv_path, const std::string& out_path);

/// Analytic-model comparison table: for each (dimension, layer count,
/// bandwidth) the closed-form variance / largest eigenvalue / expressivity
/// curves with their limits, next to the discrete values from one uniform
/// sample of n_samples points.
void run_analytic_compare(const std::vector<int>& dimensions, const std::vector<int>& layer_counts,
                          std::size_t n_samples, std::uint64_t seed,
                          const std::vector<double>& bandwidth_grid, const std::string& out_csv);

}  // namespace qkband
