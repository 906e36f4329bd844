#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkband/dataset.hpp"
#include "qkband/kernels.hpp"
#include "qkband/sweep.hpp"
#if defined(QKBAND_WITH_PLOTS)
#include "qkband/plot.hpp"
#endif

namespace {

// "lo:hi:count" (log-spaced) or a comma list of explicit values.
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        double lo, hi;
        std::size_t count;
        char sep1, sep2;
        std::istringstream ss(text);
        if (!(ss >> lo >> sep1 >> hi >> sep2 >> count) || sep1 != ':' || sep2 != ':')
            throw CLI::ValidationError("grid", "expected lo:hi:count, got '" + text + "'");
        return qkband::log_grid(lo, hi, count);
    }
    std::vector<double> values;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    return values;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("config", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

qkband::Dataset load_any_dataset(const std::string& source,
                                 const std::optional<std::string>& label_column,
                                 std::size_t synth_samples, int ambient, int manifold,
                                 std::uint64_t data_seed, int uniform_dim) {
    if (source == "synthetic:hidden_manifold")
        return qkband::synth_hidden_manifold(synth_samples, ambient, manifold, data_seed);
    if (source == "synthetic:uniform")
        return qkband::synth_uniform(synth_samples, uniform_dim, data_seed);
    return qkband::load_csv(source, label_column);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bandwidth-tuned quantum/classical kernel study harness"};
    app.require_subcommand(1);

    // ---- sweep -----------------------------------------------------------
    auto* sweep = app.add_subcommand(
        "sweep", "grid run over (seed, dimension, circuit, kernel, bandwidth, C)");
    std::string sweep_config_path, sweep_dataset, sweep_label, sweep_cgrid, sweep_output;
    std::vector<int> sweep_dims;
    std::vector<std::string> sweep_circuits, sweep_kernels;
    std::vector<double> sweep_reg;
    std::vector<std::uint64_t> sweep_seeds;
    int sweep_layers = 0;
    double sweep_gamma = 0.0, sweep_train_fraction = 0.0;
    int sweep_poly_order = 0;
    std::uint64_t sweep_param_seed = 0, sweep_data_seed = 0;
    std::size_t sweep_samples = 0;
    int sweep_ambient = 0, sweep_manifold = 0;
    bool sweep_no_standardize = false, sweep_no_pca = false, sweep_fit_on_full = false;

    sweep->add_option("--config", sweep_config_path, "JSON config file; flags override its keys");
    sweep->add_option("--dataset", sweep_dataset,
                      "CSV path, synthetic:hidden_manifold, or synthetic:uniform");
    sweep->add_option("--label-column", sweep_label, "label column name for CSV datasets");
    sweep->add_option("--dims", sweep_dims, "feature dimensions / qubit counts")->delimiter(',');
    sweep->add_option("--circuits", sweep_circuits,
                      "encoding circuits (separable_rx, iqp, hzy_cz, yz_cx, z_embedding)")
        ->delimiter(',');
    sweep->add_option("--kernels", sweep_kernels, "kernels (fqk, pqk, rbf, poly)")->delimiter(',');
    sweep->add_option("--layers", sweep_layers, "encoding layers L");
    sweep->add_option("--gamma", sweep_gamma, "PQK outer length-scale");
    sweep->add_option("--poly-order", sweep_poly_order, "polynomial truncation order t");
    sweep->add_option("--c-grid", sweep_cgrid, "bandwidths: lo:hi:count (log) or comma list");
    sweep->add_option("--reg-grid", sweep_reg, "SVM C values")->delimiter(',');
    sweep->add_option("--seeds", sweep_seeds, "split seeds")->delimiter(',');
    sweep->add_option("--train-fraction", sweep_train_fraction, "train fraction of the split");
    sweep->add_option("--synth-samples", sweep_samples, "synthetic dataset size");
    sweep->add_option("--synth-ambient-dim", sweep_ambient, "hidden-manifold ambient dimension");
    sweep->add_option("--synth-manifold-dim", sweep_manifold, "hidden-manifold latent dimension");
    sweep->add_option("--synth-data-seed", sweep_data_seed, "synthetic dataset draw seed");
    sweep->add_flag("--no-standardize", sweep_no_standardize, "skip mean removal");
    sweep->add_flag("--no-pca", sweep_no_pca, "skip the PCA projection");
    sweep->add_flag("--fit-on-full", sweep_fit_on_full,
                    "fit standardization/PCA on the full set instead of the train fold");
    sweep->add_option("--param-seed", sweep_param_seed, "circuit parameter seed");
    sweep->add_option("--output", sweep_output, "output directory");

    // ---- analytic --------------------------------------------------------
    auto* analytic = app.add_subcommand(
        "analytic", "closed-form model vs sampled curves for the separable-R_X kernel");
    std::vector<int> an_dims{4};
    std::vector<int> an_layers{2};
    std::size_t an_samples = 720;
    std::uint64_t an_seed = 1;
    std::string an_cgrid, an_output = "qkband-out";
    analytic->add_option("--dims", an_dims, "dimensions n")->delimiter(',');
    analytic->add_option("--layers", an_layers, "layer counts L")->delimiter(',');
    analytic->add_option("--samples", an_samples, "uniform sample size N");
    analytic->add_option("--seed", an_seed, "sample seed");
    analytic->add_option("--c-grid", an_cgrid, "bandwidths: lo:hi:count (log) or comma list");
    analytic->add_option("--output", an_output, "output directory");

    // ---- plot ------------------------------------------------------------
    auto* plot = app.add_subcommand("plot", "render SVG panels from a CSV produced by this tool");
    std::string plot_input, plot_kind = "regimes-vs-c", plot_output = "qkband-out";
    plot->add_option("--input", plot_input, "input CSV")->required();
    plot->add_option("--kind", plot_kind, "regimes-vs-c, quantities-vs-n, or analytic-overlay");
    plot->add_option("--output", plot_output, "output directory");

    // ---- gram-export -----------------------------------------------------
    auto* gram_export = app.add_subcommand("gram-export", "write one Gram matrix as CSV");
    std::string ge_dataset, ge_label, ge_kernel = "rbf", ge_circuit = "separable_rx";
    std::string ge_output = "gram.csv";
    double ge_bandwidth = 1.0, ge_gamma = 1.0;
    int ge_layers = 2, ge_poly_order = 2, ge_dim = 0;
    std::uint64_t ge_param_seed = 1, ge_data_seed = 42;
    std::size_t ge_samples = 400;
    int ge_ambient = 6, ge_manifold = 3;
    gram_export->add_option("--dataset", ge_dataset, "CSV path or synthetic source")->required();
    gram_export->add_option("--label-column", ge_label, "label column to drop from features");
    gram_export->add_option("--kernel", ge_kernel, "fqk, pqk, rbf, or poly");
    gram_export->add_option("--circuit", ge_circuit, "encoding circuit for fqk/pqk");
    gram_export->add_option("--bandwidth", ge_bandwidth, "bandwidth c");
    gram_export->add_option("--gamma", ge_gamma, "PQK outer length-scale");
    gram_export->add_option("--layers", ge_layers, "encoding layers L");
    gram_export->add_option("--poly-order", ge_poly_order, "polynomial truncation order");
    gram_export->add_option("--param-seed", ge_param_seed, "circuit parameter seed");
    gram_export->add_option("--dim", ge_dim,
                            "standardize + project to this dimension before the kernel "
                            "(0 keeps the raw features)");
    gram_export->add_option("--synth-samples", ge_samples, "synthetic dataset size");
    gram_export->add_option("--synth-ambient-dim", ge_ambient, "hidden-manifold ambient dim");
    gram_export->add_option("--synth-manifold-dim", ge_manifold, "hidden-manifold latent dim");
    gram_export->add_option("--synth-data-seed", ge_data_seed, "synthetic draw seed");
    gram_export->add_option("--output", ge_output, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            qkband::ExperimentConfig config;
            if (!sweep_config_path.empty())
                config = qkband::config_from_json(read_file(sweep_config_path));
            if (sweep->count("--dataset")) config.dataset = sweep_dataset;
            if (sweep->count("--label-column")) config.label_column = sweep_label;
            if (sweep->count("--dims")) config.dimensions = sweep_dims;
            if (sweep->count("--circuits")) {
                config.circuits.clear();
                for (const auto& name : sweep_circuits)
                    config.circuits.push_back(qkband::parse_family(name));
            }
            if (sweep->count("--kernels")) {
                config.kernels.clear();
                for (const auto& name : sweep_kernels)
                    config.kernels.push_back(qkband::parse_kernel(name));
            }
            if (sweep->count("--layers")) config.layers = sweep_layers;
            if (sweep->count("--gamma")) config.gamma = sweep_gamma;
            if (sweep->count("--poly-order")) config.poly_order = sweep_poly_order;
            if (sweep->count("--c-grid")) config.bandwidth_grid = parse_grid(sweep_cgrid);
            if (sweep->count("--reg-grid")) config.regularization_grid = sweep_reg;
            if (sweep->count("--seeds")) config.seeds = sweep_seeds;
            if (sweep->count("--train-fraction")) config.train_fraction = sweep_train_fraction;
            if (sweep->count("--synth-samples")) config.synth_samples = sweep_samples;
            if (sweep->count("--synth-ambient-dim")) config.synth_ambient_dim = sweep_ambient;
            if (sweep->count("--synth-manifold-dim")) config.synth_manifold_dim = sweep_manifold;
            if (sweep->count("--synth-data-seed")) config.synth_data_seed = sweep_data_seed;
            if (sweep_no_standardize) config.standardize = false;
            if (sweep_no_pca) config.pca = false;
            if (sweep_fit_on_full) config.fit_on_full = true;
            if (sweep->count("--param-seed")) config.param_seed = sweep_param_seed;
            if (sweep->count("--output")) config.output_dir = sweep_output;

            const qkband::SweepOutcome outcome = qkband::run_sweep(config);
            std::cout << "sweep rows: " << outcome.n_rows << "\n";
            std::cout << "wrote " << outcome.sweep_csv << "\n";
            if (!outcome.optima_csv.empty()) std::cout << "wrote " << outcome.optima_csv << "\n";
            std::cout << "wrote " << outcome.summary_csv << "\n";
            std::cout << "wrote " << outcome.config_json << "\n";
            if (!outcome.all_cells_ok) {
                std::cerr << "some cells failed; see flagged rows in the sweep CSV\n";
                return 1;
            }
            return 0;
        }

        if (analytic->parsed()) {
            const std::vector<double> grid = analytic->count("--c-grid")
                                                 ? parse_grid(an_cgrid)
                                                 : qkband::default_bandwidth_grid();
            std::filesystem::create_directories(an_output);
            const std::string out_csv =
                (std::filesystem::path(an_output) / "analytic_compare.csv").string();
            qkband::run_analytic_compare(an_dims, an_layers, an_samples, an_seed, grid, out_csv);
            std::cout << "wrote " << out_csv << "\n";
            return 0;
        }

        if (plot->parsed()) {
#if defined(QKBAND_WITH_PLOTS)
            const auto written =
                qkband::emit_plots(plot_input, qkband::parse_plot_kind(plot_kind), plot_output);
            for (const auto& path : written) std::cout << "wrote " << path << "\n";
            return 0;
#else
            std::cerr << "this build has plot emission disabled (QKBAND_WITH_PLOTS=OFF)\n";
            return 2;
#endif
        }

        if (gram_export->parsed()) {
            std::optional<std::string> label;
            if (gram_export->count("--label-column")) label = ge_label;
            qkband::Dataset data = load_any_dataset(ge_dataset, label, ge_samples, ge_ambient,
                                                    ge_manifold, ge_data_seed,
                                                    ge_dim > 0 ? ge_dim : 4);
            qkband::Matrix features = data.features;
            if (ge_dim > 0) {
                const qkband::Standardizer s = qkband::standardize_fit(features);
                features = s.apply(features);
                const qkband::PcaTransform t =
                    qkband::pca_fit(features, static_cast<std::size_t>(ge_dim));
                features = qkband::pca_apply(t, features);
            }
            qkband::KernelSpec spec;
            spec.kind = qkband::parse_kernel(ge_kernel);
            spec.bandwidth = ge_bandwidth;
            spec.gamma = ge_gamma;
            spec.poly_order = ge_poly_order;
            if (spec.kind == qkband::KernelKind::FQK || spec.kind == qkband::KernelKind::PQK)
                spec.circuit = qkband::make_circuit_spec(qkband::parse_family(ge_circuit),
                                                         static_cast<int>(features.cols()),
                                                         ge_layers, ge_param_seed);
            const qkband::GramMatrix g = qkband::gram(spec, features);
            qkband::write_gram_csv(g, ge_output);
            std::cout << "wrote " << ge_output << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
