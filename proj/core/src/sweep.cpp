#include "qkband/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qkband/analytic.hpp"
#include "qkband/dataset.hpp"
#include "qkband/metrics.hpp"
#include "qkband/parallel.hpp"
#include "qkband/svm.hpp"

namespace qkband {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kSweepHeader =
    "dataset,circuit,kernel,n,seed,c,C,lambda,status,roc_auc_test,variance_population,"
    "variance_off_diagonal,mean_entry,mean_sq_entry,expressivity_sq,eta_max,gram_trace,"
    "g_vs_rbf,g_vs_poly,f_vs_rbf,f_vs_poly,svm_converged,note";

struct Cell {
    std::optional<CircuitFamily> circuit;
    KernelKind kernel;
};

std::vector<Cell> cell_list(const ExperimentConfig& config) {
    std::vector<Cell> cells;
    for (KernelKind kind : config.kernels) {
        if (kind == KernelKind::FQK || kind == KernelKind::PQK) {
            for (CircuitFamily fam : config.circuits) cells.push_back({fam, kind});
        } else {
            cells.push_back({std::nullopt, kind});
        }
    }
    return cells;
}

struct StagedData {
    Matrix train;
    Matrix test;
    std::vector<int> y_train;
    std::vector<int> y_test;
    bool labeled = false;
};

StagedData stage_data(const ExperimentConfig& config, const Dataset& source, int n,
                      std::uint64_t seed) {
    StagedData staged;
    Matrix train_raw, test_raw;
    if (source.has_labels()) {
        staged.labeled = true;
        const SplitResult folds = split(source, config.train_fraction, seed);
        train_raw = folds.train.features;
        test_raw = folds.test.features;
        staged.y_train = folds.train.labels;
        staged.y_test = folds.test.labels;
    } else {
        train_raw = source.features;
        test_raw = Matrix(0, source.features.cols());
    }

    const Matrix& fit_source = config.fit_on_full ? source.features : train_raw;
    Matrix train = train_raw, test = test_raw;
    if (config.standardize) {
        const Standardizer s = standardize_fit(fit_source);
        train = s.apply(train);
        if (test.rows() > 0) test = s.apply(test);
    }
    if (config.pca) {
        Matrix fit_std = config.standardize ? standardize_fit(fit_source).apply(fit_source)
                                            : fit_source;
        const PcaTransform t = pca_fit(fit_std, static_cast<std::size_t>(n));
        train = pca_apply(t, train);
        if (test.rows() > 0) test = pca_apply(t, test);
    } else if (train.cols() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("pca disabled but data dimension differs from requested n");
    }
    staged.train = std::move(train);
    staged.test = std::move(test);
    return staged;
}

KernelSpec cell_spec(const ExperimentConfig& config, const Cell& cell, int n, double c) {
    KernelSpec spec;
    spec.kind = cell.kernel;
    spec.gamma = config.gamma;
    spec.bandwidth = c;
    spec.poly_order = config.poly_order;
    if (cell.circuit)
        spec.circuit = make_circuit_spec(*cell.circuit, n, config.layers, config.param_seed);
    return spec;
}

struct OptimumTracker {
    double best_auc = -1.0;
    double c_star = kNaN;
    double reg_star = kNaN;
};

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
    if (count < 2) throw std::invalid_argument("log_grid: need at least two points");
    std::vector<double> grid(count);
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) /
                                     static_cast<double>(count - 1));
    return grid;
}

std::vector<double> default_bandwidth_grid() { return log_grid(1e-3, std::pow(10.0, 1.5), 40); }

ExperimentConfig config_from_json(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig config;
    for (const auto& [key, value] : j.items()) {
        if (key == "dataset") config.dataset = value.get<std::string>();
        else if (key == "label_column") {
            if (!value.is_null()) config.label_column = value.get<std::string>();
        } else if (key == "dimensions") config.dimensions = value.get<std::vector<int>>();
        else if (key == "circuits") {
            config.circuits.clear();
            for (const auto& name : value) config.circuits.push_back(parse_family(name));
        } else if (key == "kernels") {
            config.kernels.clear();
            for (const auto& name : value) config.kernels.push_back(parse_kernel(name));
        } else if (key == "layers") config.layers = value.get<int>();
        else if (key == "gamma") config.gamma = value.get<double>();
        else if (key == "poly_order") config.poly_order = value.get<int>();
        else if (key == "bandwidth_grid") {
            if (value.is_object()) {
                config.bandwidth_grid = log_grid(value.at("lo").get<double>(),
                                                 value.at("hi").get<double>(),
                                                 value.at("count").get<std::size_t>());
            } else {
                config.bandwidth_grid = value.get<std::vector<double>>();
            }
        } else if (key == "regularization_grid")
            config.regularization_grid = value.get<std::vector<double>>();
        else if (key == "seeds") config.seeds = value.get<std::vector<std::uint64_t>>();
        else if (key == "train_fraction") config.train_fraction = value.get<double>();
        else if (key == "synth_samples") config.synth_samples = value.get<std::size_t>();
        else if (key == "synth_ambient_dim") config.synth_ambient_dim = value.get<int>();
        else if (key == "synth_manifold_dim") config.synth_manifold_dim = value.get<int>();
        else if (key == "synth_data_seed") config.synth_data_seed = value.get<std::uint64_t>();
        else if (key == "standardize") config.standardize = value.get<bool>();
        else if (key == "pca") config.pca = value.get<bool>();
        else if (key == "fit_on_full") config.fit_on_full = value.get<bool>();
        else if (key == "param_seed") config.param_seed = value.get<std::uint64_t>();
        else if (key == "output_dir") config.output_dir = value.get<std::string>();
        else throw std::invalid_argument("unknown config key: " + key);
    }
    if (config.bandwidth_grid.empty() || config.regularization_grid.empty() ||
        config.seeds.empty() || config.dimensions.empty())
        throw std::invalid_argument("config grids must be non-empty");
    for (double c : config.bandwidth_grid)
        if (!(c > 0.0)) throw std::invalid_argument("bandwidths must be > 0");
    return config;
}

std::string config_to_json(const ExperimentConfig& config) {
    nlohmann::json j;
    j["dataset"] = config.dataset;
    if (config.label_column) j["label_column"] = *config.label_column;
    j["dimensions"] = config.dimensions;
    {
        std::vector<std::string> names;
        for (CircuitFamily f : config.circuits) names.emplace_back(family_name(f));
        j["circuits"] = names;
    }
    {
        std::vector<std::string> names;
        for (KernelKind k : config.kernels) names.emplace_back(kernel_name(k));
        j["kernels"] = names;
    }
    j["layers"] = config.layers;
    j["gamma"] = config.gamma;
    j["poly_order"] = config.poly_order;
    j["bandwidth_grid"] = config.bandwidth_grid;
    j["regularization_grid"] = config.regularization_grid;
    j["seeds"] = config.seeds;
    j["train_fraction"] = config.train_fraction;
    j["synth_samples"] = config.synth_samples;
    j["synth_ambient_dim"] = config.synth_ambient_dim;
    j["synth_manifold_dim"] = config.synth_manifold_dim;
    j["synth_data_seed"] = config.synth_data_seed;
    j["standardize"] = config.standardize;
    j["pca"] = config.pca;
    j["fit_on_full"] = config.fit_on_full;
    j["param_seed"] = config.param_seed;
    j["output_dir"] = config.output_dir;
    return j.dump(2);
}

SweepOutcome run_sweep(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);

    const bool uniform_source = config.dataset == "synthetic:uniform";
    Dataset source;
    if (config.dataset == "synthetic:hidden_manifold") {
        source = synth_hidden_manifold(config.synth_samples, config.synth_ambient_dim,
                                       config.synth_manifold_dim, config.synth_data_seed);
    } else if (!uniform_source) {
        source = load_csv(config.dataset, config.label_column);
    }

    const std::vector<Cell> cells = cell_list(config);
    bool all_ok = true;
    std::vector<std::string> rows;
    std::map<std::string, OptimumTracker> optima;     // key -> best cell
    std::vector<std::string> optima_order;

    for (std::uint64_t seed : config.seeds) {
        for (int n : config.dimensions) {
            if (uniform_source) source = synth_uniform(config.synth_samples, n, seed);
            StagedData staged;
            std::string stage_error;
            try {
                staged = stage_data(config, source, n, seed);
            } catch (const std::exception& e) {
                stage_error = e.what();
            }

            for (double c : config.bandwidth_grid) {
                // References shared by every cell at this bandwidth.
                GramMatrix ref_rbf, ref_poly;
                std::string ref_error = stage_error;
                if (ref_error.empty()) {
                    try {
                        KernelSpec rbf_spec{KernelKind::RBF, std::nullopt, config.gamma, c,
                                            config.poly_order};
                        KernelSpec poly_spec{KernelKind::Poly, std::nullopt, config.gamma, c,
                                             config.poly_order};
                        ref_rbf = gram(rbf_spec, staged.train);
                        ref_poly = gram(poly_spec, staged.train);
                    } catch (const std::exception& e) {
                        ref_error = e.what();
                    }
                }

                std::vector<std::vector<std::string>> cell_rows(cells.size());
                std::vector<int> cell_ok(cells.size(), 1);
                parallel_for(0, cells.size(), [&](std::size_t ci) {
                    const Cell& cell = cells[ci];
                    const std::string circuit_name =
                        cell.circuit ? family_name(*cell.circuit) : "-";
                    const std::string prefix = config.dataset + "," + circuit_name + "," +
                                               kernel_name(cell.kernel) + "," +
                                               std::to_string(n) + "," + std::to_string(seed) +
                                               "," + fmt(c) + ",";
                    auto emit_error_rows = [&](const std::string& message) {
                        std::string note = message;
                        for (char& ch : note)
                            if (ch == ',' || ch == '\n') ch = ';';
                        for (double reg : config.regularization_grid) {
                            std::string row = prefix + fmt(reg) + "," + fmt(1.0 / (2.0 * reg)) +
                                              ",error";
                            for (int f = 0; f < 13; ++f) row += ",nan";
                            row += "," + (note.empty() ? "-" : note);
                            cell_rows[ci].push_back(std::move(row));
                        }
                        cell_ok[ci] = 0;
                    };
                    if (!ref_error.empty()) {
                        emit_error_rows(ref_error);
                        return;
                    }
                    try {
                        const KernelSpec spec = cell_spec(config, cell, n, c);
                        GramMatrix train_k;
                        if (cell.kernel == KernelKind::RBF) train_k = ref_rbf;
                        else if (cell.kernel == KernelKind::Poly) train_k = ref_poly;
                        else train_k = gram(spec, staged.train);

                        const MetricReport report = compute_metrics(
                            train_k.values,
                            cell.kernel == KernelKind::FQK ? std::optional<int>(n) : std::nullopt);
                        const double gram_trace = trace(train_k.values);
                        const GeometricDifference gd_rbf(ref_rbf.values, train_k.values);
                        const GeometricDifference gd_poly(ref_poly.values, train_k.values);
                        const double f_rbf = frobenius_distance(ref_rbf.values, train_k.values);
                        const double f_poly = frobenius_distance(ref_poly.values, train_k.values);

                        Matrix cross;
                        if (staged.labeled) cross = cross_gram(spec, staged.test, staged.train);

                        for (double reg : config.regularization_grid) {
                            const double lambda = 1.0 / (2.0 * reg);
                            double auc = kNaN;
                            double converged = kNaN;
                            if (staged.labeled) {
                                const SvmModel model =
                                    svm_fit(LabeledSet{train_k.values, staged.y_train}, reg);
                                const std::vector<double> scores = decision_values(model, cross);
                                auc = roc_auc(scores, staged.y_test);
                                converged = model.converged ? 1.0 : 0.0;
                            }
                            std::string row = prefix + fmt(reg) + "," + fmt(lambda) + ",ok," +
                                              fmt(auc) + "," + fmt(report.variance_population) +
                                              "," + fmt(report.variance_off_diagonal) + "," +
                                              fmt(report.mean) + "," + fmt(report.mean_sq) + "," +
                                              fmt(report.expressivity_sq) + "," +
                                              fmt(report.eta_max) + "," + fmt(gram_trace) + "," +
                                              fmt(gd_rbf.at(lambda)) + "," +
                                              fmt(gd_poly.at(lambda)) + "," + fmt(f_rbf) + "," +
                                              fmt(f_poly) + "," + fmt(converged) + ",-";
                            cell_rows[ci].push_back(std::move(row));
                        }
                    } catch (const std::exception& e) {
                        cell_rows[ci].clear();
                        emit_error_rows(e.what());
                    }
                });

                for (std::size_t ci = 0; ci < cells.size(); ++ci) {
                    if (!cell_ok[ci]) all_ok = false;
                    for (auto& row : cell_rows[ci]) rows.push_back(std::move(row));
                }
            }
        }
    }

    // Per-seed optima from the finished rows (same values as the CSV).
    if (!rows.empty()) {
        for (const std::string& row : rows) {
            std::vector<std::string> f;
            std::stringstream ss(row);
            std::string cell;
            while (std::getline(ss, cell, ',')) f.push_back(cell);
            if (f.size() < 10 || f[8] != "ok") continue;
            const double auc = std::strtod(f[9].c_str(), nullptr);
            if (std::isnan(auc)) continue;
            const std::string key = f[0] + "," + f[1] + "," + f[2] + "," + f[3] + "," + f[4];
            auto it = optima.find(key);
            if (it == optima.end()) {
                optima_order.push_back(key);
                it = optima.emplace(key, OptimumTracker{}).first;
            }
            if (auc > it->second.best_auc) {
                it->second.best_auc = auc;
                it->second.c_star = std::strtod(f[5].c_str(), nullptr);
                it->second.reg_star = std::strtod(f[6].c_str(), nullptr);
            }
        }
    }

    SweepOutcome outcome;
    outcome.all_cells_ok = all_ok;
    outcome.n_rows = rows.size();
    outcome.sweep_csv = (fs::path(config.output_dir) / "sweep.csv").string();
    outcome.summary_csv = (fs::path(config.output_dir) / "summary.csv").string();
    outcome.config_json = (fs::path(config.output_dir) / "config.json").string();

    {
        std::ofstream out(outcome.sweep_csv);
        if (!out) throw std::runtime_error("cannot write " + outcome.sweep_csv);
        out << "# qkband-sweep-v1\n" << kSweepHeader << "\n";
        for (const std::string& row : rows) out << row << "\n";
    }
    if (!optima.empty()) {
        outcome.optima_csv = (fs::path(config.output_dir) / "optima.csv").string();
        std::ofstream out(outcome.optima_csv);
        if (!out) throw std::runtime_error("cannot write " + outcome.optima_csv);
        out << "# qkband-optima-v1\n";
        out << "dataset,circuit,kernel,n,seed,c_star,C_star,roc_auc_test\n";
        for (const std::string& key : optima_order) {
            const OptimumTracker& t = optima.at(key);
            out << key << "," << fmt(t.c_star) << "," << fmt(t.reg_star) << ","
                << fmt(t.best_auc) << "\n";
        }
    }
    aggregate_sweep_csv(outcome.sweep_csv, outcome.summary_csv);
    {
        std::ofstream out(outcome.config_json);
        if (!out) throw std::runtime_error("cannot write " + outcome.config_json);
        out << config_to_json(config) << "\n";
    }
    return outcome;
}

void aggregate_sweep_csv(const std::string& sweep_csv_path, const std::string& out_path) {
    std::ifstream in(sweep_csv_path);
    if (!in) throw std::invalid_argument("cannot open sweep csv: " + sweep_csv_path);

    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> records;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (line.back() == ',') f.emplace_back();
        if (header.empty()) header = std::move(f);
        else records.push_back(std::move(f));
    }
    if (header.empty()) throw std::invalid_argument("sweep csv has no header: " + sweep_csv_path);

    auto col = [&header, &sweep_csv_path](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::invalid_argument("column '" + name + "' missing in " + sweep_csv_path);
    };
    const std::size_t c_dataset = col("dataset"), c_circuit = col("circuit"),
                      c_kernel = col("kernel"), c_n = col("n"), c_c = col("c"), c_reg = col("C"),
                      c_status = col("status");
    const std::vector<std::string> metrics_cols = {
        "roc_auc_test", "variance_population", "variance_off_diagonal", "mean_entry",
        "mean_sq_entry", "expressivity_sq", "eta_max", "g_vs_rbf", "g_vs_poly",
        "f_vs_rbf", "f_vs_poly"};
    std::vector<std::size_t> midx;
    for (const auto& name : metrics_cols) midx.push_back(col(name));

    std::vector<std::string> group_order;
    std::map<std::string, std::vector<std::vector<double>>> groups;
    for (const auto& rec : records) {
        if (rec.size() < header.size() || rec[c_status] != "ok") continue;
        const std::string key = rec[c_dataset] + "," + rec[c_circuit] + "," + rec[c_kernel] +
                                "," + rec[c_n] + "," + rec[c_c] + "," + rec[c_reg];
        auto it = groups.find(key);
        if (it == groups.end()) {
            group_order.push_back(key);
            it = groups.emplace(key, std::vector<std::vector<double>>(midx.size())).first;
        }
        for (std::size_t m = 0; m < midx.size(); ++m) {
            const double v = std::strtod(rec[midx[m]].c_str(), nullptr);
            if (!std::isnan(v)) it->second[m].push_back(v);
        }
    }

    auto mean_of = [](const std::vector<double>& v) {
        if (v.empty()) return kNaN;
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto median_of = [](std::vector<double> v) {
        if (v.empty()) return kNaN;
        std::sort(v.begin(), v.end());
        const std::size_t h = v.size() / 2;
        return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    };

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << "# qkband-summary-v1\n";
    out << "dataset,circuit,kernel,n,c,C,n_rows";
    for (const auto& name : metrics_cols) out << ",mean_" << name << ",median_" << name;
    out << "\n";
    for (const std::string& key : group_order) {
        const auto& cols = groups.at(key);
        std::size_t n_rows = 0;
        for (const auto& v : cols) n_rows = std::max(n_rows, v.size());
        out << key << "," << n_rows;
        for (std::size_t m = 0; m < cols.size(); ++m)
            out << "," << fmt(mean_of(cols[m])) << "," << fmt(median_of(cols[m]));
        out << "\n";
    }
}

void run_analytic_compare(const std::vector<int>& dimensions, const std::vector<int>& layer_counts,
                          std::size_t n_samples, std::uint64_t seed,
                          const std::vector<double>& bandwidth_grid, const std::string& out_csv) {
    if (dimensions.empty() || layer_counts.empty() || bandwidth_grid.empty())
        throw std::invalid_argument("run_analytic_compare: empty grids");

    struct Row {
        int n, layers;
        double c;
        double var_a, var_small, var_large, eta_a, mean_sq_a, expr_a;
        McMetrics mc;
    };
    std::vector<Row> table;
    for (int n : dimensions)
        for (int layers : layer_counts)
            for (double c : bandwidth_grid) table.push_back({n, layers, c, 0, 0, 0, 0, 0, 0, {}});

    parallel_for(0, table.size(), [&](std::size_t i) {
        Row& r = table[i];
        const AnalyticParams p{r.n, r.layers, r.c};
        r.var_a = var_uniform(p);
        r.var_small = var_limit_small_c(p);
        r.var_large = var_limit_large_c(r.n);
        r.eta_a = eta_max_analytic(p);
        r.mean_sq_a = expressivity_expectation(p);
        r.expr_a = r.mean_sq_a - haar_moment_constant(r.n);
        r.mc = monte_carlo_check(p, n_samples, seed);
    });

    std::ofstream out(out_csv);
    if (!out) throw std::runtime_error("cannot write " + out_csv);
    out << "# qkband-analytic-v1\n";
    out << "n,layers,c,var_analytic,var_small_c_limit,var_large_c_limit,eta_max_analytic,"
           "mean_sq_analytic,expressivity_sq_analytic,var_mc,eta_max_mc,mean_sq_mc,"
           "expressivity_sq_mc\n";
    for (const Row& r : table) {
        out << r.n << "," << r.layers << "," << fmt(r.c) << "," << fmt(r.var_a) << ","
            << fmt(r.var_small) << "," << fmt(r.var_large) << "," << fmt(r.eta_a) << ","
            << fmt(r.mean_sq_a) << "," << fmt(r.expr_a) << "," << fmt(r.mc.variance) << ","
            << fmt(r.mc.eta_max) << "," << fmt(r.mc.mean_sq) << ","
            << fmt(r.mc.expressivity_sq) << "\n";
    }
}

}  // namespace qkband
