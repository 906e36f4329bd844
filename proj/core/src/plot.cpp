#include "qkband/plot.hpp"

#if defined(QKBAND_WITH_PLOTS)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qkband {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::invalid_argument("plot: column '" + name + "' missing from input csv");
    }
};

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("plot: cannot open " + path);
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (t.header.empty()) t.header = std::move(cells);
        else t.rows.push_back(std::move(cells));
    }
    if (t.header.empty() || t.rows.empty())
        throw std::invalid_argument("plot: csv has no data rows: " + path);
    return t;
}

double to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

struct Series {
    std::string label;
    std::string color;
    bool dashed = false;
    std::vector<std::pair<double, double>> points;  // sorted by x by the caller
};

struct Band {
    double x_lo, x_hi;
    std::string fill;
};

struct Panel {
    std::string title, x_label, y_label;
    bool log_x = true, log_y = true;
    std::vector<Series> series;
    std::vector<Band> bands;
};

void render_svg(const Panel& panel, const std::string& path) {
    const double width = 720, height = 460;
    const double ml = 70, mr = 180, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    auto usable = [&](double v, bool log_scale) { return std::isfinite(v) && (!log_scale || v > 0.0); };

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const Series& s : panel.series)
        for (auto [x, y] : s.points) {
            if (!usable(x, panel.log_x) || !usable(y, panel.log_y)) continue;
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (!(x_min < x_max)) { x_min = panel.log_x ? 0.1 : 0.0; x_max = panel.log_x ? 10.0 : 1.0; }
    if (!(y_min < y_max)) { y_min = y_max > 0 ? y_max * 0.5 : 0.1; y_max = y_min * 4.0; }
    if (!panel.log_y) {
        const double pad = 0.05 * (y_max - y_min);
        y_min -= pad;
        y_max += pad;
    }

    auto tx = [&](double x) {
        const double a = panel.log_x ? std::log10(x) : x;
        const double lo = panel.log_x ? std::log10(x_min) : x_min;
        const double hi = panel.log_x ? std::log10(x_max) : x_max;
        return ml + (a - lo) / (hi - lo) * pw;
    };
    auto ty = [&](double y) {
        const double a = panel.log_y ? std::log10(y) : y;
        const double lo = panel.log_y ? std::log10(y_min) : y_min;
        const double hi = panel.log_y ? std::log10(y_max) : y_max;
        return mt + ph - (a - lo) / (hi - lo) * ph;
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("plot: cannot write " + path);
    char buf[160];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const Band& band : panel.bands) {
        const double x0 = tx(std::max(band.x_lo, x_min));
        const double x1 = tx(std::min(band.x_hi, x_max));
        if (!(x1 > x0)) continue;
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"%s\"/>\n",
                      x0, mt, x1 - x0, ph, band.fill.c_str());
        out << buf;
    }

    // Frame and decade ticks.
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"black\"/>\n", ml, mt, pw, ph);
    out << buf;
    auto decade_ticks = [&](double lo, double hi) {
        std::vector<double> ticks;
        for (int e = static_cast<int>(std::floor(std::log10(lo))); e <= std::ceil(std::log10(hi));
             ++e) {
            const double v = std::pow(10.0, e);
            if (v >= lo * 0.999 && v <= hi * 1.001) ticks.push_back(v);
        }
        return ticks;
    };
    if (panel.log_x) {
        for (double v : decade_ticks(x_min, x_max)) {
            const double x = tx(v);
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>"
                          "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">1e%g</text>\n",
                          x, mt, x, mt + ph, x, mt + ph + 18, std::log10(v));
            out << buf;
        }
    }
    if (panel.log_y) {
        for (double v : decade_ticks(y_min, y_max)) {
            const double y = ty(v);
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>"
                          "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">1e%g</text>\n",
                          ml, y, ml + pw, y, ml - 6, y + 4, std::log10(v));
            out << buf;
        }
    } else {
        for (int i = 0; i <= 4; ++i) {
            const double v = y_min + (y_max - y_min) * i / 4.0;
            const double y = ty(v);
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>"
                          "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.3g</text>\n",
                          ml, y, ml + pw, y, ml - 6, y + 4, v);
            out << buf;
        }
    }

    double legend_y = mt + 8;
    for (const Series& s : panel.series) {
        std::string points;
        bool in_segment = false;
        std::string segment;
        auto flush = [&]() {
            if (!segment.empty()) {
                out << "<polyline fill=\"none\" stroke=\"" << s.color << "\""
                    << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"" << segment
                    << "\"/>\n";
                segment.clear();
            }
            in_segment = false;
        };
        for (auto [x, y] : s.points) {
            if (!usable(x, panel.log_x) || !usable(y, panel.log_y)) {
                flush();
                continue;
            }
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", tx(x), ty(y));
            segment += buf;
            in_segment = true;
        }
        flush();
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\"%s/>"
                      "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n",
                      ml + pw + 10, legend_y, ml + pw + 34, legend_y, s.color.c_str(),
                      s.dashed ? " stroke-dasharray=\"6 4\"" : "", ml + pw + 40, legend_y + 4,
                      s.label.c_str());
        out << buf;
        legend_y += 18;
    }

    out << "<text x=\"" << ml << "\" y=\"" << mt - 14 << "\" font-size=\"15\">" << panel.title
        << "</text>\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\">" << panel.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" transform=\"rotate(-90 16 " << mt + ph / 2 << ")\" text-anchor=\"middle\">"
        << panel.y_label << "</text>\n";
    out << "</svg>\n";
}

// Mean of a metric column grouped by (series key, x value).
std::vector<Series> grouped_series(const Table& t, std::size_t key_a, std::size_t key_b,
                                   std::size_t key_c, std::size_t x_col, std::size_t y_col) {
    std::map<std::string, std::map<double, std::pair<double, std::size_t>>> acc;
    std::vector<std::string> order;
    for (const auto& row : t.rows) {
        std::string key = row[key_a];
        if (key_b != static_cast<std::size_t>(-1)) key += "/" + row[key_b];
        if (key_c != static_cast<std::size_t>(-1)) key += " n=" + row[key_c];
        const double x = to_double(row[x_col]);
        const double y = to_double(row[y_col]);
        if (std::isnan(x) || std::isnan(y)) continue;
        if (acc.find(key) == acc.end()) order.push_back(key);
        auto& slot = acc[key][x];
        slot.first += y;
        slot.second += 1;
    }
    std::vector<Series> out;
    std::size_t color = 0;
    for (const std::string& key : order) {
        Series s;
        s.label = key;
        s.color = kPalette[color++ % (sizeof(kPalette) / sizeof(kPalette[0]))];
        for (const auto& [x, sum_count] : acc[key])
            s.points.emplace_back(x, sum_count.first / static_cast<double>(sum_count.second));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

PlotKind parse_plot_kind(const std::string& name) {
    if (name == "regimes-vs-c") return PlotKind::RegimesVsC;
    if (name == "quantities-vs-n") return PlotKind::QuantitiesVsN;
    if (name == "analytic-overlay") return PlotKind::AnalyticOverlay;
    throw std::invalid_argument("unknown plot kind: " + name);
}

std::vector<std::string> emit_plots(const std::string& csv_path, PlotKind kind,
                                    const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const Table t = read_table(csv_path);
    std::vector<std::string> written;

    auto emit = [&](Panel panel, const std::string& name) {
        const std::string path = (fs::path(out_dir) / name).string();
        render_svg(panel, path);
        written.push_back(path);
    };

    switch (kind) {
        case PlotKind::RegimesVsC: {
            const std::size_t kernel = t.col("kernel"), circuit = t.col("circuit"),
                              n = t.col("n"), c = t.col("c");
            const std::pair<const char*, bool> metrics[] = {
                {"variance_population", true}, {"eta_max", true}, {"expressivity_sq", true},
                {"g_vs_rbf", true},            {"g_vs_poly", true}, {"f_vs_rbf", true},
                {"f_vs_poly", true}};
            for (const auto& [metric, logy] : metrics) {
                Panel panel;
                panel.title = std::string(metric) + " vs bandwidth";
                panel.x_label = "bandwidth c";
                panel.y_label = metric;
                panel.log_x = true;
                panel.log_y = logy;
                panel.series = grouped_series(t, kernel, circuit, n, c, t.col(metric));
                emit(std::move(panel), std::string("regimes_vs_c_") + metric + ".svg");
            }
            break;
        }
        case PlotKind::QuantitiesVsN: {
            const std::size_t kernel = t.col("kernel"), circuit = t.col("circuit"),
                              n = t.col("n");
            const std::size_t none = static_cast<std::size_t>(-1);
            Panel auc;
            auc.title = "best test ROC-AUC vs dimension";
            auc.x_label = "n";
            auc.y_label = "roc_auc_test";
            auc.log_x = false;
            auc.log_y = false;
            auc.series = grouped_series(t, kernel, circuit, none, n, t.col("roc_auc_test"));
            emit(std::move(auc), "quantities_vs_n_roc_auc.svg");

            Panel cstar;
            cstar.title = "optimal bandwidth vs dimension";
            cstar.x_label = "n";
            cstar.y_label = "c*";
            cstar.log_x = false;
            cstar.log_y = true;
            cstar.series = grouped_series(t, kernel, circuit, none, n, t.col("c_star"));
            emit(std::move(cstar), "quantities_vs_n_c_star.svg");
            break;
        }
        case PlotKind::AnalyticOverlay: {
            const std::size_t n_col = t.col("n"), l_col = t.col("layers"), c_col = t.col("c");
            // One figure set per (n, layers) block present in the table.
            std::vector<std::pair<std::string, std::string>> blocks;
            for (const auto& row : t.rows) {
                const std::pair<std::string, std::string> key{row[n_col], row[l_col]};
                if (std::find(blocks.begin(), blocks.end(), key) == blocks.end())
                    blocks.push_back(key);
            }
            for (const auto& [n_str, l_str] : blocks) {
                std::vector<std::vector<std::string>> rows;
                for (const auto& row : t.rows)
                    if (row[n_col] == n_str && row[l_col] == l_str) rows.push_back(row);
                std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
                    return to_double(a[c_col]) < to_double(b[c_col]);
                });

                auto curve = [&](const char* col, const char* label, const char* color,
                                 bool dashed) {
                    Series s;
                    s.label = label;
                    s.color = color;
                    s.dashed = dashed;
                    const std::size_t idx = t.col(col);
                    for (const auto& row : rows)
                        s.points.emplace_back(to_double(row[c_col]), to_double(row[idx]));
                    return s;
                };

                // Regime shading around the analytic variance peak.
                double peak_c = kNaN, peak_v = -1.0;
                const std::size_t va = t.col("var_analytic");
                for (const auto& row : rows) {
                    const double v = to_double(row[va]);
                    if (v > peak_v) {
                        peak_v = v;
                        peak_c = to_double(row[c_col]);
                    }
                }
                std::vector<Band> bands;
                if (std::isfinite(peak_c)) {
                    bands.push_back({0.0, peak_c / 8.0, "#e8f0fe"});
                    bands.push_back({peak_c / 8.0, peak_c * 8.0, "#fef3e0"});
                    bands.push_back({peak_c * 8.0, std::numeric_limits<double>::infinity(),
                                     "#fde8e8"});
                }
                const std::string suffix = "_n" + n_str + "_L" + l_str + ".svg";

                Panel var;
                var.title = "variance, n=" + n_str + " L=" + l_str;
                var.x_label = "bandwidth c";
                var.y_label = "Var[K]";
                var.bands = bands;
                var.series = {curve("var_mc", "sampled", kPalette[0], false),
                              curve("var_analytic", "analytic", kPalette[1], true),
                              curve("var_small_c_limit", "small-c limit", kPalette[2], true),
                              curve("var_large_c_limit", "large-c limit", kPalette[3], true)};
                emit(std::move(var), "analytic_overlay_variance" + suffix);

                Panel eta;
                eta.title = "largest eigenvalue, n=" + n_str + " L=" + l_str;
                eta.x_label = "bandwidth c";
                eta.y_label = "eta_max";
                eta.bands = bands;
                eta.series = {curve("eta_max_mc", "sampled", kPalette[0], false),
                              curve("eta_max_analytic", "analytic", kPalette[1], true)};
                emit(std::move(eta), "analytic_overlay_eta_max" + suffix);

                Panel expr;
                expr.title = "squared expressivity, n=" + n_str + " L=" + l_str;
                expr.x_label = "bandwidth c";
                expr.y_label = "eps^2";
                expr.bands = bands;
                expr.series = {curve("expressivity_sq_mc", "sampled", kPalette[0], false),
                               curve("expressivity_sq_analytic", "analytic", kPalette[1], true)};
                emit(std::move(expr), "analytic_overlay_expressivity" + suffix);
            }
            break;
        }
    }
    return written;
}

}  // namespace qkband

#endif  // QKBAND_WITH_PLOTS
