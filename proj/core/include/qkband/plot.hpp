#pragma once

#if defined(QKBAND_WITH_PLOTS)

#include <string>
#include <vector>

namespace qkband {

enum class PlotKind { RegimesVsC, QuantitiesVsN, AnalyticOverlay };

PlotKind parse_plot_kind(const std::string& name);

/// Renders SVG panels from a CSV produced by this tool and returns the paths
/// written. RegimesVsC wants a sweep CSV (one panel per metric, one series
/// per kernel/circuit/dimension); QuantitiesVsN wants an optima CSV;
/// AnalyticOverlay wants an analytic-compare CSV and shades the three
/// bandwidth regimes around the variance peak. Missing columns or an empty
/// table raise a schema error.
std::vector<std::string> emit_plots(const std::string& csv_path, PlotKind kind,
                                    const std::string& out_dir);

}  // namespace qkband

#endif  // QKBAND_WITH_PLOTS
