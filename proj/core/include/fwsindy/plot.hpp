#pragma once

#include <string>
#include <vector>

#include "fwsindy/harness.hpp"

namespace fwsindy {

enum class PlotMetric { CoefficientError, TruePositiveRatio };

/// Renders one metric of a summary as a standalone SVG: log-x noise level,
/// one median polyline plus interquartile band per method. Deterministic for
/// a fixed input. Throws std::invalid_argument on an empty summary.
std::string plot_summary_svg(const std::vector<SummaryRow>& summary,
                             PlotMetric metric);

}  // namespace fwsindy
