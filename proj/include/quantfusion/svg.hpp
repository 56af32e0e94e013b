#pragma once

#include "quantfusion/metrics.hpp"

#include <string>

namespace qf {

/// Renders the equity curve and its benchmark as two polylines with
/// labeled axes and a small legend. Self-contained SVG, no dependencies.
std::string equity_svg(const EquityCurve& curve);

void write_equity_svg(const std::string& path, const EquityCurve& curve);

} // namespace qf
