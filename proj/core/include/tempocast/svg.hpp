#pragma once

#include <string>

#include "tempocast/csvio.hpp"

namespace tempocast {

/// Self-contained SVG: actual series in one stroke, forecast in another,
/// optional translucent quantile band. Presentation only; scores never come
/// from this path.
void write_forecast_svg(const std::string& path, const ForecastColumns& cols,
                        const std::string& title);

}  // namespace tempocast
