#pragma once

#include <vector>

namespace tempocast {

/// Repeats the last K training values across the horizon:
/// forecast[h] = train[T - K + (h mod K)]. K = 1 repeats the final value.
std::vector<double> naive_seasonal_forecast(const std::vector<double>& train, int k, int horizon);

/// Extends the line through the first and last training points:
/// forecast[h] = last + (h+1) * (last - first) / (T - 1).
std::vector<double> naive_drift_forecast(const std::vector<double>& train, int horizon);

/// Seasonal shape re-centered onto the drift line:
/// forecast[h] = seasonal[h] + (h+1) * slope.
std::vector<double> naive_combined_forecast(const std::vector<double>& train, int k, int horizon);

}  // namespace tempocast
