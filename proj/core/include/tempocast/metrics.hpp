#pragma once

#include <vector>

namespace tempocast {

/// Mean absolute percentage error, (100/n) * sum |a_i - p_i| / |a_i|.
/// Lengths must match; any actual value of exactly zero is an error.
double mape(const std::vector<double>& actual, const std::vector<double>& predicted);

}  // namespace tempocast
