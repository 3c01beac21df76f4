#pragma once

#include <cstdint>

#include "tempocast/timeseries.hpp"

namespace tempocast {

/// Daily demand-like series:
///   y(t) = 1000 + 0.05 t + 120 sin(2 pi t / 365.25) + 60 sin(2 pi t / 7) + N(0, sigma)
/// with t = 0 .. days-1.
TimeSeries synth_series(int days, std::uint64_t seed = 7, double noise_sigma = 20.0,
                        Date start = Date{2014, 1, 1});

}  // namespace tempocast
