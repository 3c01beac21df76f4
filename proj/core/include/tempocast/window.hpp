#pragma once

#include <cstddef>
#include <vector>

#include "tempocast/timeseries.hpp"

namespace tempocast {

/// One materialized batch of supervised slices. For a window anchored at time
/// t the past block covers (t-k+1 .. t) with target history plus covariate
/// history, the future block covers (t+1 .. t+n) with covariates only, and
/// targets are the observations at (t+1 .. t+n).
struct WindowBatch {
    int batch = 0;
    int k = 0;  // lookback length
    int n = 0;  // forecast horizon
    int c = 0;  // covariate channels

    std::vector<double> past;        // [batch, k, 1+c]; channel 0 is the target
    std::vector<double> future_cov;  // [batch, n, c]
    std::vector<double> targets;     // [batch, n]
};

/// Stream of training windows cut from a (scaled) series and its aligned
/// covariate table. Windows never cross the end of the series.
class WindowSet {
public:
    WindowSet(const TimeSeries& series, const CovariateTable& cov, int k, int n, int stride = 1);

    std::size_t count() const { return anchors_.size(); }
    int lookback() const { return k_; }
    int horizon() const { return n_; }
    int covariates() const { return c_; }

    /// Materializes the windows with the given indices (0 .. count()-1).
    WindowBatch gather(const std::vector<std::size_t>& indices) const;
    WindowBatch single(std::size_t index) const;

private:
    const std::vector<double>& values_;
    const CovariateTable& cov_;
    int k_, n_, c_;
    std::vector<std::size_t> anchors_;  // index of the last past observation
};

/// Validates lengths and returns the stream; series shorter than k+n is a
/// contract error naming the required minimum.
WindowSet make_windows(const TimeSeries& series, const CovariateTable& cov, int k, int n, int stride = 1);

}  // namespace tempocast
