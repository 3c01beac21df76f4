#pragma once

#include <memory>
#include <vector>

#include "tempocast/model.hpp"
#include "tempocast/timeseries.hpp"

namespace tempocast {

struct StitchOptions {
    /// Re-anchor on true values after every chunk instead of feeding the
    /// model its own predictions. Requires `truth_scaled`.
    bool rolling = false;
    const std::vector<double>* truth_scaled = nullptr;
};

struct StitchedForecast {
    std::vector<double> point;                   // scaled units, exactly `horizon` long
    std::vector<double> quantile_levels;
    std::vector<std::vector<double>> quantiles;  // [level][horizon]
    std::vector<std::shared_ptr<AttentionTrace>> traces;  // one per model call (TFT)
    int model_calls = 0;
};

/// Long-horizon forecast assembled from output_len-sized model calls. The
/// model's own point predictions (median for quantile models) extend the
/// input window between calls; covariates always come from the calendar
/// table, never from predictions. Output trimmed to exactly `horizon`.
StitchedForecast predict_stitched(const Model& model, const TimeSeries& history_scaled,
                                  const CovariateTable& cov, int horizon,
                                  const StitchOptions& opts = {});

}  // namespace tempocast
