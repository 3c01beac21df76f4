#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tempocast/date.hpp"
#include "tempocast/model.hpp"

namespace tempocast {

/// One row of the cross-model comparison table.
struct ModelScore {
    std::string name;
    double mape_percent = 0.0;
    double train_seconds = 0.0;
    double predict_seconds = 0.0;
};

/// Stable shortest-ish decimal rendering used by every CSV artifact, so a
/// rerun with identical numbers is byte-identical.
std::string format_double(double v);

/// Columns: model, mape_percent, train_seconds, predict_seconds. With
/// zero_timings the timing columns are written as 0 (reproducible artifacts).
void write_results_csv(const std::string& path, const std::vector<ModelScore>& rows, bool zero_timings);

struct ForecastColumns {
    std::vector<Date> dates;
    std::vector<double> actual_mw;
    std::vector<double> predicted_mw;
    std::vector<double> q10_mw;  // empty when the model has no bands
    std::vector<double> q90_mw;
};

/// date,actual_mw,predicted_mw[,q10_mw,q90_mw]
void write_forecast_csv(const std::string& path, const ForecastColumns& cols);

/// chunk,head,query_pos,key_pos,weight
void write_attention_csv(const std::string& path,
                         const std::vector<std::shared_ptr<AttentionTrace>>& traces);

/// chunk,segment,position,variable,weight
void write_selection_csv(const std::string& path,
                         const std::vector<std::shared_ptr<AttentionTrace>>& traces,
                         const std::vector<std::string>& past_vars,
                         const std::vector<std::string>& future_vars);

}  // namespace tempocast
