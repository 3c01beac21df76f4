#include "tempocast/forecast.hpp"

#include <algorithm>

#include "tempocast/error.hpp"

namespace tempocast {

StitchedForecast predict_stitched(const Model& model, const TimeSeries& history_scaled,
                                  const CovariateTable& cov, int horizon, const StitchOptions& opts) {
    if (horizon < 1) throw ContractError("predict_stitched: horizon must be positive");
    const int k = model.input_len(), n = model.output_len(), c = model.covariate_count();
    if (history_scaled.size() < static_cast<std::size_t>(k))
        throw ContractError("predict_stitched: history shorter than the lookback window");
    if (static_cast<int>(cov.count()) != c)
        throw ContractError("predict_stitched: covariate table has " + std::to_string(cov.count()) +
                            " channels, model expects " + std::to_string(c));
    if (diff_days(cov.start, history_scaled.start) != 0)
        throw ContractError("predict_stitched: covariate table must start with the history");
    if (cov.length() < history_scaled.size() + static_cast<std::size_t>(horizon))
        throw ContractError("predict_stitched: missing future covariates; table covers " +
                            std::to_string(cov.length()) + " days, need " +
                            std::to_string(history_scaled.size() + static_cast<std::size_t>(horizon)));
    if (opts.rolling && !opts.truth_scaled)
        throw ContractError("predict_stitched: rolling mode needs the true series");

    std::vector<double> working = history_scaled.values;
    const std::size_t base = working.size();
    StitchedForecast sf;

    while (static_cast<int>(sf.point.size()) < horizon) {
        const std::size_t t = working.size() - 1;  // last known index
        WindowBatch wb;
        wb.batch = 1;
        wb.k = k;
        wb.n = n;
        wb.c = c;
        wb.past.resize(static_cast<std::size_t>(k) * (1 + c));
        wb.future_cov.resize(static_cast<std::size_t>(n) * c);
        wb.targets.assign(static_cast<std::size_t>(n), 0.0);
        const std::size_t past_begin = t + 1 - static_cast<std::size_t>(k);
        for (int s = 0; s < k; ++s) {
            double* row = wb.past.data() + static_cast<std::size_t>(s) * (1 + c);
            row[0] = working[past_begin + static_cast<std::size_t>(s)];
            for (int ch = 0; ch < c; ++ch)
                row[1 + ch] = cov.at(static_cast<std::size_t>(ch), past_begin + static_cast<std::size_t>(s));
        }
        for (int s = 0; s < n; ++s)
            for (int ch = 0; ch < c; ++ch)
                wb.future_cov[static_cast<std::size_t>(s) * c + ch] =
                    cov.at(static_cast<std::size_t>(ch), t + 1 + static_cast<std::size_t>(s));

        ChunkForecast cf = model.predict_chunk(wb);
        ++sf.model_calls;
        if (cf.trace) sf.traces.push_back(cf.trace);
        if (sf.quantile_levels.empty() && !cf.quantile_levels.empty()) {
            sf.quantile_levels = cf.quantile_levels;
            sf.quantiles.assign(cf.quantile_levels.size(), {});
        }
        for (std::size_t q = 0; q < cf.quantiles.size(); ++q)
            sf.quantiles[q].insert(sf.quantiles[q].end(), cf.quantiles[q].begin(), cf.quantiles[q].end());
        sf.point.insert(sf.point.end(), cf.point.begin(), cf.point.end());

        // extend the working series for the next chunk's lookback
        for (int s = 0; s < n; ++s) {
            const std::size_t produced = working.size() - base;
            double next = cf.point[static_cast<std::size_t>(s)];
            if (opts.rolling && produced < opts.truth_scaled->size())
                next = (*opts.truth_scaled)[produced];
            working.push_back(next);
        }
    }

    sf.point.resize(static_cast<std::size_t>(horizon));
    for (auto& band : sf.quantiles) band.resize(static_cast<std::size_t>(horizon));
    return sf;
}

}  // namespace tempocast
