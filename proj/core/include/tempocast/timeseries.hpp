#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempocast/date.hpp"

namespace tempocast {

/// Min/max recorded when a series was scaled to [0,1].
struct ScaleState {
    double min = 0.0;
    double max = 1.0;
};

/// Daily series of scalar observations. Values are megawatts in raw form and
/// dimensionless in [0,1] once `scale` is set.
struct TimeSeries {
    Date start;
    std::vector<double> values;
    std::optional<ScaleState> scale;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return add_days(start, static_cast<long long>(i)); }
    Date last_date() const { return date_at(values.size() - 1); }
};

/// Parses a two-column CSV (header row; date "YYYY-MM-DD", positive demand).
/// Dates must be strictly consecutive days. Errors name the offending row.
TimeSeries load_series(std::istream& in, const std::string& origin = "<stream>");
TimeSeries load_series_file(const std::string& path);

/// Writes the series back out in the same dialect (normalized cache).
void save_series_file(const TimeSeries& s, const std::string& path);

/// v' = (v - min) / (max - min) using the series' own extremes. Requires at
/// least two distinct values.
TimeSeries minmax_fit_transform(const TimeSeries& s);

/// Applies an existing scale (values outside [0,1] are legal here: the state
/// is fit on training data only).
TimeSeries minmax_transform_with(const TimeSeries& s, const ScaleState& st);

/// v = v' * (max - min) + min; requires scale state.
TimeSeries inverse_transform(const TimeSeries& s);
std::vector<double> inverse_transform_values(const std::vector<double>& scaled, const ScaleState& st);

/// Final `test_len` points become the test series, the rest the train series.
/// Both keep their calendar alignment; scaling is the caller's protocol.
std::pair<TimeSeries, TimeSeries> train_test_split(const TimeSeries& s, std::size_t test_len);

/// Calendar channels known arbitrarily far into the future: day-of-week
/// one-hot (Monday first), cyclic month, cyclic day-of-year. 11 channels.
struct CovariateTable {
    Date start;
    std::vector<std::string> names;
    std::vector<std::vector<double>> channels;  // [channel][day]

    std::size_t count() const { return channels.size(); }
    std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
    double at(std::size_t channel, std::size_t day) const { return channels[channel][day]; }
};

/// Channels covering every day from `start` through `through` inclusive.
CovariateTable calendar_covariates(const Date& start, const Date& through);

/// Convenience: channels aligned with the series and extended to cover
/// `extra_days` beyond its last observation.
CovariateTable calendar_covariates(const TimeSeries& s, long long extra_days);

inline constexpr int kCalendarChannels = 11;

}  // namespace tempocast
