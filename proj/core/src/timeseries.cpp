#include "tempocast/timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tempocast/error.hpp"

namespace tempocast {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string row_msg(const std::string& origin, std::size_t row, const std::string& what) {
    return origin + " row " + std::to_string(row) + ": " + what;
}

}  // namespace

TimeSeries load_series(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) throw DataError(origin + ": empty file (missing header)");
    ++row;  // header consumed
    TimeSeries s;
    Date prev{};
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError(row_msg(origin, row, "expected two comma-separated columns"));
        const std::string date_str = line.substr(0, comma);
        const std::string value_str = line.substr(comma + 1);
        const auto date = parse_iso(date_str);
        if (!date) throw DataError(row_msg(origin, row, "malformed date '" + date_str + "'"));
        double value = 0.0;
        try {
            std::size_t pos = 0;
            value = std::stod(value_str, &pos);
            while (pos < value_str.size() && std::isspace(static_cast<unsigned char>(value_str[pos]))) ++pos;
            if (pos != value_str.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw DataError(row_msg(origin, row, "non-numeric demand '" + value_str + "'"));
        }
        if (!std::isfinite(value) || value <= 0.0)
            throw DataError(row_msg(origin, row, "demand must be positive, got " + value_str));
        if (s.values.empty()) {
            s.start = *date;
        } else {
            const long long gap = diff_days(prev, *date);
            if (gap == 0) throw DataError(row_msg(origin, row, "duplicate date " + to_iso(*date)));
            if (gap < 0) throw DataError(row_msg(origin, row, "dates out of order at " + to_iso(*date)));
            if (gap > 1)
                throw DataError(row_msg(origin, row, "gap in dates: " + to_iso(prev) + " -> " + to_iso(*date)));
        }
        prev = *date;
        s.values.push_back(value);
    }
    if (s.values.empty()) throw DataError(origin + ": no data rows");
    return s;
}

TimeSeries load_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return load_series(in, path);
}

void save_series_file(const TimeSeries& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "date,demand\n";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.10g", s.values[i]);
        out << to_iso(s.date_at(i)) << ',' << buf << '\n';
    }
    if (!out) throw DataError("short write to " + path);
}

TimeSeries minmax_fit_transform(const TimeSeries& s) {
    if (s.values.empty()) throw ContractError("minmax_fit_transform: empty series");
    double lo = s.values.front(), hi = s.values.front();
    for (double v : s.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo)
        throw ContractError("minmax_fit_transform: constant series (min == max == " + std::to_string(lo) + ")");
    TimeSeries out;
    out.start = s.start;
    out.scale = ScaleState{lo, hi};
    out.values.reserve(s.size());
    const double band = hi - lo;
    for (double v : s.values) out.values.push_back((v - lo) / band);
    return out;
}

TimeSeries minmax_transform_with(const TimeSeries& s, const ScaleState& st) {
    if (st.max <= st.min) throw ContractError("minmax_transform_with: max must exceed min");
    TimeSeries out;
    out.start = s.start;
    out.scale = st;
    out.values.reserve(s.size());
    const double band = st.max - st.min;
    for (double v : s.values) out.values.push_back((v - st.min) / band);
    return out;
}

std::vector<double> inverse_transform_values(const std::vector<double>& scaled, const ScaleState& st) {
    std::vector<double> out;
    out.reserve(scaled.size());
    const double band = st.max - st.min;
    for (double v : scaled) out.push_back(v * band + st.min);
    return out;
}

TimeSeries inverse_transform(const TimeSeries& s) {
    if (!s.scale) throw ContractError("inverse_transform: series has no scale state");
    TimeSeries out;
    out.start = s.start;
    out.values = inverse_transform_values(s.values, *s.scale);
    return out;
}

std::pair<TimeSeries, TimeSeries> train_test_split(const TimeSeries& s, std::size_t test_len) {
    if (test_len == 0 || test_len >= s.size())
        throw ContractError("train_test_split: test_len " + std::to_string(test_len) +
                            " out of range for series of length " + std::to_string(s.size()));
    TimeSeries train, test;
    train.start = s.start;
    train.values.assign(s.values.begin(), s.values.end() - static_cast<long>(test_len));
    test.start = s.date_at(s.size() - test_len);
    test.values.assign(s.values.end() - static_cast<long>(test_len), s.values.end());
    return {std::move(train), std::move(test)};
}

CovariateTable calendar_covariates(const Date& start, const Date& through) {
    const long long span = diff_days(start, through);
    if (span < 0) throw ContractError("calendar_covariates: through precedes start");
    const std::size_t len = static_cast<std::size_t>(span) + 1;
    CovariateTable t;
    t.start = start;
    t.names = {"dow_mon",  "dow_tue",   "dow_wed",   "dow_thu",  "dow_fri", "dow_sat",
               "dow_sun",  "month_sin", "month_cos", "doy_sin",  "doy_cos"};
    t.channels.assign(t.names.size(), std::vector<double>(len, 0.0));
    for (std::size_t i = 0; i < len; ++i) {
        const Date d = add_days(start, static_cast<long long>(i));
        t.channels[static_cast<std::size_t>(weekday_mon0(d))][i] = 1.0;
        const double m = static_cast<double>(d.month);
        t.channels[7][i] = std::sin(2.0 * kPi * m / 12.0);
        t.channels[8][i] = std::cos(2.0 * kPi * m / 12.0);
        const double doy = static_cast<double>(day_of_year(d));
        t.channels[9][i] = std::sin(2.0 * kPi * doy / 365.25);
        t.channels[10][i] = std::cos(2.0 * kPi * doy / 365.25);
    }
    return t;
}

CovariateTable calendar_covariates(const TimeSeries& s, long long extra_days) {
    if (s.values.empty()) throw ContractError("calendar_covariates: empty series");
    return calendar_covariates(s.start, add_days(s.last_date(), extra_days));
}

}  // namespace tempocast
