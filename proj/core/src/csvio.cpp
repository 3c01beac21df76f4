#include "tempocast/csvio.hpp"

#include <cstdio>
#include <fstream>

#include "tempocast/error.hpp"

namespace tempocast {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void write_results_csv(const std::string& path, const std::vector<ModelScore>& rows, bool zero_timings) {
    std::ofstream out = open_out(path);
    out << "model,mape_percent,train_seconds,predict_seconds\n";
    for (const ModelScore& r : rows) {
        out << r.name << ',' << format_double(r.mape_percent) << ','
            << format_double(zero_timings ? 0.0 : r.train_seconds) << ','
            << format_double(zero_timings ? 0.0 : r.predict_seconds) << '\n';
    }
    if (!out) throw DataError("short write to " + path);
}

void write_forecast_csv(const std::string& path, const ForecastColumns& cols) {
    const bool bands = !cols.q10_mw.empty();
    const bool actuals = !cols.actual_mw.empty();
    std::ofstream out = open_out(path);
    out << "date" << (actuals ? ",actual_mw" : "") << ",predicted_mw"
        << (bands ? ",q10_mw,q90_mw" : "") << '\n';
    for (std::size_t i = 0; i < cols.dates.size(); ++i) {
        out << to_iso(cols.dates[i]);
        if (actuals) out << ',' << format_double(cols.actual_mw[i]);
        out << ',' << format_double(cols.predicted_mw[i]);
        if (bands) out << ',' << format_double(cols.q10_mw[i]) << ',' << format_double(cols.q90_mw[i]);
        out << '\n';
    }
    if (!out) throw DataError("short write to " + path);
}

void write_attention_csv(const std::string& path,
                         const std::vector<std::shared_ptr<AttentionTrace>>& traces) {
    std::ofstream out = open_out(path);
    out << "chunk,head,query_pos,key_pos,weight\n";
    for (std::size_t c = 0; c < traces.size(); ++c) {
        const AttentionTrace& t = *traces[c];
        for (int h = 0; h < t.heads; ++h)
            for (int q = 0; q < t.seq_len; ++q)
                for (int k = 0; k < t.seq_len; ++k)
                    out << c << ',' << h << ',' << q << ',' << k << ','
                        << format_double(t.attention[static_cast<std::size_t>(h)]
                                                    [static_cast<std::size_t>(q) * t.seq_len + k])
                        << '\n';
    }
    if (!out) throw DataError("short write to " + path);
}

void write_selection_csv(const std::string& path,
                         const std::vector<std::shared_ptr<AttentionTrace>>& traces,
                         const std::vector<std::string>& past_vars,
                         const std::vector<std::string>& future_vars) {
    std::ofstream out = open_out(path);
    out << "chunk,segment,position,variable,weight\n";
    for (std::size_t c = 0; c < traces.size(); ++c) {
        const AttentionTrace& t = *traces[c];
        for (std::size_t p = 0; p < t.sel_past.size(); ++p)
            for (std::size_t v = 0; v < t.sel_past[p].size(); ++v)
                out << c << ",past," << p << ',' << past_vars[v] << ','
                    << format_double(t.sel_past[p][v]) << '\n';
        for (std::size_t p = 0; p < t.sel_future.size(); ++p)
            for (std::size_t v = 0; v < t.sel_future[p].size(); ++v)
                out << c << ",future," << p << ',' << future_vars[v] << ','
                    << format_double(t.sel_future[p][v]) << '\n';
    }
    if (!out) throw DataError("short write to " + path);
}

}  // namespace tempocast
