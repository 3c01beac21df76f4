#include "tempocast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "tempocast/error.hpp"

namespace tempocast {

namespace {

constexpr double kWidth = 960, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 36, kBottom = 40;

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_forecast_svg(const std::string& path, const ForecastColumns& cols, const std::string& title) {
    if (cols.dates.empty()) throw ContractError("svg plot: no data");
    const std::size_t n = cols.dates.size();
    double lo = cols.predicted_mw[0], hi = lo;
    auto absorb = [&](const std::vector<double>& v) {
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    };
    absorb(cols.actual_mw);
    absorb(cols.predicted_mw);
    absorb(cols.q10_mw);
    absorb(cols.q90_mw);
    if (hi <= lo) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto X = [&](std::size_t i) {
        return kLeft + plot_w * (n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1));
    };
    auto Y = [&](double v) { return kTop + plot_h * (1.0 - (v - lo) / (hi - lo)); };

    auto polyline = [&](const std::vector<double>& v) {
        std::string pts;
        for (std::size_t i = 0; i < n; ++i) pts += coord(X(i)) + "," + coord(Y(v[i])) + " ";
        return pts;
    };

    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kLeft << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\">" << title
        << "</text>\n";

    // axes + a few horizontal grid lines with MW labels
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"#444\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << kTop + plot_h << "\" stroke=\"#444\"/>\n";
    for (int g = 0; g <= 4; ++g) {
        const double v = lo + (hi - lo) * g / 4.0;
        out << "<line x1=\"" << kLeft << "\" y1=\"" << coord(Y(v)) << "\" x2=\"" << kLeft + plot_w
            << "\" y2=\"" << coord(Y(v)) << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"4\" y=\"" << coord(Y(v) + 4) << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << coord(v) << "</text>\n";
    }
    // first/last date labels
    out << "<text x=\"" << kLeft << "\" y=\"" << kHeight - 12
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << to_iso(cols.dates.front()) << "</text>\n"
        << "<text x=\"" << kLeft + plot_w - 76 << "\" y=\"" << kHeight - 12
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << to_iso(cols.dates.back()) << "</text>\n";

    if (!cols.q10_mw.empty()) {
        std::string pts;
        for (std::size_t i = 0; i < n; ++i) pts += coord(X(i)) + "," + coord(Y(cols.q90_mw[i])) + " ";
        for (std::size_t i = n; i-- > 0;) pts += coord(X(i)) + "," + coord(Y(cols.q10_mw[i])) + " ";
        out << "<polygon points=\"" << pts << "\" fill=\"#1f77b4\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    if (!cols.actual_mw.empty())
        out << "<polyline points=\"" << polyline(cols.actual_mw)
            << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.2\"/>\n";
    out << "<polyline points=\"" << polyline(cols.predicted_mw)
        << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.2\"/>\n";

    // legend
    out << "<line x1=\"" << kLeft + plot_w - 180 << "\" y1=\"18\" x2=\"" << kLeft + plot_w - 150
        << "\" y2=\"18\" stroke=\"#333333\" stroke-width=\"2\"/>"
        << "<text x=\"" << kLeft + plot_w - 144 << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"12\">actual</text>\n"
        << "<line x1=\"" << kLeft + plot_w - 90 << "\" y1=\"18\" x2=\"" << kLeft + plot_w - 60
        << "\" y2=\"18\" stroke=\"#d62728\" stroke-width=\"2\"/>"
        << "<text x=\"" << kLeft + plot_w - 54 << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"12\">forecast</text>\n";

    out << "</svg>\n";
    if (!out) throw DataError("short write to " + path);
}

}  // namespace tempocast
