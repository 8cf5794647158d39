#include "humplab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "humplab/errors.hpp"

namespace humplab {

namespace {

constexpr double kWidth = 960, kHeight = 600;
constexpr double kLeft = 70, kRight = 30, kTop = 40, kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};
constexpr int kPaletteSize = 8;

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

struct Axis {
    double lo = 0, hi = 1, step = 1;
};

Axis make_axis(double lo, double hi) {
    Axis ax;
    if (lo > hi) std::swap(lo, hi);
    double pad = 0.05 * (hi - lo);
    if (pad == 0.0)
        pad = hi == 0.0 ? 1.0 : 0.05 * std::abs(hi);
    ax.lo = lo - pad;
    ax.hi = hi + pad;
    double raw = (ax.hi - ax.lo) / 6.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double mult = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
    ax.step = mult * mag;
    return ax;
}

} // namespace

void write_svg_plot(const std::vector<PlotSeries>& series,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& path) {
    if (series.empty())
        throw ArgumentError("nothing to plot");
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw ArgumentError("series '" + s.label + "' has mismatched x/y");
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k]))
                throw ArgumentError("series '" + s.label + "' contains non-finite values");
            if (!any) {
                x_lo = x_hi = s.x[k];
                y_lo = y_hi = s.y[k];
                any = true;
            } else {
                x_lo = std::min(x_lo, s.x[k]);
                x_hi = std::max(x_hi, s.x[k]);
                y_lo = std::min(y_lo, s.y[k]);
                y_hi = std::max(y_hi, s.y[k]);
            }
        }
    }
    if (!any)
        throw ArgumentError("all plot series are empty");

    const Axis ax = make_axis(x_lo, x_hi);
    const Axis ay = make_axis(y_lo, y_hi);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - ax.lo) / (ax.hi - ax.lo) * plot_w; };
    auto sy = [&](double y) { return kTop + (ay.hi - y) / (ay.hi - ay.lo) * plot_h; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
       << kHeight << "\">\n"
       << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n";

    // Grid and ticks.
    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (double t = std::ceil(ax.lo / ax.step) * ax.step; t <= ax.hi + 1e-9 * ax.step;
         t += ax.step) {
        const std::string x = px(sx(t));
        os << "<line x1=\"" << x << "\" y1=\"" << px(kTop) << "\" x2=\"" << x
           << "\" y2=\"" << px(kHeight - kBottom)
           << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << px(kHeight - kBottom + 18)
           << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    }
    for (double t = std::ceil(ay.lo / ay.step) * ay.step; t <= ay.hi + 1e-9 * ay.step;
         t += ay.step) {
        const std::string y = px(sy(t));
        os << "<line x1=\"" << px(kLeft) << "\" y1=\"" << y << "\" x2=\""
           << px(kWidth - kRight) << "\" y2=\"" << y
           << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(sy(t) + 4)
           << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
    }
    os << "<text x=\"" << px(kLeft + plot_w / 2) << "\" y=\"" << px(kHeight - 12)
       << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << px(kTop + plot_h / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << px(kTop + plot_h / 2) << ")\">" << escape(y_label) << "</text>\n";
    os << "</g>\n";

    os << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\""
       << px(plot_w) << "\" height=\"" << px(plot_h)
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        if (s.x.empty())
            continue;
        os << "<polyline fill=\"none\" stroke=\"" << kPalette[i % kPaletteSize]
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (k) os << ' ';
            os << px(sx(s.x[k])) << ',' << px(sy(s.y[k]));
        }
        os << "\"/>\n";
    }

    // Legend, top right.
    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = kTop + 16 + 18 * static_cast<double>(i);
        const double x = kWidth - kRight - 190;
        os << "<line x1=\"" << px(x) << "\" y1=\"" << px(y - 4) << "\" x2=\""
           << px(x + 24) << "\" y2=\"" << px(y - 4) << "\" stroke=\""
           << kPalette[i % kPaletteSize] << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << px(x + 30) << "\" y=\"" << px(y) << "\">"
           << escape(series[i].label) << "</text>\n";
    }
    os << "</g>\n</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << os.str();
    if (!out.flush())
        throw IoError("short write to " + path);
}

} // namespace humplab
