#ifndef DNAJSCC_PLOT_HPP
#define DNAJSCC_PLOT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnajscc {

// Line and bar charts rendered as standalone SVG. Keeps figure output free
// of font rasterization and image encoding concerns.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color; // any SVG color, filled in automatically when empty
};

namespace detail {

inline const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct AxisRange {
    double lo = 0.0, hi = 1.0;
    double map(double v, double px_lo, double px_hi) const {
        if (hi == lo) return (px_lo + px_hi) / 2.0;
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

inline AxisRange span(const std::vector<const std::vector<double>*>& cols) {
    AxisRange r{1e300, -1e300};
    for (const auto* col : cols)
        for (double v : *col) {
            r.lo = std::min(r.lo, v);
            r.hi = std::max(r.hi, v);
        }
    if (r.lo > r.hi) r = {0.0, 1.0};
    if (r.lo == r.hi) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    const double pad = 0.05 * (r.hi - r.lo);
    return {r.lo - pad, r.hi + pad};
}

} // namespace detail

inline void write_line_plot_svg(const std::string& path, const std::string& title,
                                const std::string& xlabel, const std::string& ylabel,
                                std::vector<PlotSeries> series) {
    const int W = 720, H = 480;
    const double L = 70, R = W - 25, T = 45, B = H - 55;

    std::vector<const std::vector<double>*> xs, ys;
    for (auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("write_line_plot_svg: series '" + s.label +
                                        "' has mismatched x/y lengths");
        xs.push_back(&s.x);
        ys.push_back(&s.y);
    }
    const detail::AxisRange rx = detail::span(xs);
    const detail::AxisRange ry = detail::span(ys);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_line_plot_svg: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' font-family='sans-serif' font-size='13'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";

    for (int i = 0; i <= 5; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 5.0;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 5.0;
        const double px = rx.map(fx, L, R);
        const double py = ry.map(fy, B, T);
        out << "<line x1='" << px << "' y1='" << T << "' x2='" << px << "' y2='" << B
            << "' stroke='#e0e0e0'/>\n"
            << "<line x1='" << L << "' y1='" << py << "' x2='" << R << "' y2='" << py
            << "' stroke='#e0e0e0'/>\n"
            << "<text x='" << px << "' y='" << B + 18 << "' text-anchor='middle'>"
            << detail::fmt_num(fx) << "</text>\n"
            << "<text x='" << L - 8 << "' y='" << py + 4 << "' text-anchor='end'>"
            << detail::fmt_num(fy) << "</text>\n";
    }
    out << "<rect x='" << L << "' y='" << T << "' width='" << R - L << "' height='" << B - T
        << "' fill='none' stroke='black'/>\n"
        << "<text x='" << (L + R) / 2 << "' y='" << H - 14 << "' text-anchor='middle'>" << xlabel
        << "</text>\n"
        << "<text x='20' y='" << (T + B) / 2 << "' text-anchor='middle' transform='rotate(-90 20 "
        << (T + B) / 2 << ")'>" << ylabel << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const std::string color =
            s.color.empty() ? detail::kPalette[si % (sizeof detail::kPalette / sizeof *detail::kPalette)]
                            : s.color;
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='2' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << rx.map(s.x[i], L, R) << ',' << ry.map(s.y[i], B, T) << ' ';
        out << "'/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << "<circle cx='" << rx.map(s.x[i], L, R) << "' cy='" << ry.map(s.y[i], B, T)
                << "' r='3.5' fill='" << color << "'/>\n";
        const double ly = T + 16 + 18.0 * static_cast<double>(si);
        out << "<line x1='" << L + 10 << "' y1='" << ly << "' x2='" << L + 34 << "' y2='" << ly
            << "' stroke='" << color << "' stroke-width='2'/>\n"
            << "<text x='" << L + 40 << "' y='" << ly + 4 << "'>" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

// Grouped bars: one group per category label, one bar per series.
inline void write_bar_plot_svg(const std::string& path, const std::string& title,
                               const std::string& xlabel, const std::string& ylabel,
                               const std::vector<std::string>& categories,
                               std::vector<PlotSeries> series) {
    const int W = 720, H = 480;
    const double L = 70, R = W - 25, T = 45, B = H - 55;

    double hi = 0.0;
    for (const auto& s : series) {
        if (s.y.size() != categories.size())
            throw std::invalid_argument("write_bar_plot_svg: series '" + s.label +
                                        "' length does not match categories");
        for (double v : s.y) hi = std::max(hi, v);
    }
    if (hi <= 0.0) hi = 1.0;
    hi *= 1.08;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_bar_plot_svg: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' font-family='sans-serif' font-size='13'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";

    for (int i = 0; i <= 5; ++i) {
        const double fy = hi * i / 5.0;
        const double py = B - (B - T) * i / 5.0;
        out << "<line x1='" << L << "' y1='" << py << "' x2='" << R << "' y2='" << py
            << "' stroke='#e0e0e0'/>\n"
            << "<text x='" << L - 8 << "' y='" << py + 4 << "' text-anchor='end'>"
            << detail::fmt_num(fy) << "</text>\n";
    }

    const double group_w = (R - L) / static_cast<double>(categories.size());
    const double bar_w = group_w * 0.8 / static_cast<double>(series.size());
    for (std::size_t si = 0; si < series.size(); ++si) {
        const std::string color =
            series[si].color.empty()
                ? detail::kPalette[si % (sizeof detail::kPalette / sizeof *detail::kPalette)]
                : series[si].color;
        for (std::size_t ci = 0; ci < categories.size(); ++ci) {
            const double v = series[si].y[ci];
            const double x0 = L + group_w * (static_cast<double>(ci) + 0.1) + bar_w * static_cast<double>(si);
            const double hpx = (B - T) * v / hi;
            out << "<rect x='" << x0 << "' y='" << B - hpx << "' width='" << bar_w * 0.95
                << "' height='" << hpx << "' fill='" << color << "'/>\n";
        }
        const double ly = T + 16 + 18.0 * static_cast<double>(si);
        out << "<rect x='" << R - 140 << "' y='" << ly - 8 << "' width='22' height='10' fill='"
            << color << "'/>\n"
            << "<text x='" << R - 112 << "' y='" << ly + 2 << "'>" << series[si].label
            << "</text>\n";
    }

    for (std::size_t ci = 0; ci < categories.size(); ++ci)
        out << "<text x='" << L + group_w * (static_cast<double>(ci) + 0.5) << "' y='" << B + 18
            << "' text-anchor='middle'>" << categories[ci] << "</text>\n";

    out << "<rect x='" << L << "' y='" << T << "' width='" << R - L << "' height='" << B - T
        << "' fill='none' stroke='black'/>\n"
        << "<text x='" << (L + R) / 2 << "' y='" << H - 14 << "' text-anchor='middle'>" << xlabel
        << "</text>\n"
        << "<text x='20' y='" << (T + B) / 2 << "' text-anchor='middle' transform='rotate(-90 20 "
        << (T + B) / 2 << ")'>" << ylabel << "</text>\n</svg>\n";
}

} // namespace dnajscc

#endif
