#include "quantfusion/svg.hpp"

#include "quantfusion/csv.hpp"
#include "quantfusion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qf {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 930.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 490.0;

std::string polyline(const EquityCurve& curve, bool benchmark, double lo, double hi,
                     const char* color) {
    double span = hi - lo;
    std::ostringstream out;
    out << "  <polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i) {
        double v = benchmark ? curve[i].benchmark : curve[i].equity;
        double x = n == 1 ? kLeft
                          : kLeft + (kRight - kLeft) * static_cast<double>(i) /
                                        static_cast<double>(n - 1);
        double y = kBottom - (kBottom - kTop) * (v - lo) / span;
        out << std::round(x * 100.0) / 100.0 << ',' << std::round(y * 100.0) / 100.0
            << ' ';
    }
    out << "\"/>\n";
    return out.str();
}

std::string tick_label(double value) {
    // Compact money axis: millions keep two decimals, smaller sums one.
    if (std::abs(value) >= 1e6) return format_number(std::round(value / 1e4) / 100.0) + "M";
    if (std::abs(value) >= 1e3) return format_number(std::round(value / 100.0) / 10.0) + "k";
    return format_number(std::round(value * 100.0) / 100.0);
}

} // namespace

std::string equity_svg(const EquityCurve& curve) {
    if (curve.empty()) throw EmptyPanelError("cannot plot an empty equity curve");

    double lo = curve[0].equity, hi = curve[0].equity;
    for (const auto& p : curve) {
        lo = std::min({lo, p.equity, p.benchmark});
        hi = std::max({hi, p.equity, p.benchmark});
    }
    if (hi == lo) {
        hi += 1.0;
        lo -= 1.0;
    }
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    // Axes.
    out << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
        << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
        << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";

    // Horizontal gridlines with value labels.
    for (int t = 0; t <= 4; ++t) {
        double v = lo + (hi - lo) * t / 4.0;
        double y = kBottom - (kBottom - kTop) * t / 4.0;
        out << "  <line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kRight
            << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        out << "  <text x=\"" << kLeft - 8.0 << "\" y=\"" << y + 4.0
            << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">"
            << tick_label(v) << "</text>\n";
    }

    // First and last dates on the x axis.
    out << "  <text x=\"" << kLeft << "\" y=\"" << kBottom + 20.0
        << "\" font-size=\"12\" font-family=\"sans-serif\">"
        << curve.front().date.to_string() << "</text>\n";
    out << "  <text x=\"" << kRight << "\" y=\"" << kBottom + 20.0
        << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">"
        << curve.back().date.to_string() << "</text>\n";

    // Axis titles.
    out << "  <text x=\"" << (kLeft + kRight) / 2.0 << "\" y=\"" << kBottom + 40.0
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
        << "trading day</text>\n";
    out << "  <text x=\"18\" y=\"" << (kTop + kBottom) / 2.0
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 18 " << (kTop + kBottom) / 2.0 << ")\">"
        << "portfolio value</text>\n";

    out << polyline(curve, false, lo, hi, "#1f77b4");
    out << polyline(curve, true, lo, hi, "#999999");

    // Legend.
    out << "  <line x1=\"" << kRight - 180.0 << "\" y1=\"" << kTop + 6.0 << "\" x2=\""
        << kRight - 150.0 << "\" y2=\"" << kTop + 6.0
        << "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    out << "  <text x=\"" << kRight - 144.0 << "\" y=\"" << kTop + 10.0
        << "\" font-size=\"12\" font-family=\"sans-serif\">strategy</text>\n";
    out << "  <line x1=\"" << kRight - 180.0 << "\" y1=\"" << kTop + 24.0 << "\" x2=\""
        << kRight - 150.0 << "\" y2=\"" << kTop + 24.0
        << "\" stroke=\"#999999\" stroke-width=\"1.5\"/>\n";
    out << "  <text x=\"" << kRight - 144.0 << "\" y=\"" << kTop + 28.0
        << "\" font-size=\"12\" font-family=\"sans-serif\">benchmark</text>\n";

    out << "</svg>\n";
    return out.str();
}

void write_equity_svg(const std::string& path, const EquityCurve& curve) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << equity_svg(curve);
    if (!out.good()) throw IoError("failed writing " + path);
}

} // namespace qf
