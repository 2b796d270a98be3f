#include "deconv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "deconv/errors.hpp"

namespace deconv::svg {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 520;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// round the raw span outward to a tidy tick step
double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) return mag;
    if (r < 3.5) return 2.0 * mag;
    if (r < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

} // namespace

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
    double x0 = std::numeric_limits<double>::max(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, x); x1 = std::max(x1, x);
            y0 = std::min(y0, y); y1 = std::max(y1, y);
        }
    if (!(x1 >= x0)) throw ConfigError("write_line_plot: no data points");
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
    const double ypad = 0.05 * (y1 - y0);
    y0 -= ypad;
    y1 += ypad;

    const double pw = kWidth - kMarginL - kMarginR;
    const double ph = kHeight - kMarginT - kMarginB;
    auto px = [&](double x) { return kMarginL + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kMarginT + (y1 - y) / (y1 - y0) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // frame
    out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // ticks
    const double xs = nice_step(x1 - x0);
    for (double x = std::ceil(x0 / xs) * xs; x <= x1 + 1e-12 * xs; x += xs) {
        out << "<line x1=\"" << px(x) << "\" y1=\"" << kMarginT + ph << "\" x2=\"" << px(x)
            << "\" y2=\"" << kMarginT + ph + 5 << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << px(x) << "\" y=\"" << kMarginT + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(x) << "</text>\n";
    }
    const double ys = nice_step(y1 - y0);
    for (double y = std::ceil(y0 / ys) * ys; y <= y1 + 1e-12 * ys; y += ys) {
        out << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << kMarginL
            << "\" y2=\"" << py(y) << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << kMarginL - 8 << "\" y=\"" << py(y) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(y)
            << "</text>\n";
    }

    // axis labels
    out << "<text x=\"" << kMarginL + pw / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
        << "</text>\n"
        << "<text x=\"16\" y=\"" << kMarginT + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " << kMarginT + ph / 2 << ")\">" << y_label
        << "</text>\n";

    // series + legend
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (auto [x, y] : series[s].points) out << num(px(x)) << ',' << num(py(y)) << ' ';
        out << "\"/>\n";
        const double ly = kMarginT + 14 + 18.0 * static_cast<double>(s);
        out << "<line x1=\"" << kMarginL + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
            << kMarginL + pw - 125 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kMarginL + pw - 118 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace deconv::svg
