#include "rw2/svg.hpp"

#include "rw2/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace rw2 {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMargin = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span() const { return hi > lo ? hi - lo : 1.0; }
};

} // namespace

void svg_line_chart(const std::string& path, const std::vector<SvgSeries>& series,
                    const std::string& title, bool log_x) {
    std::ofstream out(path);
    if (!out) throw input_error(path + ": cannot open for writing");

    Range rx, ry;
    for (const auto& s : series) {
        for (double v : s.x) rx.add(log_x ? std::log10(v) : v);
        for (double v : s.y) ry.add(v);
    }
    if (!std::isfinite(rx.lo)) rx = {0.0, 1.0};
    if (!std::isfinite(ry.lo)) ry = {0.0, 1.0};

    auto px = [&](double v) {
        double t = ((log_x ? std::log10(v) : v) - rx.lo) / rx.span();
        return kMargin + t * (kWidth - 2 * kMargin);
    };
    auto py = [&](double v) {
        double t = (v - ry.lo) / ry.span();
        return kHeight - kMargin - t * (kHeight - 2 * kMargin);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* color = kPalette[ci % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k)
            out << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << kWidth - kMargin + 4 << "\" y=\"" << kMargin + 16 * ci
            << "\" font-size=\"11\" fill=\"" << color << "\">" << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
    if (!out) throw input_error(path + ": write failed");
}

void svg_heatmap(const std::string& path, const Eigen::MatrixXd& values,
                 const std::string& title) {
    std::ofstream out(path);
    if (!out) throw input_error(path + ": cannot open for writing");
    const double lo = values.minCoeff(), hi = values.maxCoeff();
    const double span = hi > lo ? hi - lo : 1.0;
    const double cw = static_cast<double>(kWidth - 2 * kMargin) / values.cols();
    const double ch = static_cast<double>(kHeight - 2 * kMargin) / values.rows();

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            const int shade = static_cast<int>(255.0 * (values(i, j) - lo) / span);
            const double x = kMargin + j * cw;
            const double y = kHeight - kMargin - (i + 1) * ch;
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw + 0.5
                << "\" height=\"" << ch + 0.5 << "\" fill=\"rgb(" << shade << ',' << shade << ','
                << shade << ")\"/>\n";
        }
    }
    out << "</svg>\n";
    if (!out) throw input_error(path + ": write failed");
}

} // namespace rw2
