#include "pqt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pqt/csv.hpp"

namespace pqt::svg {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

std::string num(double v) {
    // Fixed short form keeps coordinates deterministic and compact.
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss.precision(3);
    ss << std::fixed << v;
    return ss.str();
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
    double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

void frame(std::ostringstream& out, const PlotSpec& spec, const Range& rx,
           const Range& ry, bool log_y) {
    out << "<rect x='" << num(kLeft) << "' y='" << num(kTop) << "' width='"
        << num(kWidth - kLeft - kRight) << "' height='" << num(kHeight - kTop - kBottom)
        << "' fill='none' stroke='#444'/>\n";
    out << "<text x='" << num(kWidth / 2) << "' y='24' text-anchor='middle' "
        << "font-family='sans-serif' font-size='16'>" << escape(spec.title)
        << "</text>\n";
    out << "<text x='" << num(kWidth / 2) << "' y='" << num(kHeight - 12)
        << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
        << escape(spec.x_label) << "</text>\n";
    out << "<text x='16' y='" << num(kHeight / 2)
        << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
        << "transform='rotate(-90 16 " << num(kHeight / 2) << ")'>"
        << escape(spec.y_label) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        double px = rx.map(fx, kLeft, kWidth - kRight);
        out << "<text x='" << num(px) << "' y='" << num(kHeight - kBottom + 16)
            << "' text-anchor='middle' font-family='sans-serif' font-size='10'>"
            << csv::format(fx) << "</text>\n";
        double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        double py = ry.map(fy, kHeight - kBottom, kTop);
        out << "<text x='" << num(kLeft - 6) << "' y='" << num(py + 3)
            << "' text-anchor='end' font-family='sans-serif' font-size='10'>"
            << csv::format(log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series) {
    if (series.empty()) throw std::invalid_argument("svg: no series to plot");
    Range rx, ry;
    for (const auto& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size())
            throw std::invalid_argument("svg: empty or ragged series '" + s.label + "'");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (spec.log_y) {
                if (!(y > 0.0))
                    throw std::invalid_argument(
                        "svg: nonpositive value on a logarithmic axis");
                y = std::log10(y);
            }
            rx.add(s.x[i]);
            ry.add(y);
        }
    }
    for (double m : spec.x_markers) rx.add(m);
    rx.pad();
    ry.pad();

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(kWidth)
        << "' height='" << num(kHeight) << "' viewBox='0 0 " << num(kWidth) << " "
        << num(kHeight) << "'>\n";
    frame(out, spec, rx, ry, spec.log_y);
    for (double m : spec.x_markers) {
        double px = rx.map(m, kLeft, kWidth - kRight);
        out << "<line x1='" << num(px) << "' y1='" << num(kTop) << "' x2='" << num(px)
            << "' y2='" << num(kHeight - kBottom)
            << "' stroke='#b02a2a' stroke-dasharray='4 3' class='marker'/>\n";
    }
    double legend_y = kTop + 14.0;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double y = spec.log_y ? std::log10(s.y[i]) : s.y[i];
            out << num(rx.map(s.x[i], kLeft, kWidth - kRight)) << ","
                << num(ry.map(y, kHeight - kBottom, kTop)) << " ";
        }
        out << "'/>\n";
        out << "<text x='" << num(kWidth - kRight - 8) << "' y='" << num(legend_y)
            << "' text-anchor='end' font-family='sans-serif' font-size='11' fill='"
            << s.color << "'>" << escape(s.label) << "</text>\n";
        legend_y += 14.0;
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_bar_chart(const PlotSpec& spec, const std::vector<std::string>& labels,
                             const std::vector<double>& values) {
    if (values.empty() || labels.size() != values.size())
        throw std::invalid_argument("svg: empty or mismatched bar data");
    Range ry;
    ry.add(0.0);
    for (double v : values) ry.add(v);
    ry.pad();
    Range rx;
    rx.lo = 0.0;
    rx.hi = static_cast<double>(values.size());

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(kWidth)
        << "' height='" << num(kHeight) << "' viewBox='0 0 " << num(kWidth) << " "
        << num(kHeight) << "'>\n";
    frame(out, spec, rx, ry, false);
    double zero_y = ry.map(0.0, kHeight - kBottom, kTop);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double x0 = rx.map(i + 0.1, kLeft, kWidth - kRight);
        double x1 = rx.map(i + 0.9, kLeft, kWidth - kRight);
        double y = ry.map(values[i], kHeight - kBottom, kTop);
        out << "<rect x='" << num(x0) << "' y='" << num(std::min(y, zero_y))
            << "' width='" << num(x1 - x0) << "' height='" << num(std::fabs(zero_y - y))
            << "' fill='#1f6feb'/>\n";
        out << "<text x='" << num((x0 + x1) / 2) << "' y='"
            << num(kHeight - kBottom + 16)
            << "' text-anchor='middle' font-family='sans-serif' font-size='10'>"
            << escape(labels[i]) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("svg: cannot open " + path.string());
    out << content;
    if (!out) throw std::runtime_error("svg: write failed for " + path.string());
}

}  // namespace pqt::svg
