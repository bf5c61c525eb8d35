#include "storm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "storm/common.hpp"

namespace storm::io {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw RejectedInput("not a number: " + s);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string join_csv(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += fields[i];
    }
    out.push_back('\n');
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 44.0, kBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string svg_header(const std::string& title) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    return s.str();
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<double>& x,
                              const std::vector<Series>& series) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    if (!x.empty()) {
        x_min = *std::min_element(x.begin(), x.end());
        x_max = *std::max_element(x.begin(), x.end());
    }
    y_min = 1e300;
    y_max = -1e300;
    for (const auto& s : series)
        for (double v : s.y) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    if (y_min > y_max) {
        y_min = 0.0;
        y_max = 1.0;
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    const double pad = (y_max - y_min) * 0.08 + 1e-9;
    y_min -= pad;
    y_max += pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double v) { return kTop + (y_max - v) / (y_max - y_min) * plot_h; };

    std::ostringstream s;
    s << svg_header(title);
    s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fy = y_min + (y_max - y_min) * t / 5.0;
        const double fx = x_min + (x_max - x_min) * t / 5.0;
        s << "<line x1=\"" << kLeft << "\" y1=\"" << py(fy) << "\" x2=\"" << kLeft + plot_w
          << "\" y2=\"" << py(fy) << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(fy) + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(fy)
          << "</text>\n";
        s << "<text x=\"" << px(fx) << "\" y=\"" << kTop + plot_h + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(fx)
          << "</text>\n";
    }
    s << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n";
    s << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % 6];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < x.size() && k < series[i].y.size(); ++k)
            s << px(x[k]) << "," << py(series[i].y[k]) << " ";
        s << "\"/>\n";
        const double ly = kTop + 14 + 16.0 * static_cast<double>(i);
        s << "<line x1=\"" << kLeft + plot_w - 150 << "\" y1=\"" << ly << "\" x2=\""
          << kLeft + plot_w - 126 << "\" y2=\"" << ly << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << kLeft + plot_w - 120 << "\" y=\"" << ly + 4
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[i].name << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string render_bar_chart(const std::string& title, const std::string& y_label,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& values) {
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    double y_max = 0.0;
    for (double v : values) y_max = std::max(y_max, v);
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.1;

    auto py = [&](double v) { return kTop + (y_max - v) / y_max * plot_h; };

    std::ostringstream s;
    s << svg_header(title);
    s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fy = y_max * t / 5.0;
        s << "<line x1=\"" << kLeft << "\" y1=\"" << py(fy) << "\" x2=\"" << kLeft + plot_w
          << "\" y2=\"" << py(fy) << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(fy) + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(fy)
          << "</text>\n";
    }
    const double n = static_cast<double>(values.size());
    const double slot = plot_w / std::max(1.0, n);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double bx = kLeft + slot * static_cast<double>(i) + slot * 0.18;
        const double bw = slot * 0.64;
        s << "<rect x=\"" << bx << "\" y=\"" << py(values[i]) << "\" width=\"" << bw
          << "\" height=\"" << kTop + plot_h - py(values[i]) << "\" fill=\"" << kPalette[i % 6]
          << "\"/>\n";
        s << "<text x=\"" << bx + bw / 2 << "\" y=\"" << py(values[i]) - 6
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
          << fmt_tick(values[i]) << "</text>\n";
        s << "<text x=\"" << bx + bw / 2 << "\" y=\"" << kTop + plot_h + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << labels[i]
          << "</text>\n";
    }
    s << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace storm::io
