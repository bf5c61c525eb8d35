#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace storm::io {

// Shortest decimal form that parses back to the same double. Keeps CSV
// artifacts byte-stable and round-trip exact.
std::string format_double(double v);

double parse_double(const std::string& s);

std::vector<std::string> split_csv_line(const std::string& line);
std::string join_csv(const std::vector<std::string>& fields);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

struct Series {
    std::string name;
    std::vector<double> y;
};

// Standalone SVG line chart, one polyline per series over shared x values.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<double>& x,
                              const std::vector<Series>& series);

// Standalone SVG bar chart.
std::string render_bar_chart(const std::string& title, const std::string& y_label,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& values);

}  // namespace storm::io
