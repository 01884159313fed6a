#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "signqr/core.hpp"
#include "signqr/experiment.hpp"

namespace signqr {

// Shortest decimal form that parses back to the exact same bits.
template <class Scalar>
std::string format_scalar(Scalar value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// Fixed-point form for SVG coordinates; six decimals keep the log-log
// readback error below 1e-7 relative.
inline std::string format_fixed(double value, int precision = 6) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

template <class Scalar>
bool parse_scalar(std::string_view token, Scalar& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

struct MatrixParseError : std::runtime_error {
  int line;
  MatrixParseError(int line_, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_) + ": " + message), line(line_) {}
};

namespace detail {
inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}
}  // namespace detail

// Plain text matrix format: a header line "m n", then m lines of n
// whitespace-separated decimal scalars. Throws MatrixParseError with a
// 1-based line number on malformed input.
template <class Scalar>
Matrix<Scalar> read_matrix(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw MatrixParseError(1, "missing header line \"m n\"");
  ++lineno;
  const auto header = detail::split_fields(line);
  if (header.size() != 2) throw MatrixParseError(lineno, "header must be two integers \"m n\"");
  long long m = 0, n = 0;
  const auto parse_dim = [&](std::string_view tok, long long& out) {
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
  };
  if (!parse_dim(header[0], m) || !parse_dim(header[1], n) || m < 1 || n < 1)
    throw MatrixParseError(lineno, "dimensions must be positive integers");

  Matrix<Scalar> a(static_cast<Index>(m), static_cast<Index>(n));
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(in, line))
      throw MatrixParseError(lineno + 1, "unexpected end of file: expected " +
                                             std::to_string(m) + " rows");
    ++lineno;
    const auto fields = detail::split_fields(line);
    if (static_cast<long long>(fields.size()) != n)
      throw MatrixParseError(lineno, "expected " + std::to_string(n) + " values, got " +
                                         std::to_string(fields.size()));
    for (long long j = 0; j < n; ++j) {
      Scalar value;
      if (!parse_scalar(fields[j], value))
        throw MatrixParseError(lineno, "invalid number \"" + std::string(fields[j]) + "\"");
      if (!std::isfinite(value))
        throw MatrixParseError(lineno, "non-finite value \"" + std::string(fields[j]) + "\"");
      a(static_cast<Index>(i), static_cast<Index>(j)) = value;
    }
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::split_fields(line).empty())
      throw MatrixParseError(lineno, "unexpected content after the last row");
  }
  return a;
}

template <class Scalar>
Matrix<Scalar> read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixParseError(0, "cannot open \"" + path + "\"");
  return read_matrix<Scalar>(in);
}

template <class Scalar>
std::string format_matrix(const Matrix<Scalar>& a) {
  std::string out;
  for (Index i = 0; i < a.rows(); ++i) {
    out += " ";
    for (Index j = 0; j < a.cols(); ++j) {
      out += " ";
      out += format_scalar(a(i, j));
    }
    out += "\n";
  }
  return out;
}

// CSV serialization of a sweep, LF-terminated, shortest round-trip decimals.
// Byte-identical for identical config and seed.
template <class Scalar>
std::string sweep_csv(const std::vector<SweepRecord<Scalar>>& records) {
  std::string out = "p,delta,err_stable,err_wrong,orth_stable,orth_wrong,first_col_err_wrong\n";
  for (const auto& rec : records) {
    out += std::to_string(rec.p);
    out += ',';
    out += format_scalar(rec.delta);
    out += ',';
    out += format_scalar(rec.err_stable);
    out += ',';
    out += format_scalar(rec.err_wrong);
    out += ',';
    out += format_scalar(rec.orth_stable);
    out += ',';
    out += format_scalar(rec.orth_wrong);
    out += ',';
    out += format_scalar(rec.first_col_err_wrong);
    out += '\n';
  }
  return out;
}

// Log-log scatter axes: x spans delta decades 1e-16..1e-1, y spans error
// decades 1e-17..1e-6, drawn in a fixed 800x600 viewport. Values at or below
// the bottom decade (including exact zeros) clamp to the bottom axis; values
// beyond an axis range clamp to its edge.
namespace svg_axes {
inline constexpr double x_log_min = -16.0;
inline constexpr double x_log_max = -1.0;
inline constexpr double y_log_min = -17.0;
inline constexpr double y_log_max = -6.0;
inline constexpr double plot_left = 80.0;
inline constexpr double plot_right = 770.0;
inline constexpr double plot_top = 40.0;
inline constexpr double plot_bottom = 540.0;

inline double x_of_delta(double delta) {
  double lx = delta > 0 ? std::log10(delta) : x_log_min;
  lx = std::min(std::max(lx, x_log_min), x_log_max);
  return plot_left + (lx - x_log_min) / (x_log_max - x_log_min) * (plot_right - plot_left);
}

inline double y_of_error(double err) {
  double ly = err > 0 ? std::log10(err) : y_log_min;
  ly = std::min(std::max(ly, y_log_min), y_log_max);
  return plot_bottom - (ly - y_log_min) / (y_log_max - y_log_min) * (plot_bottom - plot_top);
}

inline double delta_of_x(double px) {
  const double lx =
      x_log_min + (px - plot_left) / (plot_right - plot_left) * (x_log_max - x_log_min);
  return std::pow(10.0, lx);
}

inline double error_of_y(double py) {
  const double ly =
      y_log_min + (plot_bottom - py) / (plot_bottom - plot_top) * (y_log_max - y_log_min);
  return std::pow(10.0, ly);
}
}  // namespace svg_axes

namespace detail {
inline void append_asterisk_marker(std::string& out, double x, double y) {
  out += "    <g transform=\"translate(" + format_fixed(x) + " " + format_fixed(y) + ")\">";
  out += "<path d=\"M -4 0 H 4 M 0 -4 V 4 M -2.83 -2.83 L 2.83 2.83 M -2.83 2.83 L 2.83 -2.83\"/>";
  out += "</g>\n";
}
}  // namespace detail

// Figure-style scatter: stable series as circles, wrong series as asterisks,
// decade gridlines, embedded legend and axis labels. Pure string assembly,
// byte-identical for identical records.
template <class Scalar>
std::string sweep_svg(const std::vector<SweepRecord<Scalar>>& records) {
  using namespace svg_axes;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  out += "  <g id=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int d = static_cast<int>(x_log_min); d <= static_cast<int>(x_log_max); ++d) {
    const std::string x = format_fixed(x_of_delta(std::pow(10.0, d)), 2);
    out += "    <line x1=\"" + x + "\" y1=\"" + format_fixed(plot_top, 2) + "\" x2=\"" + x +
           "\" y2=\"" + format_fixed(plot_bottom, 2) + "\"/>\n";
  }
  for (int d = static_cast<int>(y_log_min); d <= static_cast<int>(y_log_max); ++d) {
    const std::string y = format_fixed(y_of_error(std::pow(10.0, d)), 2);
    out += "    <line x1=\"" + format_fixed(plot_left, 2) + "\" y1=\"" + y + "\" x2=\"" +
           format_fixed(plot_right, 2) + "\" y2=\"" + y + "\"/>\n";
  }
  out += "  </g>\n";

  out += "  <rect x=\"80\" y=\"40\" width=\"690\" height=\"500\" fill=\"none\" stroke=\"black\"/>\n";

  out += "  <g id=\"x-ticks\" font-family=\"monospace\" font-size=\"9\" text-anchor=\"middle\">\n";
  for (int d = static_cast<int>(x_log_min); d <= static_cast<int>(x_log_max); ++d) {
    out += "    <text x=\"" + format_fixed(x_of_delta(std::pow(10.0, d)), 2) +
           "\" y=\"554\">1e" + std::to_string(d) + "</text>\n";
  }
  out += "  </g>\n";
  out += "  <g id=\"y-ticks\" font-family=\"monospace\" font-size=\"9\" text-anchor=\"end\">\n";
  for (int d = static_cast<int>(y_log_min); d <= static_cast<int>(y_log_max); ++d) {
    out += "    <text x=\"76\" y=\"" + format_fixed(y_of_error(std::pow(10.0, d)) + 3.0, 2) +
           "\">1e" + std::to_string(d) + "</text>\n";
  }
  out += "  </g>\n";

  out += "  <text x=\"425\" y=\"578\" font-family=\"monospace\" font-size=\"12\" "
         "text-anchor=\"middle\">delta</text>\n";
  out += "  <text transform=\"translate(18 290) rotate(-90)\" font-family=\"monospace\" "
         "font-size=\"12\" text-anchor=\"middle\">2-norm of A - QR</text>\n";
  out += "  <text x=\"425\" y=\"24\" font-family=\"monospace\" font-size=\"13\" "
         "text-anchor=\"middle\">Householder QR backward error vs delta</text>\n";

  out += "  <g id=\"legend\" font-family=\"monospace\" font-size=\"11\">\n";
  out += "    <circle cx=\"600\" cy=\"56\" r=\"4\" fill=\"none\" stroke=\"#1f77b4\" "
         "stroke-width=\"1.5\"/>\n";
  out += "    <text x=\"610\" y=\"60\">stable sign</text>\n";
  out += "    <g stroke=\"#d62728\" stroke-width=\"1.5\" fill=\"none\">\n";
  detail::append_asterisk_marker(out, 600.0, 72.0);
  out += "    </g>\n";
  out += "    <text x=\"610\" y=\"76\">wrong sign</text>\n";
  out += "    <text x=\"610\" y=\"92\" font-size=\"9\">errors &lt;= 1e-17 clamp to the bottom "
         "axis</text>\n";
  out += "  </g>\n";

  out += "  <g id=\"series-stable\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\">\n";
  for (const auto& rec : records) {
    out += "    <circle cx=\"" + format_fixed(x_of_delta(static_cast<double>(rec.delta))) +
           "\" cy=\"" + format_fixed(y_of_error(static_cast<double>(rec.err_stable))) +
           "\" r=\"4\"/>\n";
  }
  out += "  </g>\n";
  out += "  <g id=\"series-wrong\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\">\n";
  for (const auto& rec : records) {
    detail::append_asterisk_marker(out, x_of_delta(static_cast<double>(rec.delta)),
                                   y_of_error(static_cast<double>(rec.err_wrong)));
  }
  out += "  </g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace signqr
