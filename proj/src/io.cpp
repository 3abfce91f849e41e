// Copyright 2026 The pap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pap/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "pap/errors.hpp"
#include "pap/units.hpp"

namespace pap::cli {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError(file.string() + ": cannot write");
  return out;
}

struct Rgb {
  int r, g, b;
};

// Compact perceptual ramp, dark violet to yellow, linear between anchors.
Rgb ramp_sequential(double t) {
  static const int anchors[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
      {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4;
  const int i = std::min(int(t), 3);
  const double f = t - i;
  return Rgb{int(std::lround(anchors[i][0] + f * (anchors[i + 1][0] - anchors[i][0]))),
             int(std::lround(anchors[i][1] + f * (anchors[i + 1][1] - anchors[i][1]))),
             int(std::lround(anchors[i][2] + f * (anchors[i + 1][2] - anchors[i][2])))};
}

// Hue wheel for cyclic quantities: the two ends of the scale meet.
Rgb ramp_cyclic(double t) {
  t = t - std::floor(t);
  const double h = t * 6;
  const int i = int(h) % 6;
  const double f = h - std::floor(h);
  const double v = 0.88, s = 0.80;
  const double p = v * (1 - s), q = v * (1 - s * f), w = v * (1 - s * (1 - f));
  double r, g, b;
  switch (i) {
    case 0: r = v; g = w; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = w; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = w; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  return Rgb{int(std::lround(r * 255)), int(std::lround(g * 255)),
             int(std::lround(b * 255))};
}

std::string color(const Rgb& c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

void svg_header(std::ofstream& out, int w, int h) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
}

void svg_text(std::ofstream& out, double x, double y, const std::string& s,
              const std::string& anchor, int size,
              const std::string& extra = "") {
  out << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", y)
      << "\" font-family=\"Helvetica,Arial,sans-serif\" font-size=\"" << size
      << "\" text-anchor=\"" << anchor << "\"" << extra << ">" << esc(s)
      << "</text>\n";
}

struct Frame2D {
  double x0, y0, w, h;  // plot rectangle, y grows downward
  double xmin, xmax, ymin, ymax;
  double px(double x) const {
    return (xmax == xmin) ? x0 + w / 2 : x0 + (x - xmin) / (xmax - xmin) * w;
  }
  double py(double y) const {
    return (ymax == ymin) ? y0 + h / 2
                          : y0 + h - (y - ymin) / (ymax - ymin) * h;
  }
};

void svg_axes(std::ofstream& out, const Frame2D& f, const std::string& xlabel,
              const std::string& ylabel) {
  out << "<rect x=\"" << fmt("%.2f", f.x0) << "\" y=\"" << fmt("%.2f", f.y0)
      << "\" width=\"" << fmt("%.2f", f.w) << "\" height=\""
      << fmt("%.2f", f.h)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double tx = f.xmin + (f.xmax - f.xmin) * i / 4;
    const double ty = f.ymin + (f.ymax - f.ymin) * i / 4;
    const double px = f.px(tx);
    const double py = f.py(ty);
    out << "<line x1=\"" << fmt("%.2f", px) << "\" y1=\""
        << fmt("%.2f", f.y0 + f.h) << "\" x2=\"" << fmt("%.2f", px)
        << "\" y2=\"" << fmt("%.2f", f.y0 + f.h + 5)
        << "\" stroke=\"#333333\"/>\n";
    svg_text(out, px, f.y0 + f.h + 18, fmt("%.4g", tx), "middle", 11);
    out << "<line x1=\"" << fmt("%.2f", f.x0 - 5) << "\" y1=\""
        << fmt("%.2f", py) << "\" x2=\"" << fmt("%.2f", f.x0) << "\" y2=\""
        << fmt("%.2f", py) << "\" stroke=\"#333333\"/>\n";
    svg_text(out, f.x0 - 8, py + 4, fmt("%.4g", ty), "end", 11);
  }
  svg_text(out, f.x0 + f.w / 2, f.y0 + f.h + 40, xlabel, "middle", 13);
  svg_text(out, 16, f.y0 + f.h / 2, ylabel, "middle", 13,
           " transform=\"rotate(-90 16 " +
               fmt("%.2f", f.y0 + f.h / 2) + ")\"");
}

}  // namespace

std::string format_real(double v) { return fmt("%.12g", v); }

void write_csv_columns(const std::filesystem::path& file,
                       const std::vector<std::string>& headers,
                       const std::vector<const RealVector<double>*>& columns) {
  if (headers.size() != columns.size() || columns.empty())
    throw ConfigError("csv: headers and columns must match");
  const Eigen::Index n = columns[0]->size();
  for (const auto* c : columns)
    if (c->size() != n) throw ConfigError("csv: ragged columns");
  auto out = open_out(file);
  for (std::size_t i = 0; i < headers.size(); ++i)
    out << (i ? "," : "") << headers[i];
  out << "\n";
  for (Eigen::Index r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << format_real((*columns[i])[r]);
    out << "\n";
  }
}

void write_csv_matrix(const std::filesystem::path& file,
                      const std::string& corner,
                      const RealVector<double>& row_axis,
                      const RealVector<double>& col_axis,
                      const RealMatrix<double>& data) {
  if (data.rows() != row_axis.size() || data.cols() != col_axis.size())
    throw ConfigError("csv: matrix does not match its axes");
  auto out = open_out(file);
  out << corner;
  for (Eigen::Index c = 0; c < col_axis.size(); ++c)
    out << "," << format_real(col_axis[c]);
  out << "\n";
  for (Eigen::Index r = 0; r < row_axis.size(); ++r) {
    out << format_real(row_axis[r]);
    for (Eigen::Index c = 0; c < col_axis.size(); ++c)
      out << "," << format_real(data(r, c));
    out << "\n";
  }
}

void write_svg_heatmap(const std::filesystem::path& file,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel,
                       const std::string& colorbar_label,
                       const RealVector<double>& row_axis,
                       const RealVector<double>& col_axis,
                       const RealMatrix<double>& data, bool cyclic) {
  if (data.rows() != row_axis.size() || data.cols() != col_axis.size())
    throw ConfigError("svg: matrix does not match its axes");
  const int width = 760, height = 560;
  Frame2D f{80, 50, 540, 440, col_axis.minCoeff(), col_axis.maxCoeff(),
            row_axis.minCoeff(), row_axis.maxCoeff()};
  double lo = data.minCoeff(), hi = data.maxCoeff();
  if (cyclic) {
    lo = -kPi;
    hi = kPi;
  }
  if (hi == lo) hi = lo + 1;
  auto out = open_out(file);
  svg_header(out, width, height);
  svg_text(out, width / 2.0, 28, title, "middle", 16);
  // Cell geometry: each sample owns the span to its neighbors' midpoints.
  const Eigen::Index nr = row_axis.size(), nc = col_axis.size();
  auto edge = [](const RealVector<double>& ax, Eigen::Index i) {
    // Edge i of len(ax)+1 edges.
    const Eigen::Index n = ax.size();
    if (i <= 0) return ax[0] - (n > 1 ? (ax[1] - ax[0]) / 2 : 0.5);
    if (i >= n) return ax[n - 1] + (n > 1 ? (ax[n - 1] - ax[n - 2]) / 2 : 0.5);
    return (ax[i - 1] + ax[i]) / 2;
  };
  f.xmin = edge(col_axis, 0);
  f.xmax = edge(col_axis, nc);
  f.ymin = edge(row_axis, 0);
  f.ymax = edge(row_axis, nr);
  for (Eigen::Index r = 0; r < nr; ++r) {
    for (Eigen::Index c = 0; c < nc; ++c) {
      const double t = (data(r, c) - lo) / (hi - lo);
      const Rgb col = cyclic ? ramp_cyclic(t) : ramp_sequential(t);
      const double x0 = f.px(edge(col_axis, c));
      const double x1 = f.px(edge(col_axis, c + 1));
      const double y0 = f.py(edge(row_axis, r + 1));
      const double y1 = f.py(edge(row_axis, r));
      out << "<rect x=\"" << fmt("%.2f", x0) << "\" y=\"" << fmt("%.2f", y0)
          << "\" width=\"" << fmt("%.2f", x1 - x0 + 0.5) << "\" height=\""
          << fmt("%.2f", y1 - y0 + 0.5) << "\" fill=\"" << color(col)
          << "\"/>\n";
    }
  }
  svg_axes(out, f, xlabel, ylabel);
  // Colorbar.
  const double bx = f.x0 + f.w + 30, bw = 18, by = f.y0, bh = f.h;
  const int steps = 64;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) / steps;
    const Rgb col = cyclic ? ramp_cyclic(t) : ramp_sequential(t);
    out << "<rect x=\"" << fmt("%.2f", bx) << "\" y=\""
        << fmt("%.2f", by + bh - (i + 1) * bh / steps) << "\" width=\""
        << fmt("%.2f", bw) << "\" height=\"" << fmt("%.2f", bh / steps + 0.5)
        << "\" fill=\"" << color(col) << "\"/>\n";
  }
  out << "<rect x=\"" << fmt("%.2f", bx) << "\" y=\"" << fmt("%.2f", by)
      << "\" width=\"" << fmt("%.2f", bw) << "\" height=\""
      << fmt("%.2f", bh)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4;
    const double y = by + bh - bh * i / 4;
    svg_text(out, bx + bw + 6, y + 4, fmt("%.4g", v), "start", 11);
  }
  svg_text(out, bx + bw / 2, by - 10, colorbar_label, "middle", 12);
  out << "</svg>\n";
}

void write_svg_lines(const std::filesystem::path& file,
                     const std::string& title, const std::string& xlabel,
                     const std::string& ylabel,
                     const RealVector<double>& x,
                     const std::vector<std::pair<std::string,
                                                 RealVector<double>>>& series) {
  if (series.empty()) throw ConfigError("svg: no series");
  for (const auto& s : series)
    if (s.second.size() != x.size())
      throw ConfigError("svg: series length mismatch");
  static const char* palette[6] = {"#1f6fb4", "#d95f02", "#2a9d5c",
                                   "#c23b80", "#7a5fc7", "#6b6b00"};
  const int width = 760, height = 520;
  double ymin = series[0].second.minCoeff(), ymax = series[0].second.maxCoeff();
  for (const auto& s : series) {
    ymin = std::min(ymin, s.second.minCoeff());
    ymax = std::max(ymax, s.second.maxCoeff());
  }
  if (ymax == ymin) {
    ymax += 1;
    ymin -= 1;
  } else {
    const double pad = (ymax - ymin) * 0.06;
    ymax += pad;
    ymin -= pad;
  }
  Frame2D f{80, 50, 600, 400, x.minCoeff(), x.maxCoeff(), ymin, ymax};
  auto out = open_out(file);
  svg_header(out, width, height);
  svg_text(out, width / 2.0, 28, title, "middle", 16);
  svg_axes(out, f, xlabel, ylabel);
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << palette[s % 6]
        << "\" stroke-width=\"1.6\" points=\"";
    for (Eigen::Index i = 0; i < x.size(); ++i)
      out << fmt("%.2f", f.px(x[i])) << "," << fmt("%.2f", f.py(series[s].second[i]))
          << (i + 1 < x.size() ? " " : "");
    out << "\"/>\n";
    const double ly = f.y0 + 16 + 16 * double(s);
    out << "<line x1=\"" << fmt("%.2f", f.x0 + f.w - 150) << "\" y1=\""
        << fmt("%.2f", ly - 4) << "\" x2=\"" << fmt("%.2f", f.x0 + f.w - 130)
        << "\" y2=\"" << fmt("%.2f", ly - 4) << "\" stroke=\""
        << palette[s % 6] << "\" stroke-width=\"1.6\"/>\n";
    svg_text(out, f.x0 + f.w - 124, ly, series[s].first, "start", 11);
  }
  out << "</svg>\n";
}

std::uint64_t fnv64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t model_hash(const LevelSystem<double>& sys) {
  std::string s = "g=" + fmt("%.17g", sys.ground_energy) +
                  ";c=" + fmt("%.17g", sys.carrier) + ";";
  for (const auto& lv : sys.levels) {
    s += "l=" + std::to_string(lv.label) + ",e=" + fmt("%.17g", lv.energy) +
         ",d=" + fmt("%.17g", lv.dipole) +
         ",k=" + (lv.kind == LevelKind::target ? "t" : "s") + ";";
  }
  return fnv64(s);
}

std::filesystem::path output_root() {
  if (const char* env = std::getenv("PAP_OUTPUT_ROOT"); env && *env)
    return std::filesystem::path(env);
  return std::filesystem::path("out");
}

void write_manifest(const std::filesystem::path& file,
                    const nlohmann::json& manifest) {
  auto out = open_out(file);
  out << manifest.dump(2) << "\n";
}

}  // namespace pap::cli
