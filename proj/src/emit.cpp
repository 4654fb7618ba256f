#include "fracpde/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fracpde/errors.hpp"

namespace fracpde {

namespace {

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError("cannot open for writing: " + tmp);
    }
    out << content;
    if (!out.good()) {
      throw ConfigError("write failed: " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw ConfigError("rename failed for " + path + ": " + ec.message());
  }
}

struct SvgCanvas {
  std::ostringstream body;
  double width = 720, height = 480;
  double ml = 70, mr = 20, mt = 20, mb = 50;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  double px(double x) const {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  }
  double py(double y) const {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const char* color) {
    body << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(xs[i]), py(ys[i]));
      body << buf;
    }
    body << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, const char* anchor = "start") {
    body << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" "
         << "font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
         << "</text>\n";
  }

  void axes(const std::string& xlabel, const std::string& ylabel) {
    body << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
         << "\" height=\"" << height - mt - mb
         << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double fx = xmin + (xmax - xmin) * i / 4.0;
      const double fy = ymin + (ymax - ymin) * i / 4.0;
      text(px(fx), height - mb + 18, format_double(fx, 4), "middle");
      text(ml - 8, py(fy) + 4, format_double(fy, 4), "end");
    }
    text((ml + width - mr) / 2, height - 12, xlabel, "middle");
    text(16, mt + 10, ylabel);
  }

  std::string finish() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body.str() << "</svg>\n";
    return out.str();
  }
};

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad",
                          "#d35400", "#16a085", "#2c3e50", "#7f8c8d"};

}  // namespace

void emit_solution_csv(const Solution& sol, const DomainGeometry& geom,
                       const std::string& path, int precision) {
  std::ostringstream out;
  const GridLayout& g = geom.layout();
  out << (g.dim == 1 ? "t,x,u\n" : "t,x,y,u\n");
  for (int n = 0; n <= sol.values.nt; ++n) {
    const double t = sol.horizon * n / sol.values.nt;
    for (int i = 0; i < sol.values.nodes; ++i) {
      const Vec2 p = g.coords(i);
      out << format_double(t, precision) << ',' << format_double(p.x, precision);
      if (g.dim == 2) out << ',' << format_double(p.y, precision);
      out << ',' << format_double(sol.values.at(n, i), precision) << '\n';
    }
  }
  write_atomically(path, out.str());
}

void emit_table_csv(const Table& table, const std::string& path, int precision) {
  std::ostringstream out;
  for (size_t c = 0; c < table.header.size(); ++c) {
    out << table.header[c] << (c + 1 < table.header.size() ? "," : "");
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out << format_double(row[c], precision) << (c + 1 < row.size() ? "," : "");
    }
    out << '\n';
  }
  write_atomically(path, out.str());
}

void emit_solution_svg(const Solution& sol, const DomainGeometry& geom,
                       const std::string& path) {
  const GridLayout& g = geom.layout();
  SvgCanvas canvas;
  canvas.xmin = 0.0;
  canvas.xmax = geom.length_x();

  const int slices = std::min(6, sol.values.nt + 1);
  double lo = 0.0, hi = 0.0;
  for (double v : sol.values.v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) hi = lo + 1.0;
  canvas.ymin = lo - 0.05 * (hi - lo);
  canvas.ymax = hi + 0.05 * (hi - lo);
  canvas.axes("x", "u");

  const int row = g.dim == 2 ? g.points_y() / 2 : 0;
  for (int s = 0; s < slices; ++s) {
    const int n = slices == 1 ? 0 : s * sol.values.nt / (slices - 1);
    std::vector<double> xs, ys;
    for (int ix = 0; ix < g.points_x(); ++ix) {
      const int idx = g.index(ix, row);
      xs.push_back(ix * g.hx);
      ys.push_back(sol.values.at(n, idx));
    }
    canvas.polyline(xs, ys, kPalette[s % 8]);
    char label[64];
    std::snprintf(label, sizeof(label), "t=%.4g", sol.horizon * n / sol.values.nt);
    canvas.text(canvas.width - 110, canvas.mt + 16 + 14 * s, label);
    canvas.body << "<line x1=\"" << canvas.width - 130 << "\" y1=\""
                << canvas.mt + 12 + 14 * s << "\" x2=\"" << canvas.width - 114
                << "\" y2=\"" << canvas.mt + 12 + 14 * s << "\" stroke=\""
                << kPalette[s % 8] << "\" stroke-width=\"2\"/>\n";
  }
  write_atomically(path, canvas.finish());
}

double fitted_loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) {
    throw std::invalid_argument("fitted_loglog_slope: need at least two points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(h.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(h[i]);
    const double ly = std::log(std::max(err[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void emit_loglog_svg(const Table& table, double fitted_order, const std::string& path) {
  if (table.rows.empty()) {
    throw ConfigError("emit_loglog_svg: empty table, nothing to plot");
  }
  std::vector<double> lx, ly;
  for (const auto& row : table.rows) {
    if (row.size() < 2) throw ConfigError("emit_loglog_svg: need (h, error) columns");
    lx.push_back(std::log10(row[0]));
    ly.push_back(std::log10(std::max(row[1], 1e-300)));
  }
  SvgCanvas canvas;
  canvas.xmin = *std::min_element(lx.begin(), lx.end()) - 0.1;
  canvas.xmax = *std::max_element(lx.begin(), lx.end()) + 0.1;
  canvas.ymin = *std::min_element(ly.begin(), ly.end()) - 0.2;
  canvas.ymax = *std::max_element(ly.begin(), ly.end()) + 0.2;
  canvas.axes("log10 h", "log10 error");
  canvas.polyline(lx, ly, kPalette[0]);
  for (size_t i = 0; i < lx.size(); ++i) {
    canvas.body << "<circle cx=\"" << canvas.px(lx[i]) << "\" cy=\""
                << canvas.py(ly[i]) << "\" r=\"3\" fill=\"" << kPalette[1] << "\"/>\n";
  }
  char label[64];
  std::snprintf(label, sizeof(label), "fitted order %.3f", fitted_order);
  canvas.text(canvas.ml + 12, canvas.mt + 18, label);
  write_atomically(path, canvas.finish());
}

}  // namespace fracpde
