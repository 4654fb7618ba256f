#pragma once

#include <string>
#include <vector>

#include "fracpde/geometry.hpp"
#include "fracpde/solver.hpp"

namespace fracpde {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Solution CSV: header "t,x,u" (or "t,x,y,u"), rows time-major then
/// space-major, floats printed with `precision` significant digits.
/// Writes atomically (temp file + rename); byte-stable for identical inputs.
void emit_solution_csv(const Solution& sol, const DomainGeometry& geom,
                       const std::string& path, int precision = 17);

void emit_table_csv(const Table& table, const std::string& path, int precision = 17);

/// Line plot of ~6 solution time slices (1D: u vs x; 2D: the midline row),
/// written as a self-contained SVG.
void emit_solution_svg(const Solution& sol, const DomainGeometry& geom,
                       const std::string& path);

/// log-log error-vs-h plot with the fitted order annotated. The table must
/// have columns (h, error) in its first two row entries.
void emit_loglog_svg(const Table& table, double fitted_order, const std::string& path);

/// Least-squares slope of log(err) against log(h).
double fitted_loglog_slope(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace fracpde
