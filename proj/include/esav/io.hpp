#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esav/grid.hpp"

namespace esav {

struct TraceRow {
  double t = 0.0;
  double original_energy = 0.0;
  double modified_energy = 0.0;
  double s_r = 0.0;  // s (E-SAV), r (SAV) or s_r (surfactant)
  double s_q = 0.0;  // surfactant only
  double mass = 0.0;
  double mass_rho = 0.0;  // surfactant only
  int inner_iters = 0;
  int solves = 0;
};

struct ConvergenceRow {
  double dt = 0.0;
  double error_phi = 0.0;
  std::optional<double> error_rho;
  std::optional<double> rate_phi;
  std::optional<double> rate_rho;
};

/// ln(e_prev / e) / ln(dt_prev / dt) filled in for every row after the first.
void fill_rates(std::vector<ConvergenceRow>& rows);

/// %.17g, enough to round-trip a double.
std::string format_double(double v);

/// Header t,E_original,E_modified,s_r[,s_q],mass[,mass_rho],inner_iters,solves.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows, bool two_fields);
std::vector<TraceRow> read_trace_csv(const std::string& path);

/// Header dt,error_phi[,error_rho],rate_phi[,rate_rho]; the first row's rates are empty.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows, bool two_fields);
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows, bool two_fields);

struct Snapshot {
  Grid grid;
  double time = 0.0;
  Field values;
};

/// "ESAVSNAP v1 <nx> <ny> <lx> <ly> <time>\n" then nx*ny little-endian float64, row-major.
void write_snapshot(const std::string& path, const Grid& grid, double time, const Field& values);
Snapshot read_snapshot(const std::string& path);

void write_text(const std::string& path, const std::string& contents);
void ensure_directory(const std::string& path);

}  // namespace esav
