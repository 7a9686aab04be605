#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esav/io.hpp"
#include "esav/surfactant.hpp"

namespace esav {

enum class SchemeId { Esav1, EsavCn, Sav1, SavCn, Mesav1 };

std::string_view to_string(SchemeId id);
SchemeId scheme_from_string(std::string_view name);
/// Formal order in time.
int scheme_order(SchemeId id);
bool is_sav(SchemeId id);

struct RunConfig {
  std::string example;
  Grid grid = Grid::square(128);
  ModelSpec model = ModelSpec::allen_cahn(0.1, 1.0);
  SurfactantSpec surfactant;
  InnerSolverConfig inner;
  SchemeId scheme = SchemeId::Esav1;
  double dt = 1.6e-4;
  double t_final = 0.032;
  /// E-SAV scale C; max(1,|E1(phi0)|) when unset.
  std::optional<double> esav_c;
  /// SAV shift C under the square root.
  double sav_c = 1.0;
  std::uint64_t seed = 1;
  std::string initial = "sine-product";
  std::string out_dir;
  std::vector<double> snapshot_times;
  int trace_every = 1;
  bool checks = true;

  // study settings
  std::vector<double> ladder;
  double reference_dt = 1e-8;
  std::vector<double> energy_dts;

  bool two_fields() const { return scheme == SchemeId::Mesav1; }
  bool conserves_mass() const { return two_fields() || model.conserves_mass(); }
  /// Number of steps T/dt; throws unless T is an integer multiple of dt (relative 1e-9).
  long steps() const;
  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

/// Preset configuration of a named example.
RunConfig example_config(std::string_view id);
std::vector<std::string> example_ids();
std::string example_description(std::string_view id);

/// Modified-energy and mass monitors evaluated after every step.
struct MonitorReport {
  bool energy_ok = true;
  bool mass_ok = true;
  long energy_violations = 0;
  long first_energy_violation = -1;  // step index
  double max_energy_increase = 0.0;  // relative to 1 + |E^n|
  double max_mass_drift = 0.0;       // relative to 1 + |int phi0|, max over fields
  bool ok() const { return energy_ok && mass_ok; }
  std::string summary() const;
};

/// |E^{n+1}| slack for the monotonicity check, relative to 1 + |E^n|.
inline constexpr double kEnergySlack = 1e-8;
/// Mass drift tolerance relative to 1 + |int phi0|.
inline constexpr double kMassSlack = 1e-12;

struct RunOptions {
  bool keep_trace = true;     // store trace rows in the result
  bool write_outputs = true;  // write trace, snapshots and config when out_dir is set
  /// Called after every accepted step with (step index, time, diagnostics).
  std::function<void(long, double, const StepDiagnostics&)> on_step;
};

struct RunResult {
  Field phi;
  std::optional<Field> rho;
  double time = 0.0;
  long steps = 0;
  double dt = 0.0;
  std::vector<TraceRow> trace;
  MonitorReport monitors;
  long total_solves = 0;
  int max_inner_iterations = 0;
  double max_inner_update = 0.0;
  double max_ledger_residual = 0.0;
  double max_exponent = 0.0;
  double initial_original_energy = 0.0;
  double initial_modified_energy = 0.0;
  double c_value = 0.0;  // C actually used (E-SAV scale or SAV shift)
  /// |C s - E1(phi)| at the final step (E-SAV schemes).
  double final_gap = 0.0;
  double wall_seconds = 0.0;
};

RunResult run_simulation(const RunConfig& cfg, const RunOptions& options = {});

struct ConvergenceReport {
  SchemeId scheme = SchemeId::Esav1;
  double reference_dt = 0.0;
  bool two_fields = false;
  std::vector<ConvergenceRow> rows;
  std::vector<double> wall_seconds;  // per ladder entry
  std::vector<long> solves;          // per ladder entry
  std::vector<long> steps;           // per ladder entry
  bool monitors_ok = true;
  std::string monitor_summary;
};

/// Runs the reference and every ladder entry (concurrently, see ESAV_THREADS) and reports L2 errors
/// at T against the reference. Writes convergence_<scheme>.csv when cfg.out_dir is set.
ConvergenceReport convergence_study(const RunConfig& cfg, const std::vector<double>& ladder, double reference_dt);

struct ComparisonReport {
  ConvergenceReport esav;
  ConvergenceReport sav;
  double esav_wall_seconds = 0.0;
  double sav_wall_seconds = 0.0;
  long esav_solves = 0;
  long sav_solves = 0;
  long esav_steps = 0;
  long sav_steps = 0;
  bool solve_count_ok() const { return esav_solves < sav_solves; }
  bool errors_ordered() const;  // error(E-SAV) < error(SAV) at every ladder entry
};

/// E-SAV vs SAV of the same order as cfg.scheme.
ComparisonReport compare_sav_esav(const RunConfig& cfg, const std::vector<double>& ladder, double reference_dt);

struct LadderEntry {
  double dt = 0.0;
  RunResult result;
};

/// One full run per dt with traces kept; writes trace_dt<dt>.csv per entry when cfg.out_dir is set.
std::vector<LadderEntry> energy_ladder(const RunConfig& cfg, const std::vector<double>& dts);

/// Worker count from ESAV_THREADS (>= 1), else the hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads; rethrows the lowest-index failure.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace esav
