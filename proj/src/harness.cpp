#include "esav/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "esav/config.hpp"
#include "esav/initial_conditions.hpp"

namespace esav {

std::string_view to_string(SchemeId id) {
  switch (id) {
    case SchemeId::Esav1: return "esav1";
    case SchemeId::EsavCn: return "esav-cn";
    case SchemeId::Sav1: return "sav1";
    case SchemeId::SavCn: return "sav-cn";
    case SchemeId::Mesav1: return "mesav1";
  }
  return "unknown";
}

SchemeId scheme_from_string(std::string_view name) {
  for (auto id : {SchemeId::Esav1, SchemeId::EsavCn, SchemeId::Sav1, SchemeId::SavCn, SchemeId::Mesav1})
    if (to_string(id) == name) return id;
  throw InvalidArgument("unknown scheme '" + std::string(name) + "' (esav1, esav-cn, sav1, sav-cn, mesav1)");
}

int scheme_order(SchemeId id) { return id == SchemeId::EsavCn || id == SchemeId::SavCn ? 2 : 1; }

bool is_sav(SchemeId id) { return id == SchemeId::Sav1 || id == SchemeId::SavCn; }

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InvalidArgument(field + ": " + what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

long RunConfig::steps() const {
  require(positive(dt), "dt", "must be finite and positive");
  require(positive(t_final), "t_final", "must be finite and positive");
  require(dt <= t_final * (1.0 + 1e-12), "dt", "exceeds t_final");
  const double ratio = t_final / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
    std::ostringstream msg;
    msg << "t_final " << t_final << " is not an integer multiple of dt " << dt;
    throw InvalidArgument(msg.str());
  }
  return n;
}

void RunConfig::validate() const {
  grid.validate();
  if (two_fields()) {
    surfactant.validate();
    require(positive(inner.tol), "inner_tol", "must be positive");
    require(inner.max_iters >= 1, "inner_max_iters", "must be at least 1");
  } else {
    model.validate();
  }
  steps();
  require(!esav_c || positive(*esav_c), "esav_c", "must be finite and positive");
  require(std::isfinite(sav_c) && sav_c >= 0.0, "sav_c", "must be finite and non-negative");
  require(trace_every >= 1, "trace_every", "must be at least 1");
  for (double t : snapshot_times)
    require(std::isfinite(t) && t >= 0.0 && t <= t_final * (1.0 + 1e-12), "snapshot_times",
            "every time must lie in [0, t_final]");
  for (double h : ladder) require(positive(h), "ladder", "entries must be positive");
  for (double h : energy_dts) require(positive(h), "energy_dts", "entries must be positive");
  require(positive(reference_dt), "reference_dt", "must be positive");
  const auto& ids = initial_condition_ids();
  require(std::find(ids.begin(), ids.end(), initial) != ids.end(), "initial",
          "unknown initial condition '" + initial + "'");
  if (two_fields())
    require(initial.rfind("surfactant", 0) == 0, "initial", "mesav1 needs a two-field initial condition");
}

// ---------------------------------------------------------------------------------------------
// presets

namespace {

struct Preset {
  const char* id;
  const char* description;
  RunConfig (*make)();
};

RunConfig table1() {
  RunConfig c;
  c.example = "example1";
  c.grid = Grid::square(128);
  c.model = ModelSpec::allen_cahn(0.1, 1.0);
  c.scheme = SchemeId::Esav1;
  c.dt = 1.6e-4;
  c.t_final = 0.032;
  c.initial = "sine-product";
  c.ladder = {1.6e-4, 8e-5, 4e-5, 2e-5, 1e-5};
  c.reference_dt = 1e-8;
  return c;
}

RunConfig table2() {
  RunConfig c = table1();
  c.example = "example1-ch";
  c.model = ModelSpec::cahn_hilliard(0.1, 0.1);
  c.scheme = SchemeId::EsavCn;
  // 3.2M steps of roundoff would swamp second-order errors below 1e-10
  c.reference_dt = 1e-6;
  return c;
}

RunConfig linear_test() {
  RunConfig c = table1();
  c.example = "linear-test";
  c.grid = Grid::square(32);
  c.model = ModelSpec::linear_test(1.0);
  c.t_final = 0.1;
  c.dt = 1e-2;
  c.ladder = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
  c.reference_dt = 1e-6;
  return c;
}

RunConfig bubbles() {
  RunConfig c;
  c.example = "example2";
  c.grid = Grid(256, 256, 1.0, 1.0);
  c.model = ModelSpec::allen_cahn(0.01, 1.0);
  c.scheme = SchemeId::Esav1;
  c.dt = 1e-3;
  c.t_final = 6.0;
  c.initial = "two-bubbles";
  c.snapshot_times = {0.0, 0.02, 0.5, 1.5, 4.0, 5.6};
  c.trace_every = 10;
  c.energy_dts = {0.001, 0.01, 0.1, 1.0, 2.0};
  return c;
}

RunConfig spinodal() {
  RunConfig c;
  c.example = "example3";
  c.grid = Grid::square(256);
  c.model = ModelSpec::cahn_hilliard(0.02, 0.1);
  c.scheme = SchemeId::Esav1;
  c.dt = 0.01;
  c.t_final = 20.0;
  c.initial = "random-spinodal";
  c.snapshot_times = {0.02, 0.5, 3.0, 20.0};
  c.trace_every = 10;
  return c;
}

RunConfig crystal_full() {
  RunConfig c;
  c.example = "example4";
  c.grid = Grid(512, 512, 800.0, 800.0);
  c.model = ModelSpec::phase_field_crystal(0.25);
  c.scheme = SchemeId::Esav1;
  c.dt = 0.1;
  c.t_final = 1200.0;
  c.initial = "crystallites";
  c.snapshot_times = {0.0, 150.0, 400.0, 600.0, 900.0, 1200.0};
  c.trace_every = 10;
  c.energy_dts = {0.01, 0.1, 1.0};
  return c;
}

RunConfig crystal_reduced() {
  RunConfig c = crystal_full();
  c.example = "example4-reduced";
  c.grid = Grid(256, 256, 400.0, 400.0);
  c.t_final = 300.0;
  c.snapshot_times = {0.0, 150.0, 300.0};
  return c;
}

RunConfig crystallization() {
  RunConfig c;
  c.example = "example5";
  c.grid = Grid(256, 256, 128.0, 128.0);
  c.model = ModelSpec::phase_field_crystal(0.025);
  c.scheme = SchemeId::Esav1;
  c.dt = 0.1;
  c.t_final = 6000.0;
  c.initial = "random-crystal";
  c.snapshot_times = {200.0, 500.0, 1200.0, 6000.0};
  c.trace_every = 100;
  return c;
}

RunConfig table3() {
  RunConfig c;
  c.example = "example6";
  c.grid = Grid::square(128);
  c.scheme = SchemeId::Mesav1;
  c.surfactant = SurfactantSpec{};
  c.dt = 1e-2;
  c.t_final = 0.1;
  c.initial = "surfactant-modes";
  c.ladder = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};
  c.reference_dt = 1e-5;
  return c;
}

RunConfig surfactant_spinodal() {
  RunConfig c = table3();
  c.example = "example7";
  c.surfactant.epsilon = 0.02;
  c.surfactant.eta = 0.005;
  c.dt = 0.1;
  c.t_final = 2000.0;
  c.initial = "surfactant-random";
  c.snapshot_times = {1, 10, 20, 50, 100, 200, 400, 1000, 1500, 2000};
  c.trace_every = 10;
  c.ladder.clear();
  return c;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = {
      {"example1", "Allen-Cahn, eps=0.1, 128^2 on [0,2pi]^2, T=0.032, first-order ladder", table1},
      {"example1-ch", "Cahn-Hilliard, eps=0.1, M=0.1, same datum, Crank-Nicolson ladder", table2},
      {"linear-test", "heat flow with F=0, closed-form mode decay", linear_test},
      {"example2", "Allen-Cahn two kissing bubbles on [0,1]^2, 256^2, T=6", bubbles},
      {"example3", "Cahn-Hilliard spinodal decomposition, 256^2, T=20", spinodal},
      {"example4", "phase-field crystal growth on [0,800]^2, 512^2, T=1200 (long)", crystal_full},
      {"example4-reduced", "phase-field crystal growth on [0,400]^2, 256^2, T=300", crystal_reduced},
      {"example5", "phase-field crystallization on [0,128]^2, 256^2, T=6000 (long)", crystallization},
      {"example6", "fluid-surfactant accuracy test, 128^2, T=0.1, first-order ladder", table3},
      {"example7", "fluid-surfactant spinodal decomposition, 128^2, T=2000 (long)", surfactant_spinodal},
  };
  return p;
}

const Preset& find_preset(std::string_view id) {
  for (const auto& p : presets())
    if (id == p.id) return p;
  throw InvalidArgument("unknown example '" + std::string(id) + "'");
}

}  // namespace

RunConfig example_config(std::string_view id) { return find_preset(id).make(); }

std::vector<std::string> example_ids() {
  std::vector<std::string> ids;
  for (const auto& p : presets()) ids.emplace_back(p.id);
  return ids;
}

std::string example_description(std::string_view id) { return find_preset(id).description; }

// ---------------------------------------------------------------------------------------------
// monitors and recording

std::string MonitorReport::summary() const {
  std::ostringstream s;
  s << "energy " << (energy_ok ? "monotone" : "INCREASED");
  if (!energy_ok)
    s << " (" << energy_violations << " steps, first at step " << first_energy_violation
      << ", max relative increase " << max_energy_increase << ")";
  s << "; mass drift " << max_mass_drift << (mass_ok ? "" : " EXCEEDS TOLERANCE");
  return s.str();
}

namespace {

struct SnapshotPlan {
  long step;
  double requested;
};

std::string snapshot_name(const std::string& field, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_t%g.snap", field.c_str(), t);
  return buf;
}

class Recorder {
 public:
  Recorder(const RunConfig& cfg, const RunOptions& opt, RunResult& result, double dt)
      : cfg_(cfg), opt_(opt), result_(result), dt_(dt) {
    writing_ = opt.write_outputs && !cfg.out_dir.empty();
    for (double t : cfg.snapshot_times) plan_.push_back({std::lround(t / dt), t});
    std::sort(plan_.begin(), plan_.end(), [](auto& a, auto& b) { return a.step < b.step; });
    if (writing_) {
      ensure_directory(cfg.out_dir);
      write_text(cfg.out_dir + "/config.ini", to_ini(cfg));
    }
  }

  void start(const TraceRow& row0, const Field& phi, const Field* rho) {
    mass0_ = row0.mass;
    mass_rho0_ = row0.mass_rho;
    prev_energy_ = row0.modified_energy;
    push(row0);
    snapshots(0, phi, rho);
  }

  void step(long n, const TraceRow& row, const StepDiagnostics& d, const Field& phi, const Field* rho) {
    result_.total_solves += d.linear_solves_performed;
    result_.max_inner_iterations = std::max(result_.max_inner_iterations, d.inner_solver_iterations);
    result_.max_inner_update = std::max(result_.max_inner_update, d.inner_final_update);
    result_.max_ledger_residual = std::max(result_.max_ledger_residual, d.ledger_identity_residual);
    result_.max_exponent = std::max(result_.max_exponent, d.max_exponent_arg);
    if (cfg_.checks) monitor(n, row);
    if (n % cfg_.trace_every == 0 || n == total_steps_) push(row);
    snapshots(n, phi, rho);
    if (opt_.on_step) opt_.on_step(n, row.t, d);
  }

  void finish() {
    if (writing_) write_trace_csv(cfg_.out_dir + "/trace.csv", trace_, cfg_.two_fields());
    if (opt_.keep_trace) result_.trace = std::move(trace_);
  }

  long total_steps_ = 0;

 private:
  void monitor(long n, const TraceRow& row) {
    MonitorReport& m = result_.monitors;
    const double increase = (row.modified_energy - prev_energy_) / (1.0 + std::abs(prev_energy_));
    if (!(increase <= kEnergySlack)) {
      m.energy_ok = false;
      ++m.energy_violations;
      if (m.first_energy_violation < 0) m.first_energy_violation = n;
    }
    if (std::isfinite(increase)) m.max_energy_increase = std::max(m.max_energy_increase, increase);
    prev_energy_ = row.modified_energy;
    if (cfg_.conserves_mass()) {
      double drift = std::abs(row.mass - mass0_) / (1.0 + std::abs(mass0_));
      if (cfg_.two_fields()) drift = std::max(drift, std::abs(row.mass_rho - mass_rho0_) / (1.0 + std::abs(mass_rho0_)));
      m.max_mass_drift = std::max(m.max_mass_drift, drift);
      if (!(drift <= kMassSlack)) m.mass_ok = false;
    }
  }

  void push(const TraceRow& row) {
    if (opt_.keep_trace || writing_) trace_.push_back(row);
  }

  void snapshots(long n, const Field& phi, const Field* rho) {
    if (!writing_) return;
    for (const auto& p : plan_) {
      if (p.step != n) continue;
      const double t = static_cast<double>(n) * dt_;
      write_snapshot(cfg_.out_dir + "/" + snapshot_name("phi", p.requested), cfg_.grid, t, phi);
      if (rho) write_snapshot(cfg_.out_dir + "/" + snapshot_name("rho", p.requested), cfg_.grid, t, *rho);
    }
  }

  const RunConfig& cfg_;
  const RunOptions& opt_;
  RunResult& result_;
  double dt_;
  bool writing_ = false;
  std::vector<SnapshotPlan> plan_;
  std::vector<TraceRow> trace_;
  double mass0_ = 0.0, mass_rho0_ = 0.0, prev_energy_ = 0.0;
};

TraceRow make_row(double t, const StepDiagnostics& d, double aux, double aux2 = 0.0) {
  TraceRow r;
  r.t = t;
  r.original_energy = d.original_energy;
  r.modified_energy = d.modified_energy;
  r.s_r = aux;
  r.s_q = aux2;
  r.mass = d.mass;
  r.mass_rho = d.mass_rho;
  r.inner_iters = d.inner_solver_iterations;
  r.solves = d.linear_solves_performed;
  return r;
}

void run_scalar(const RunConfig& cfg, Recorder& rec, RunResult& out, Field phi0, long n, double dt) {
  GradientFlow flow(cfg.model, cfg.grid);
  StepDiagnostics d0;
  d0.original_energy = original_energy(flow.fourier(), cfg.model, phi0);
  d0.mass = integral(cfg.grid, phi0);
  out.initial_original_energy = d0.original_energy;

  if (is_sav(cfg.scheme)) {
    SavState st = make_sav_state(flow, std::move(phi0), cfg.sav_c);
    out.c_value = st.c_shift;
    d0.modified_energy = modified_energy(flow, st);
    out.initial_modified_energy = d0.modified_energy;
    rec.start(make_row(0.0, d0, st.r), st.phi, nullptr);
    const bool cn = cfg.scheme == SchemeId::SavCn;
    for (long k = 1; k <= n; ++k) {
      auto res = cn ? sav_step_cn(flow, st, dt) : sav_step_first(flow, st, dt);
      st = std::move(res.state);
      rec.step(k, make_row(static_cast<double>(k) * dt, res.diagnostics, st.r), res.diagnostics, st.phi, nullptr);
    }
    out.phi = std::move(st.phi);
  } else {
    EsavState st = make_esav_state(flow, std::move(phi0), cfg.esav_c);
    out.c_value = st.c_scale;
    d0.modified_energy = modified_energy(flow, st);
    out.initial_modified_energy = d0.modified_energy;
    rec.start(make_row(0.0, d0, st.s), st.phi, nullptr);
    const bool cn = cfg.scheme == SchemeId::EsavCn;
    for (long k = 1; k <= n; ++k) {
      auto res = cn ? esav_step_cn(flow, st, dt) : esav_step_first(flow, st, dt);
      st = std::move(res.state);
      rec.step(k, make_row(static_cast<double>(k) * dt, res.diagnostics, st.s), res.diagnostics, st.phi, nullptr);
    }
    out.final_gap = std::abs(st.c_scale * st.s - flow.e1(st.phi));
    out.phi = std::move(st.phi);
  }
}

void run_surfactant(const RunConfig& cfg, Recorder& rec, RunResult& out, InitialData init, long n, double dt) {
  SurfactantFlow flow(cfg.surfactant, cfg.grid);
  StepDiagnostics d0;
  d0.original_energy = original_energy(flow.fourier(), cfg.surfactant, init.phi, *init.rho);
  d0.mass = integral(cfg.grid, init.phi);
  d0.mass_rho = integral(cfg.grid, *init.rho);
  SurfactantState st = make_surfactant_state(flow, std::move(init.phi), std::move(*init.rho));
  d0.modified_energy = modified_energy(flow, st);
  out.initial_original_energy = d0.original_energy;
  out.initial_modified_energy = d0.modified_energy;
  rec.start(make_row(0.0, d0, st.s_r, st.s_q), st.phi, &st.rho);
  for (long k = 1; k <= n; ++k) {
    auto res = surfactant_step(flow, st, dt, cfg.inner);
    st = std::move(res.state);
    rec.step(k, make_row(static_cast<double>(k) * dt, res.diagnostics, st.s_r, st.s_q), res.diagnostics, st.phi,
             &st.rho);
  }
  out.phi = std::move(st.phi);
  out.rho = std::move(st.rho);
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const long n = cfg.steps();
  const double dt = cfg.t_final / static_cast<double>(n);
  const double width = cfg.two_fields() ? cfg.surfactant.epsilon : cfg.model.epsilon;
  InitialData init = initial_condition(cfg.initial, cfg.grid, cfg.seed, width);

  RunResult out;
  out.steps = n;
  out.dt = dt;
  out.time = cfg.t_final;
  Recorder rec(cfg, options, out, dt);
  rec.total_steps_ = n;
  if (cfg.two_fields()) {
    run_surfactant(cfg, rec, out, std::move(init), n, dt);
  } else {
    run_scalar(cfg, rec, out, std::move(init.phi), n, dt);
  }
  rec.finish();
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// ---------------------------------------------------------------------------------------------
// studies

int worker_count() {
  if (const char* env = std::getenv("ESAV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
    throw ConfigError("ESAV_THREADS must be a positive integer, got '" + std::string(env) + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min<size_t>(n, static_cast<size_t>(worker_count()));
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

std::string dt_tag(double dt) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", dt);
  return buf;
}

}  // namespace

ConvergenceReport convergence_study(const RunConfig& cfg, const std::vector<double>& ladder, double reference_dt) {
  if (ladder.empty()) throw InvalidArgument("ladder: at least one time step is required");
  RunConfig base = cfg;
  base.out_dir.clear();
  base.snapshot_times.clear();
  base.reference_dt = reference_dt;
  base.ladder = ladder;
  base.validate();

  // job 0 is the reference: it is the longest, so it starts first
  std::vector<double> dts{reference_dt};
  dts.insert(dts.end(), ladder.begin(), ladder.end());
  std::vector<RunResult> runs(dts.size());
  RunOptions opt;
  opt.keep_trace = false;
  opt.write_outputs = false;
  parallel_for(dts.size(), [&](size_t i) {
    RunConfig c = base;
    c.dt = dts[i];
    runs[i] = run_simulation(c, opt);
  });

  ConvergenceReport rep;
  rep.scheme = cfg.scheme;
  rep.reference_dt = reference_dt;
  rep.two_fields = cfg.two_fields();
  const RunResult& ref = runs[0];
  std::ostringstream summary;
  for (size_t i = 0; i < dts.size(); ++i) {
    if (!runs[i].monitors.ok()) {
      rep.monitors_ok = false;
      summary << "dt=" << dts[i] << ": " << runs[i].monitors.summary() << "\n";
    }
    if (i == 0) continue;
    ConvergenceRow row;
    row.dt = dts[i];
    row.error_phi = l2_norm(cfg.grid, runs[i].phi - ref.phi);
    if (rep.two_fields) row.error_rho = l2_norm(cfg.grid, *runs[i].rho - *ref.rho);
    rep.rows.push_back(row);
    rep.wall_seconds.push_back(runs[i].wall_seconds);
    rep.solves.push_back(runs[i].total_solves);
    rep.steps.push_back(runs[i].steps);
  }
  fill_rates(rep.rows);
  rep.monitor_summary = summary.str();
  if (!cfg.out_dir.empty()) {
    ensure_directory(cfg.out_dir);
    write_text(cfg.out_dir + "/config.ini", to_ini(base));
    write_convergence_csv(cfg.out_dir + "/convergence_" + std::string(to_string(cfg.scheme)) + ".csv", rep.rows,
                          rep.two_fields);
  }
  return rep;
}

bool ComparisonReport::errors_ordered() const {
  if (esav.rows.size() != sav.rows.size()) return false;
  for (size_t i = 0; i < esav.rows.size(); ++i)
    if (!(esav.rows[i].error_phi < sav.rows[i].error_phi)) return false;
  return true;
}

ComparisonReport compare_sav_esav(const RunConfig& cfg, const std::vector<double>& ladder, double reference_dt) {
  if (cfg.two_fields()) throw InvalidArgument("scheme: compare needs a scalar model, not mesav1");
  const bool second = scheme_order(cfg.scheme) == 2;
  RunConfig esav_cfg = cfg;
  esav_cfg.scheme = second ? SchemeId::EsavCn : SchemeId::Esav1;
  RunConfig sav_cfg = cfg;
  sav_cfg.scheme = second ? SchemeId::SavCn : SchemeId::Sav1;

  ComparisonReport rep;
  rep.esav = convergence_study(esav_cfg, ladder, reference_dt);
  rep.sav = convergence_study(sav_cfg, ladder, reference_dt);
  for (size_t i = 0; i < rep.esav.rows.size(); ++i) {
    rep.esav_wall_seconds += rep.esav.wall_seconds[i];
    rep.esav_solves += rep.esav.solves[i];
    rep.esav_steps += rep.esav.steps[i];
  }
  for (size_t i = 0; i < rep.sav.rows.size(); ++i) {
    rep.sav_wall_seconds += rep.sav.wall_seconds[i];
    rep.sav_solves += rep.sav.solves[i];
    rep.sav_steps += rep.sav.steps[i];
  }
  if (!cfg.out_dir.empty()) {
    std::ostringstream s;
    s << "scheme,steps,solves,wall_seconds\n"
      << to_string(esav_cfg.scheme) << ',' << rep.esav_steps << ',' << rep.esav_solves << ','
      << format_double(rep.esav_wall_seconds) << '\n'
      << to_string(sav_cfg.scheme) << ',' << rep.sav_steps << ',' << rep.sav_solves << ','
      << format_double(rep.sav_wall_seconds) << '\n';
    write_text(cfg.out_dir + "/cost.csv", s.str());
  }
  return rep;
}

std::vector<LadderEntry> energy_ladder(const RunConfig& cfg, const std::vector<double>& dts) {
  if (dts.empty()) throw InvalidArgument("energy_dts: at least one time step is required");
  std::vector<LadderEntry> entries(dts.size());
  RunOptions opt;
  opt.write_outputs = false;
  parallel_for(dts.size(), [&](size_t i) {
    RunConfig c = cfg;
    c.dt = dts[i];
    c.out_dir.clear();
    entries[i].dt = dts[i];
    entries[i].result = run_simulation(c, opt);
  });
  if (!cfg.out_dir.empty()) {
    ensure_directory(cfg.out_dir);
    write_text(cfg.out_dir + "/config.ini", to_ini(cfg));
    for (const auto& e : entries)
      write_trace_csv(cfg.out_dir + "/trace_dt" + dt_tag(e.dt) + ".csv", e.result.trace, cfg.two_fields());
  }
  return entries;
}

}  // namespace esav
