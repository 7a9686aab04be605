#include "esav/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace esav {

namespace {

const char* const kVerbs[] = {"run", "convergence", "compare", "energy-ladder", "list-examples"};

struct Flags {
  std::string config, example, scheme, dt, t_final, seed, out;
  bool no_checks = false;
  std::vector<std::string> positional;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "INI configuration file");
  app->add_option("--example", f.example, "preset id (see list-examples)");
  app->add_option("--scheme", f.scheme, "esav1 | esav-cn | sav1 | sav-cn | mesav1");
  app->add_option("--dt", f.dt, "time step");
  app->add_option("--t-final", f.t_final, "final time");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--out", f.out, "output directory");
  app->add_flag("--no-checks", f.no_checks, "disable the energy and mass monitors");
  app->add_option("overrides", f.positional, "key=value settings applied last");
}

void print_rows(std::ostream& out, const ConvergenceReport& rep) {
  out << "# " << to_string(rep.scheme) << " (reference dt " << rep.reference_dt << ")\n";
  out << convergence_csv(rep.rows, rep.two_fields);
}

}  // namespace

std::optional<Command> parse_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                     int& usage_status) {
  CLI::App app{"Energy-stable phase-field solver (exponential scalar auxiliary variable schemes)", "esav"};
  app.require_subcommand(1, 1);
  std::vector<Flags> flags(std::size(kVerbs));
  std::vector<CLI::App*> subs;
  const char* help[] = {"run one simulation", "time-step convergence study against a fine reference",
                        "E-SAV vs SAV convergence and cost comparison", "one run per step size of energy_dts",
                        "print the example presets"};
  for (size_t i = 0; i < std::size(kVerbs); ++i) {
    subs.push_back(app.add_subcommand(kVerbs[i], help[i]));
    if (std::string(kVerbs[i]) != "list-examples") add_common(subs.back(), flags[i]);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    usage_status = app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    return std::nullopt;
  }
  Command cmd;
  for (size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    cmd.verb = kVerbs[i];
    const Flags& f = flags[i];
    if (!f.config.empty()) cmd.config_path = f.config;
    auto add = [&](const char* key, const std::string& v) {
      if (!v.empty()) cmd.overrides.emplace_back(key, v);
    };
    add("run.example", f.example);
    add("run.scheme", f.scheme);
    add("run.dt", f.dt);
    add("run.t_final", f.t_final);
    add("run.seed", f.seed);
    add("run.out", f.out);
    for (const auto& p : f.positional) cmd.overrides.push_back(parse_override(p));
    if (f.no_checks) cmd.overrides.emplace_back("run.checks", "false");
  }
  return cmd;
}

RunConfig command_config(const Command& cmd) {
  if (cmd.config_path) return parse_config(*cmd.config_path, cmd.overrides);
  return config_from_overrides(cmd.overrides);
}

int dispatch(const Command& cmd, std::ostream& out, std::ostream& err) {
  if (cmd.verb == "list-examples") {
    for (const auto& id : example_ids()) out << std::left << std::setw(18) << id << example_description(id) << "\n";
    return kExitOk;
  }
  const RunConfig cfg = command_config(cmd);
  const int violated = static_cast<int>(ErrorCode::InvariantViolation);

  if (cmd.verb == "run") {
    const RunResult r = run_simulation(cfg);
    out << "example " << (cfg.example.empty() ? "-" : cfg.example) << ", scheme " << to_string(cfg.scheme) << ", "
        << r.steps << " steps of dt " << r.dt << " to t = " << r.time << "\n";
    out << std::setprecision(10) << "energy " << r.initial_original_energy << " -> "
        << (r.trace.empty() ? 0.0 : r.trace.back().original_energy) << ", linear solves " << r.total_solves
        << ", wall " << r.wall_seconds << " s\n";
    if (cfg.two_fields())
      out << "inner iterations max " << r.max_inner_iterations << ", final update max " << r.max_inner_update
          << ", ledger residual max " << r.max_ledger_residual << "\n";
    if (!cfg.out_dir.empty()) out << "outputs in " << cfg.out_dir << "\n";
    if (!cfg.checks) return kExitOk;
    out << "monitors: " << r.monitors.summary() << "\n";
    if (!r.monitors.ok()) {
      err << "invariant monitor failed: " << r.monitors.summary() << "\n";
      return violated;
    }
    return kExitOk;
  }

  if (cmd.verb == "convergence") {
    if (cfg.ladder.empty()) throw ConfigError("ladder: the convergence study needs study.ladder");
    const ConvergenceReport rep = convergence_study(cfg, cfg.ladder, cfg.reference_dt);
    out << convergence_csv(rep.rows, rep.two_fields);
    if (cfg.checks && !rep.monitors_ok) {
      err << "invariant monitor failed:\n" << rep.monitor_summary;
      return violated;
    }
    return kExitOk;
  }

  if (cmd.verb == "compare") {
    if (cfg.ladder.empty()) throw ConfigError("ladder: the comparison needs study.ladder");
    const ComparisonReport rep = compare_sav_esav(cfg, cfg.ladder, cfg.reference_dt);
    print_rows(out, rep.esav);
    print_rows(out, rep.sav);
    out << "# cost over the ladder\nscheme,steps,solves,wall_seconds\n"
        << to_string(rep.esav.scheme) << ',' << rep.esav_steps << ',' << rep.esav_solves << ','
        << format_double(rep.esav_wall_seconds) << '\n'
        << to_string(rep.sav.scheme) << ',' << rep.sav_steps << ',' << rep.sav_solves << ','
        << format_double(rep.sav_wall_seconds) << '\n';
    int status = kExitOk;
    if (!rep.solve_count_ok()) {
      err << "E-SAV performed " << rep.esav_solves << " solves, not fewer than SAV's " << rep.sav_solves << "\n";
      status = violated;
    }
    if (cfg.checks && !(rep.esav.monitors_ok && rep.sav.monitors_ok)) {
      err << "invariant monitor failed:\n" << rep.esav.monitor_summary << rep.sav.monitor_summary;
      status = violated;
    }
    return status;
  }

  if (cmd.verb == "energy-ladder") {
    if (cfg.energy_dts.empty()) throw ConfigError("energy_dts: the energy ladder needs study.energy_dts");
    const auto entries = energy_ladder(cfg, cfg.energy_dts);
    int status = kExitOk;
    out << "dt,steps,E_modified_initial,E_modified_final,monotone,max_relative_increase\n";
    for (const auto& e : entries) {
      const auto& r = e.result;
      out << format_double(e.dt) << ',' << r.steps << ',' << format_double(r.initial_modified_energy) << ','
          << format_double(r.trace.empty() ? 0.0 : r.trace.back().modified_energy) << ','
          << (r.monitors.energy_ok ? "yes" : "no") << ',' << format_double(r.monitors.max_energy_increase) << '\n';
      if (cfg.checks && !r.monitors.ok()) {
        err << "dt=" << e.dt << ": invariant monitor failed: " << r.monitors.summary() << "\n";
        status = violated;
      }
    }
    return status;
  }
  throw InvalidArgument("unknown verb '" + cmd.verb + "'");
}

int exit_status(const std::exception& e) {
  if (const auto* ee = dynamic_cast<const Error*>(&e)) return static_cast<int>(ee->code());
  return kExitInternal;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    int usage = kExitUsage;
    const auto cmd = parse_command(argc, argv, out, err, usage);
    if (!cmd) return usage;
    return dispatch(*cmd, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_status(e);
  }
}

}  // namespace esav
