// uavsee: command-line front end for the secrecy energy efficiency solver.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "uavsee/bcd.hpp"
#include "uavsee/csv_io.hpp"

namespace fs = std::filesystem;
using namespace uavsee;

namespace {

struct ScenarioSource {
  std::string path;
  std::string layout;
  std::uint64_t seed = 1;
  double period_s = 40.0;
  double slot_s = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--scenario", path, "Scenario JSON file");
    cmd->add_option("--layout", layout, "Generate a default layout instead (A, B or C)")
        ->check(CLI::IsMember({"A", "B", "C"}));
    cmd->add_option("--seed", seed, "Seed for the generated layout");
    cmd->add_option("--period", period_s, "Flight period T [s] for the generated layout");
    cmd->add_option("--slot", slot_s, "Slot length [s] for the generated layout");
  }

  Scenario load() const {
    if (!path.empty()) return load_scenario_file(path);
    if (layout.empty()) throw CLI::ValidationError("either --scenario or --layout is required");
    return layout_scenario(layout[0], seed, period_s, slot_s);
  }

  std::string label() const { return path.empty() ? "layout:" + layout : path; }
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

template <class Fn>
void write_with(const fs::path& p, Fn fn) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  fn(out);
}

void dump_programs(const fs::path& dir, const RunResult& r, const Scenario& sc) {
  fs::create_directories(dir);
  for (int n = 1; n <= sc.slot_count; ++n) {
    auto prog = assemble_p21_slot(n, r.schedule, r.plan, r.powers, sc);
    if (!prog) continue;
    write_with(dir / ("power_slot_" + std::to_string(n) + ".txt"), [&](std::ostream& o) { prog->dump(o); });
  }
  const P33Program p = assemble_p33(r.schedule, r.powers, r.plan, r.trace.iterations.empty() ? 0.0 : r.see, sc);
  write_with(dir / "trajectory.txt", [&](std::ostream& o) { p.prog.dump(o); });
}

std::vector<double> parse_periods(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy energy efficiency planner for multi-UAV networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  // optimize
  ScenarioSource opt_src;
  std::string scheme_text = "see";
  std::string scheduler_text = "greedy";
  std::string units_text = "bps-per-joule";
  std::string out_dir = "out";
  bool dump = false;
  bool quiet = false;
  auto* optimize = app.add_subcommand("optimize", "Run one scheme and write plans and trace");
  opt_src.attach(optimize);
  optimize->add_option("--scheme", scheme_text, "see | circular | energy-min | rate-max");
  optimize->add_option("--scheduler", scheduler_text, "greedy | exhaustive");
  optimize->add_option("--see-units", units_text, "bps-per-joule | bits-per-joule");
  optimize->add_option("--out", out_dir, "Output directory");
  optimize->add_flag("--dump-programs", dump, "Write the convex programs at the final point");
  optimize->add_flag("-q,--quiet", quiet, "No per-iteration progress");

  // sweep
  ScenarioSource sw_src;
  std::string periods_text;
  std::string sw_scheme = "see";
  std::string sw_units = "bits-per-joule";
  std::string sw_out = "sweep";
  int sw_slots = 0;
  int sw_parallel = 0;
  auto* sweep = app.add_subcommand("sweep", "One run per flight period");
  sw_src.attach(sweep);
  sweep->add_option("--periods", periods_text, "Comma-separated periods [s]")->required();
  sweep->add_option("--scheme", sw_scheme, "see | circular | energy-min | rate-max");
  sweep->add_option("--see-units", sw_units, "bps-per-joule | bits-per-joule");
  sweep->add_option("--slots", sw_slots, "Hold N fixed (slot length T/N); 0 keeps the slot length");
  sweep->add_option("--jobs", sw_parallel, "Concurrent runs (0: all cores)");
  sweep->add_option("--out", sw_out, "Output directory");

  // eval
  ScenarioSource ev_src;
  std::string ev_traj, ev_power, ev_sched, ev_units = "bps-per-joule";
  auto* eval = app.add_subcommand("eval", "Evaluate given plans without optimizing");
  ev_src.attach(eval);
  eval->add_option("--trajectory", ev_traj, "Trajectory CSV")->required();
  eval->add_option("--power", ev_power, "Power CSV")->required();
  eval->add_option("--schedule", ev_sched, "Schedule CSV")->required();
  eval->add_option("--see-units", ev_units, "bps-per-joule | bits-per-joule");

  // validate
  ScenarioSource va_src;
  std::string va_traj;
  auto* validate_cmd = app.add_subcommand("validate", "Check a trajectory against the mobility constraints");
  va_src.attach(validate_cmd);
  validate_cmd->add_option("--trajectory", va_traj, "Trajectory CSV")->required();

  // generate
  std::string gen_layout = "A";
  std::uint64_t gen_seed = 1;
  double gen_period = 40.0, gen_slot = 1.0;
  auto* generate = app.add_subcommand("generate", "Print a default-layout scenario as JSON");
  generate->add_option("--layout", gen_layout, "A, B or C")->check(CLI::IsMember({"A", "B", "C"}));
  generate->add_option("--seed", gen_seed, "Layout seed");
  generate->add_option("--period", gen_period, "Flight period T [s]");
  generate->add_option("--slot", gen_slot, "Slot length [s]");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*optimize) {
      const Scenario sc = opt_src.load();
      RunConfig cfg{opt_src.label(), parse_scheme(scheme_text), parse_scheduler(scheduler_text),
                    parse_see_units(units_text), opt_src.seed};
      BcdOptions opts;
      opts.scheduler = cfg.scheduler;
      opts.units = cfg.units;
      if (!quiet) {
        opts.on_iteration = [](const BcdIteration& it) {
          std::cerr << "iteration " << it.iteration << ": SEE " << it.see << ", secrecy " << it.secrecy_bps
                    << " bps, energy " << it.energy_j << " J (" << it.wall_s << " s)\n";
        };
      }
      const RunResult r = run_benchmark(sc, cfg.scheme, opts);
      const fs::path dir(out_dir);
      fs::create_directories(dir);
      write_file(dir / "run.json", run_json(r, sc, cfg));
      write_with(dir / "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, r.plan); });
      write_with(dir / "power.csv", [&](std::ostream& o) { write_power_csv(o, r.powers); });
      const RateReport rates = secrecy_report(r.plan, r.powers, r.schedule, sc);
      std::vector<double> slot_obj(sc.slot_count, 0.0);
      for (const auto& per_user : rates.secrecy_bps) {
        for (int n = 0; n < sc.slot_count; ++n) slot_obj[n] += per_user[n];
      }
      write_with(dir / "schedule.csv", [&](std::ostream& o) { write_schedule_csv(o, r.schedule, slot_obj); });
      write_with(dir / "rates.csv", [&](std::ostream& o) { write_rates_csv(o, rates); });
      if (dump) dump_programs(dir / "programs", r, sc);
      std::cout << "scheme " << to_string(cfg.scheme) << ": SEE " << r.see << " (" << to_string(cfg.units)
                << "), secrecy " << r.secrecy_bps << " bps, energy " << r.energy_j << " J, "
                << r.trace.iterations.size() << " iterations, " << r.trace.termination << "\n";
      if (!r.ok) {
        std::cerr << "run failed: " << r.trace.error << "\n";
        return 3;
      }
      return 0;
    }

    if (*sweep) {
      const Scenario tmpl = sw_src.load();
      const Scheme scheme = parse_scheme(sw_scheme);
      BcdOptions opts;
      opts.units = parse_see_units(sw_units);
      SweepOptions so;
      so.slot_count = sw_slots;
      so.max_parallel = sw_parallel;
      const auto rows = sweep_period(tmpl, parse_periods(periods_text), scheme, opts, so);
      const fs::path dir(sw_out);
      fs::create_directories(dir);
      write_file(dir / "sweep.json", sweep_json(rows, scheme, opts.units));
      write_with(dir / "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, rows); });
      write_sweep_csv(std::cout, rows);
      for (const auto& r : rows) {
        if (!r.ok) std::cerr << "T = " << r.period_s << ": " << r.error << "\n";
      }
      return 0;
    }

    if (*eval) {
      const Scenario sc = ev_src.load();
      auto tin = open_in(ev_traj);
      auto pin = open_in(ev_power);
      auto xin = open_in(ev_sched);
      const TrajectoryPlan plan = read_trajectory_csv(tin, sc.phys.slot_s);
      const PowerSchedule powers = read_power_csv(pin, sc.uav_count(), sc.slot_count);
      const ScheduleMatrix x = read_schedule_csv(xin, sc.slot_count, sc.user_count());
      validate_powers(powers, sc);
      validate_schedule(x, sc);
      const RateReport rates = secrecy_report(plan, powers, x, sc);
      const EnergyReport energy = propulsion_energy(plan, sc);
      const SeeUnits units = parse_see_units(ev_units);
      nlohmann::json j;
      j["secrecy_bps"] = rates.sum_bps;
      j["per_user_bps"] = rates.total_bps;
      j["energy_J"] = energy.total_j;
      j["per_uav_energy_J"] = energy.per_uav_j;
      j["see"] = secrecy_energy_efficiency(rates.sum_bps, energy.total_j, sc.phys.slot_s, units);
      j["see_units"] = to_string(units);
      j["mobility_violations"] = check_feasibility(plan, sc).size();
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*validate_cmd) {
      const Scenario sc = va_src.load();
      auto tin = open_in(va_traj);
      const TrajectoryPlan plan = read_trajectory_csv(tin, sc.phys.slot_s);
      const auto violations = check_feasibility(plan, sc);
      for (const auto& v : violations) {
        std::cout << to_string(v.constraint) << " uav " << v.uav << " slot " << v.slot << " magnitude "
                  << v.magnitude << "\n";
      }
      std::cout << (violations.empty() ? "feasible" : "infeasible") << "\n";
      return violations.empty() ? 0 : 2;
    }

    if (*generate) {
      std::cout << to_json(layout_scenario(gen_layout[0], gen_seed, gen_period, gen_slot)) << "\n";
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
