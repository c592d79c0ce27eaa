#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "uavsee/link_model.hpp"
#include "uavsee/scheduling.hpp"
#include "uavsee/trajectory_opt.hpp"

namespace uavsee {

enum class Scheme { kSee, kCircular, kEnergyMin, kRateMax };

std::string to_string(Scheme scheme);
/// Accepts "see", "circular", "energy-min"/"energy_min", "rate-max"/"rate_max".
Scheme parse_scheme(const std::string& text);

/// One BCD iteration. Objectives before/after each stage are the true
/// values at the stage's fixed blocks: the secrecy sum for scheduling and
/// power, the scheme objective for the trajectory stage.
struct BcdIteration {
  int iteration = 0;
  double scheduling_before = 0.0;  // bps
  double scheduling_objective = 0.0;
  double power_before = 0.0;
  double power_objective = 0.0;
  double trajectory_before = 0.0;  // SEE or secrecy sum, see BcdTrace::objective_name
  double trajectory_objective = 0.0;
  double see = 0.0;                // in BcdOptions::units
  double secrecy_bps = 0.0;
  double energy_j = 0.0;
  double wall_s = 0.0;
  bool schedule_accepted = false;
  bool power_accepted = false;
  bool trajectory_accepted = false;
  int power_sca_iterations = 0;
  int trajectory_sca_iterations = 0;
  std::vector<TrajectoryTraceRow> trajectory_rows;
};

struct RunTrace {
  Scheme scheme = Scheme::kSee;
  SeeUnits units = SeeUnits::kBpsPerJoule;
  std::string objective_name;      // "see" or "secrecy_sum"
  double initial_see = 0.0;
  double initial_energy_j = 0.0;
  std::vector<BcdIteration> iterations;
  std::string termination;         // "epsilon", "iteration_cap" or "failure"
  std::string error;               // stage failure message

  std::vector<double> see_column() const;
};

struct BcdOptions {
  SchedulerKind scheduler = SchedulerKind::kGreedy;
  SeeUnits units = SeeUnits::kBpsPerJoule;
  int max_iterations = 25;
  double epsilon = -1.0;            // negative: the scenario's tolerance
  PowerLoopOptions power;
  TrajectoryLoopOptions trajectory;
  std::function<void(const BcdIteration&)> on_iteration;
};

struct RunResult {
  ScheduleMatrix schedule;
  PowerSchedule powers;
  TrajectoryPlan plan;
  RunTrace trace;
  double see = 0.0;
  double secrecy_bps = 0.0;
  double energy_j = 0.0;
  bool ok = true;
};

/// Alternating scheduling, power and trajectory optimization for maximum
/// secrecy energy efficiency. Starts from the circular plan at P_max/2.
RunResult run_see(const Scenario& sc, const BcdOptions& opts = {});

/// Benchmark schemes. circular: trajectory frozen at the initializer.
/// energy_min: minimum-energy trajectory first, then frozen. rate_max: the
/// trajectory stage maximizes the secrecy sum.
RunResult run_benchmark(const Scenario& sc, Scheme scheme, const BcdOptions& opts = {});

struct SweepRow {
  double period_s = 0.0;
  int slot_count = 0;
  double slot_s = 0.0;
  double see = 0.0;
  double secrecy_bps = 0.0;
  double energy_j = 0.0;
  int iterations = 0;
  double wall_s = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepOptions {
  int slot_count = 0;    // > 0: hold N fixed and set delta = T / N; 0: keep delta
  int max_parallel = 0;  // 0: hardware concurrency
};

/// One full run per period. Per-period failures are recorded and the sweep
/// continues.
std::vector<SweepRow> sweep_period(const Scenario& tmpl, const std::vector<double>& periods,
                                   Scheme scheme, const BcdOptions& opts = {},
                                   const SweepOptions& sweep = {});

/// Seeded default layouts. 'A': 1 SUAV, 2 users, 1 eavesdropper.
/// 'B': A plus one JUAV. 'C': 2 SUAVs, 2 JUAVs, 4 users, 2 eavesdroppers.
/// Users are uniform on a 400 m disc around the origin; eavesdroppers sit
/// 300-600 m from the user centroid.
Scenario layout_scenario(char layout, std::uint64_t seed, double period_s = 40.0,
                         double slot_s = 1.0);

}  // namespace uavsee
