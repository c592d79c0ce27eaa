#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavsee/bcd.hpp"

namespace uavsee {

/// Library version string.
const char* library_version();

// Columns uav_id, slot, qx, qy, vx, vy, ax, ay for slots 0..N+1, 12 significant digits.
void write_trajectory_csv(std::ostream& out, const TrajectoryPlan& plan);
/// Throws ParseError on malformed rows or missing samples.
TrajectoryPlan read_trajectory_csv(std::istream& in, double slot_s);

// Columns uav_id, slot, watts for slots 1..N.
void write_power_csv(std::ostream& out, const PowerSchedule& powers);
PowerSchedule read_power_csv(std::istream& in, int uav_count, int slot_count);

// Columns slot, user, suav, slot_objective; only scheduled triples are listed.
// slot_objective is the scheduled secrecy of the slot in bps (empty vector: omitted values).
void write_schedule_csv(std::ostream& out, const ScheduleMatrix& x,
                        const std::vector<double>& slot_objective = {});
ScheduleMatrix read_schedule_csv(std::istream& in, int slot_count, int user_count);

// Columns user, slot, legit_bps, eve_bps, secrecy_bps.
void write_rates_csv(std::ostream& out, const RateReport& rates);
/// Totals per user and overall, as a JSON object.
std::string rates_summary_json(const RateReport& rates);

struct RunConfig {
  std::string scenario_path;
  Scheme scheme = Scheme::kSee;
  SchedulerKind scheduler = SchedulerKind::kGreedy;
  SeeUnits units = SeeUnits::kBpsPerJoule;
  std::uint64_t seed = 0;
};

/// run.json: trace, config echo, scenario echo, summary and versions.
std::string run_json(const RunResult& result, const Scenario& sc, const RunConfig& config);

std::string sweep_json(const std::vector<SweepRow>& rows, Scheme scheme, SeeUnits units);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace uavsee
