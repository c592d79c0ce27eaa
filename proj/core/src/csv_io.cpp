#include "uavsee/csv_io.hpp"

#include <Eigen/Core>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#ifndef UAVSEE_VERSION
#define UAVSEE_VERSION "0.0.0"
#endif

namespace uavsee {

using nlohmann::json;

const char* library_version() { return UAVSEE_VERSION; }

namespace {

constexpr int kDigits = 12;

// Splits the data lines of a CSV with the expected header into numeric rows.
std::vector<std::vector<double>> read_rows(std::istream& in, const std::string& header,
                                           std::size_t min_cols) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV, expected header '" + header + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind(header, 0) != 0) throw ParseError("CSV header '" + line + "' does not start with '" + header + "'");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": '" + cell + "' is not a number");
      }
    }
    if (row.size() < min_cols) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(min_cols) +
                       " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int as_index(double v, const char* what) {
  if (!std::isfinite(v) || v != std::floor(v)) throw ParseError(std::string(what) + " must be an integer");
  return static_cast<int>(v);
}

json trajectory_rows_json(const std::vector<TrajectoryTraceRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"sca_iter", r.sca_iter},
                   {"dinkelbach_iter", r.dinkelbach_iter},
                   {"zeta", r.zeta},
                   {"F", r.F},
                   {"true_value", r.true_value},
                   {"energy_J", r.energy_j},
                   {"secrecy_sum", r.secrecy_bps}});
  }
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryPlan& plan) {
  out << "uav_id,slot,qx,qy,vx,vy,ax,ay\n" << std::setprecision(kDigits);
  for (int i = 0; i < plan.uav_count(); ++i) {
    const UavTrack& u = plan.uavs[i];
    for (std::size_t n = 0; n < u.q.size(); ++n) {
      out << i << ',' << n << ',' << u.q[n].x() << ',' << u.q[n].y() << ',' << u.v[n].x() << ','
          << u.v[n].y() << ',' << u.a[n].x() << ',' << u.a[n].y() << '\n';
    }
  }
}

TrajectoryPlan read_trajectory_csv(std::istream& in, double slot_s) {
  const auto rows = read_rows(in, "uav_id,slot,qx,qy,vx,vy,ax,ay", 8);
  int uavs = 0;
  int samples = 0;
  for (const auto& r : rows) {
    uavs = std::max(uavs, as_index(r[0], "uav_id") + 1);
    samples = std::max(samples, as_index(r[1], "slot") + 1);
  }
  if (uavs == 0 || samples < 3) throw ParseError("trajectory CSV holds no complete track");
  TrajectoryPlan plan = TrajectoryPlan::zeros(uavs, samples - 2, slot_s);
  std::vector<std::vector<char>> seen(uavs, std::vector<char>(samples, 0));
  for (const auto& r : rows) {
    const int i = as_index(r[0], "uav_id");
    const int n = as_index(r[1], "slot");
    if (i < 0 || n < 0) throw ParseError("negative uav_id or slot");
    if (seen[i][n]) throw ParseError("duplicate sample for uav " + std::to_string(i) + " slot " + std::to_string(n));
    seen[i][n] = 1;
    for (int c = 2; c < 8; ++c) {
      if (!std::isfinite(r[c])) throw ParseError("non-finite value in trajectory CSV");
    }
    plan.uavs[i].q[n] = Vec2(r[2], r[3]);
    plan.uavs[i].v[n] = Vec2(r[4], r[5]);
    plan.uavs[i].a[n] = Vec2(r[6], r[7]);
  }
  for (int i = 0; i < uavs; ++i) {
    for (int n = 0; n < samples; ++n) {
      if (!seen[i][n]) throw ParseError("missing sample for uav " + std::to_string(i) + " slot " + std::to_string(n));
    }
  }
  return plan;
}

void write_power_csv(std::ostream& out, const PowerSchedule& powers) {
  out << "uav_id,slot,watts\n" << std::setprecision(kDigits);
  for (int i = 0; i < powers.uav_count(); ++i) {
    for (int n = 1; n <= powers.slot_count(); ++n) out << i << ',' << n << ',' << powers.at(i, n) << '\n';
  }
}

PowerSchedule read_power_csv(std::istream& in, int uav_count, int slot_count) {
  const auto rows = read_rows(in, "uav_id,slot,watts", 3);
  PowerSchedule p = PowerSchedule::uniform(uav_count, slot_count, 0.0);
  std::vector<std::vector<char>> seen(uav_count, std::vector<char>(slot_count, 0));
  for (const auto& r : rows) {
    const int i = as_index(r[0], "uav_id");
    const int n = as_index(r[1], "slot");
    if (i < 0 || i >= uav_count || n < 1 || n > slot_count) {
      throw ParseError("power sample (" + std::to_string(i) + ", " + std::to_string(n) + ") out of range");
    }
    if (!std::isfinite(r[2])) throw ParseError("non-finite power");
    p.p[i][n - 1] = r[2];
    seen[i][n - 1] = 1;
  }
  for (int i = 0; i < uav_count; ++i) {
    for (int n = 0; n < slot_count; ++n) {
      if (!seen[i][n]) throw ParseError("missing power for uav " + std::to_string(i) + " slot " + std::to_string(n + 1));
    }
  }
  return p;
}

void write_schedule_csv(std::ostream& out, const ScheduleMatrix& x, const std::vector<double>& slot_objective) {
  out << "slot,user,suav,slot_objective\n" << std::setprecision(kDigits);
  for (int n = 1; n <= x.slot_count(); ++n) {
    for (int k = 0; k < x.user_count(); ++k) {
      const int m = x.serving(k, n);
      if (m < 0) continue;
      out << n << ',' << k << ',' << m << ',';
      if (static_cast<int>(slot_objective.size()) >= n) out << slot_objective[n - 1];
      out << '\n';
    }
  }
}

ScheduleMatrix read_schedule_csv(std::istream& in, int slot_count, int user_count) {
  const auto rows = read_rows(in, "slot,user,suav", 3);
  ScheduleMatrix x = ScheduleMatrix::empty(slot_count, user_count);
  for (const auto& r : rows) {
    const int n = as_index(r[0], "slot");
    const int k = as_index(r[1], "user");
    const int m = as_index(r[2], "suav");
    if (n < 1 || n > slot_count || k < 0 || k >= user_count || m < 0) {
      throw ParseError("schedule entry (" + std::to_string(n) + ", " + std::to_string(k) + ", " +
                       std::to_string(m) + ") out of range");
    }
    if (x.suav_of[n - 1][k] >= 0) throw ParseError("user " + std::to_string(k) + " scheduled twice in slot " + std::to_string(n));
    x.suav_of[n - 1][k] = m;
  }
  return x;
}

void write_rates_csv(std::ostream& out, const RateReport& rates) {
  out << "user,slot,legit_bps,eve_bps,secrecy_bps\n" << std::setprecision(kDigits);
  for (std::size_t k = 0; k < rates.legit_bps.size(); ++k) {
    for (std::size_t n = 0; n < rates.legit_bps[k].size(); ++n) {
      out << k << ',' << n + 1 << ',' << rates.legit_bps[k][n] << ',' << rates.eve_bps[k][n] << ','
          << rates.secrecy_bps[k][n] << '\n';
    }
  }
}

std::string rates_summary_json(const RateReport& rates) {
  json j;
  j["per_user_bps"] = rates.total_bps;
  j["sum_bps"] = rates.sum_bps;
  return j.dump(2);
}

std::string run_json(const RunResult& result, const Scenario& sc, const RunConfig& config) {
  const RunTrace& t = result.trace;
  json j;
  j["config"] = {{"scenario", config.scenario_path},
                 {"scheme", to_string(config.scheme)},
                 {"scheduler", to_string(config.scheduler)},
                 {"see_units", to_string(config.units)},
                 {"seed", config.seed}};
  j["scenario"] = json::parse(to_json(sc));
  j["versions"] = {{"uavsee", library_version()},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  j["summary"] = {{"ok", result.ok},
                  {"see", result.see},
                  {"secrecy_bps", result.secrecy_bps},
                  {"energy_J", result.energy_j},
                  {"termination", t.termination},
                  {"error", t.error}};
  json iters = json::array();
  for (const auto& it : t.iterations) {
    iters.push_back({{"iteration", it.iteration},
                     {"scheduling_before", it.scheduling_before},
                     {"scheduling_objective", it.scheduling_objective},
                     {"power_before", it.power_before},
                     {"power_objective", it.power_objective},
                     {"trajectory_before", it.trajectory_before},
                     {"trajectory_objective", it.trajectory_objective},
                     {"see", it.see},
                     {"secrecy_bps", it.secrecy_bps},
                     {"energy_J", it.energy_j},
                     {"wall_s", it.wall_s},
                     {"schedule_accepted", it.schedule_accepted},
                     {"power_accepted", it.power_accepted},
                     {"trajectory_accepted", it.trajectory_accepted},
                     {"power_sca_iterations", it.power_sca_iterations},
                     {"trajectory_sca_iterations", it.trajectory_sca_iterations},
                     {"trajectory_trace", trajectory_rows_json(it.trajectory_rows)}});
  }
  j["trace"] = {{"scheme", to_string(t.scheme)},
                {"objective", t.objective_name},
                {"see_units", to_string(t.units)},
                {"initial_see", t.initial_see},
                {"initial_energy_J", t.initial_energy_j},
                {"iterations", iters}};
  return j.dump(2);
}

std::string sweep_json(const std::vector<SweepRow>& rows, Scheme scheme, SeeUnits units) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"T", r.period_s},
                   {"N", r.slot_count},
                   {"delta", r.slot_s},
                   {"see", r.see},
                   {"secrecy_bps", r.secrecy_bps},
                   {"energy_J", r.energy_j},
                   {"iterations", r.iterations},
                   {"wall_s", r.wall_s},
                   {"ok", r.ok},
                   {"error", r.error}});
  }
  json j;
  j["scheme"] = to_string(scheme);
  j["see_units"] = to_string(units);
  j["rows"] = arr;
  return j.dump(2);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "T,N,delta,see,secrecy_bps,energy_J,iterations,ok\n" << std::setprecision(kDigits);
  for (const auto& r : rows) {
    out << r.period_s << ',' << r.slot_count << ',' << r.slot_s << ',' << r.see << ',' << r.secrecy_bps << ','
        << r.energy_j << ',' << r.iterations << ',' << (r.ok ? 1 : 0) << '\n';
  }
}

}  // namespace uavsee
