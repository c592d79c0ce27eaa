#include "uavsee/bcd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace uavsee {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kSee: return "see";
    case Scheme::kCircular: return "circular";
    case Scheme::kEnergyMin: return "energy-min";
    case Scheme::kRateMax: return "rate-max";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& text) {
  if (text == "see") return Scheme::kSee;
  if (text == "circular") return Scheme::kCircular;
  if (text == "energy-min" || text == "energy_min") return Scheme::kEnergyMin;
  if (text == "rate-max" || text == "rate_max") return Scheme::kRateMax;
  throw std::invalid_argument("unknown scheme '" + text + "'");
}

std::vector<double> RunTrace::see_column() const {
  std::vector<double> out;
  out.reserve(iterations.size());
  for (const auto& it : iterations) out.push_back(it.see);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Blocks {
  ScheduleMatrix x;
  PowerSchedule p;
  TrajectoryPlan q;
};

struct Evaluation {
  double secrecy = 0.0;
  double energy = 0.0;
};

Evaluation evaluate(const Blocks& b, const Scenario& sc) {
  return {secrecy_report(b.q, b.p, b.x, sc).sum_bps, propulsion_energy(b.q, sc).total_j};
}

double scheme_objective(Scheme scheme, const Evaluation& e) {
  return scheme == Scheme::kRateMax ? e.secrecy : e.secrecy / e.energy;
}

RunResult run_bcd(const Scenario& sc, Scheme scheme, const BcdOptions& opts) {
  validate(sc);
  const double eps = opts.epsilon >= 0.0 ? opts.epsilon : sc.phys.tolerance;
  const double delta = sc.phys.slot_s;

  RunResult res;
  RunTrace& trace = res.trace;
  trace.scheme = scheme;
  trace.units = opts.units;
  trace.objective_name = scheme == Scheme::kRateMax ? "secrecy_sum" : "see";

  Blocks cur;
  cur.q = circular_initializer(sc);
  cur.p = PowerSchedule::uniform(sc.uav_count(), sc.slot_count, 0.5 * sc.phys.p_max_w);
  cur.x = ScheduleMatrix::empty(sc.slot_count, sc.user_count());

  auto finish = [&](const Blocks& b) {
    const Evaluation e = evaluate(b, sc);
    res.schedule = b.x;
    res.powers = b.p;
    res.plan = b.q;
    res.secrecy_bps = e.secrecy;
    res.energy_j = e.energy;
    res.see = secrecy_energy_efficiency(e.secrecy, e.energy, delta, opts.units);
    return res;
  };

  const Evaluation e0 = evaluate(cur, sc);
  trace.initial_see = secrecy_energy_efficiency(e0.secrecy, e0.energy, delta, opts.units);
  trace.initial_energy_j = e0.energy;

  if (scheme == Scheme::kEnergyMin) {
    TrajectoryLoopOptions topts = opts.trajectory;
    topts.objective = TrajectoryObjective::kEnergyMin;
    try {
      cur.q = sca_trajectory_loop(cur.x, cur.p, cur.q, sc, topts).plan;
    } catch (const std::exception& ex) {
      trace.termination = "failure";
      trace.error = std::string("energy-min trajectory: ") + ex.what();
      res.ok = false;
      return finish(cur);
    }
  }
  const bool move_trajectory = scheme == Scheme::kSee || scheme == Scheme::kRateMax;

  double previous = 0.0;
  for (int l = 1; l <= opts.max_iterations; ++l) {
    const auto t_start = Clock::now();
    BcdIteration row;
    row.iteration = l;
    try {
      // Scheduling at fixed powers and trajectory.
      Evaluation e = evaluate(cur, sc);
      row.scheduling_before = e.secrecy;
      {
        const PairSecrecyTable table = pair_secrecy_table(cur.q, cur.p, sc);
        Blocks cand = cur;
        cand.x = run_scheduler(opts.scheduler, table).schedule;
        const Evaluation ec = evaluate(cand, sc);
        if (ec.secrecy >= e.secrecy) {
          cur = std::move(cand);
          e = ec;
          row.schedule_accepted = true;
        }
      }
      row.scheduling_objective = e.secrecy;

      // Power at fixed schedule and trajectory.
      row.power_before = e.secrecy;
      {
        const PowerLoopResult pr = sca_power_loop(cur.x, cur.q, cur.p, sc, opts.power);
        row.power_sca_iterations = pr.iterations;
        Blocks cand = cur;
        cand.p = pr.powers;
        const Evaluation ec = evaluate(cand, sc);
        if (ec.secrecy >= e.secrecy) {
          cur = std::move(cand);
          e = ec;
          row.power_accepted = true;
        }
      }
      row.power_objective = e.secrecy;

      // Trajectory at fixed schedule and powers.
      row.trajectory_before = scheme_objective(scheme, e);
      if (move_trajectory) {
        TrajectoryLoopOptions topts = opts.trajectory;
        topts.objective = scheme == Scheme::kRateMax ? TrajectoryObjective::kRateMax
                                                     : TrajectoryObjective::kSee;
        const TrajectoryLoopResult tr = sca_trajectory_loop(cur.x, cur.p, cur.q, sc, topts);
        row.trajectory_sca_iterations = tr.iterations;
        row.trajectory_rows = tr.rows;
        Blocks cand = cur;
        cand.q = tr.plan;
        const Evaluation ec = evaluate(cand, sc);
        if (scheme_objective(scheme, ec) >= scheme_objective(scheme, e)) {
          cur = std::move(cand);
          e = ec;
          row.trajectory_accepted = true;
        }
      }
      row.trajectory_objective = scheme_objective(scheme, e);
      row.secrecy_bps = e.secrecy;
      row.energy_j = e.energy;
      row.see = secrecy_energy_efficiency(e.secrecy, e.energy, delta, opts.units);
    } catch (const std::exception& ex) {
      trace.termination = "failure";
      trace.error = "iteration " + std::to_string(l) + ": " + ex.what();
      res.ok = false;
      return finish(cur);
    }
    row.wall_s = std::chrono::duration<double>(Clock::now() - t_start).count();
    trace.iterations.push_back(row);
    if (opts.on_iteration) opts.on_iteration(trace.iterations.back());

    const double value = row.trajectory_objective;
    if (l > 1) {
      const double base = std::abs(previous);
      if (value - previous <= eps * base) {
        trace.termination = "epsilon";
        return finish(cur);
      }
    }
    previous = value;
  }
  trace.termination = "iteration_cap";
  return finish(cur);
}

}  // namespace

RunResult run_see(const Scenario& sc, const BcdOptions& opts) {
  return run_bcd(sc, Scheme::kSee, opts);
}

RunResult run_benchmark(const Scenario& sc, Scheme scheme, const BcdOptions& opts) {
  return run_bcd(sc, scheme, opts);
}

std::vector<SweepRow> sweep_period(const Scenario& tmpl, const std::vector<double>& periods,
                                   Scheme scheme, const BcdOptions& opts,
                                   const SweepOptions& sweep) {
  auto one = [&](double T) {
    SweepRow row;
    row.period_s = T;
    const auto t_start = Clock::now();
    try {
      Scenario sc = tmpl;
      sc.period_s = T;
      if (sweep.slot_count > 0) {
        sc.slot_count = sweep.slot_count;
        sc.phys.slot_s = T / sweep.slot_count;
      } else {
        sc.slot_count = derive_slot_count(T, sc.phys.slot_s);
      }
      row.slot_count = sc.slot_count;
      row.slot_s = sc.phys.slot_s;
      BcdOptions o = opts;
      o.on_iteration = nullptr;
      const RunResult r = run_benchmark(sc, scheme, o);
      row.see = r.see;
      row.secrecy_bps = r.secrecy_bps;
      row.energy_j = r.energy_j;
      row.iterations = static_cast<int>(r.trace.iterations.size());
      row.ok = r.ok;
      row.error = r.trace.error;
    } catch (const std::exception& ex) {
      row.ok = false;
      row.error = ex.what();
    }
    row.wall_s = std::chrono::duration<double>(Clock::now() - t_start).count();
    return row;
  };

  std::vector<SweepRow> rows(periods.size());
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int width = sweep.max_parallel > 0 ? sweep.max_parallel : hw;
  for (std::size_t start = 0; start < periods.size(); start += width) {
    const std::size_t stop = std::min(periods.size(), start + static_cast<std::size_t>(width));
    if (stop - start == 1) {
      rows[start] = one(periods[start]);
      continue;
    }
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, one, periods[i]));
    }
    for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
  }
  return rows;
}

Scenario layout_scenario(char layout, std::uint64_t seed, double period_s, double slot_s) {
  Scenario sc;
  sc.phys = default_physics();
  sc.phys.slot_s = slot_s;
  sc.period_s = period_s;
  sc.slot_count = derive_slot_count(period_s, slot_s);

  int users = 2;
  int eves = 1;
  switch (layout) {
    case 'A': sc.suav_count = 1; sc.juav_count = 0; break;
    case 'B': sc.suav_count = 1; sc.juav_count = 1; break;
    case 'C': sc.suav_count = 2; sc.juav_count = 2; users = 4; eves = 2; break;
    default: throw std::invalid_argument(std::string("unknown layout '") + layout + "'");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  Vec2 centroid = Vec2::Zero();
  for (int k = 0; k < users; ++k) {
    const double r = 400.0 * std::sqrt(unit(rng));
    const double th = two_pi * unit(rng);
    sc.legit_users.emplace_back(r * std::cos(th), r * std::sin(th));
    centroid += sc.legit_users.back();
  }
  centroid /= users;
  for (int e = 0; e < eves; ++e) {
    const double r = 300.0 + 300.0 * unit(rng);
    const double th = two_pi * unit(rng);
    sc.eavesdroppers.emplace_back(centroid.x() + r * std::cos(th), centroid.y() + r * std::sin(th));
  }
  validate(sc);
  return sc;
}

}  // namespace uavsee
