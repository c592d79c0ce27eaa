// Randomized invariants. Each property draws its cases from a seeded Gen so
// that failures are reproducible from the printed case index.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "uavsee/bcd.hpp"

using namespace uavsee;
using namespace uavsee::testing;

namespace {

constexpr int kCases = 100;

Scenario feasible_scenario(Gen& g) {
  const int slots = g.integer(20, 60);
  Scenario sc = random_scenario(g, g.integer(1, 3), g.integer(0, 2), g.integer(1, 4), g.integer(1, 3), slots,
                                g.integer(0, 1) ? 1.0 : 0.5);
  return sc;
}

std::string scenario_doc(const Scenario& sc, bool decibels) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"legit_users\": [";
  for (int k = 0; k < sc.user_count(); ++k) {
    os << (k ? "," : "") << "[" << sc.legit_users[k].x() << "," << sc.legit_users[k].y() << "]";
  }
  os << "], \"eavesdroppers\": [";
  for (int k = 0; k < sc.eve_count(); ++k) {
    os << (k ? "," : "") << "[" << sc.eavesdroppers[k].x() << "," << sc.eavesdroppers[k].y() << "]";
  }
  os << "], \"suav_count\": " << sc.suav_count << ", \"juav_count\": " << sc.juav_count
     << ", \"period_s\": " << sc.period_s << ", \"slot_s\": " << sc.phys.slot_s << ", ";
  if (decibels) {
    os << "\"beta0_db\": -60, \"noise_dbm\": -110}";
  } else {
    os << "\"beta0_linear\": 1e-6, \"noise_w\": 1e-14}";
  }
  return os.str();
}

}  // namespace

TEST(ScenarioProperty, JsonRoundTrip) {
  Gen g(101);
  for (int c = 0; c < kCases; ++c) {
    Scenario sc = feasible_scenario(g);
    if (g.integer(0, 1)) sc.orbit = InitialOrbit{g.point(100), g.uniform(20, 200)};
    sc.phys.altitude_m = g.uniform(50, 200);
    const Scenario back = load_scenario(to_json(sc));
    EXPECT_TRUE(back == sc) << "case " << c;
  }
}

TEST(ScenarioProperty, UnitTagsAgree) {
  Gen g(102);
  for (int c = 0; c < 20; ++c) {
    const Scenario sc = feasible_scenario(g);
    const Scenario a = load_scenario(scenario_doc(sc, true));
    const Scenario b = load_scenario(scenario_doc(sc, false));
    EXPECT_NEAR(a.phys.beta0, b.phys.beta0, 1e-20) << "case " << c;
    EXPECT_NEAR(a.phys.noise_w, b.phys.noise_w, 1e-28) << "case " << c;
    EXPECT_EQ(a.legit_users, b.legit_users);
    EXPECT_EQ(a.slot_count, b.slot_count);
  }
}

TEST(KinematicsProperty, InitializerIsFeasible) {
  Gen g(103);
  int built = 0;
  for (int c = 0; c < kCases; ++c) {
    const Scenario sc = feasible_scenario(g);
    TrajectoryPlan plan;
    try {
      plan = circular_initializer(sc);
    } catch (const PreconditionError&) {
      // Only periods too short for the smallest admissible orbit are rejected.
      EXPECT_DOUBLE_EQ(default_orbit(sc).radius_m, 20.0) << "case " << c;
      continue;
    }
    ++built;
    const auto v = check_feasibility(plan, sc);
    EXPECT_TRUE(v.empty()) << "case " << c << ": " << (v.empty() ? "" : to_string(v.front().constraint));
  }
  EXPECT_GE(built, kCases / 2);
}

TEST(KinematicsProperty, EnergyPositiveAndAdditive) {
  Gen g(104);
  for (int c = 0; c < kCases; ++c) {
    Scenario sc = feasible_scenario(g);
    if (sc.uav_count() < 2) sc.juav_count = 1;
    const TrajectoryPlan plan = random_positions(g, sc);
    const EnergyReport e = propulsion_energy(plan, sc);
    double sum = 0.0;
    for (double x : e.per_uav_j) {
      EXPECT_GT(x, 0.0);
      sum += x;
    }
    EXPECT_NEAR(e.total_j, sum, 1e-9 * sum);
    TrajectoryPlan fewer = plan;
    fewer.uavs.pop_back();
    Scenario smaller = sc;
    smaller.juav_count > 0 ? --smaller.juav_count : --smaller.suav_count;
    EXPECT_LT(propulsion_energy(fewer, smaller).total_j, e.total_j) << "case " << c;
  }
}

TEST(LinkProperty, RatesInvariantUnderCommonScaling) {
  Gen g(105);
  for (int c = 0; c < kCases; ++c) {
    Scenario sc = feasible_scenario(g);
    const TrajectoryPlan plan = random_positions(g, sc);
    const PowerSchedule p = random_powers(g, sc);
    const ScheduleMatrix x = random_schedule(g, sc);
    const RateReport a = secrecy_report(plan, p, x, sc);
    const double s = std::pow(10.0, g.uniform(-3, 3));
    sc.phys.beta0 *= s;
    sc.phys.noise_w *= s;
    const RateReport b = secrecy_report(plan, p, x, sc);
    EXPECT_NEAR(a.sum_bps, b.sum_bps, 1e-6 * std::max(1.0, a.sum_bps)) << "case " << c;
    EXPECT_GE(a.sum_bps, 0.0);
    for (const auto& row : a.secrecy_bps) {
      for (double v : row) EXPECT_GE(v, 0.0);
    }
    for (const auto& row : a.legit_bps) {
      for (double v : row) EXPECT_GE(v, 0.0);
    }
  }
}

TEST(LinkProperty, SingleSuavRateGrowsWithPower) {
  Gen g(106);
  for (int c = 0; c < kCases; ++c) {
    Scenario sc = random_scenario(g, 1, 0, 1, 1, 1);
    const TrajectoryPlan plan = random_positions(g, sc);
    double prev = -1.0;
    for (double w = 0.0; w <= 1.0; w += 0.05) {
      const double r = pair_rate(sc.legit_users[0], 0, 1, plan, PowerSchedule::uniform(1, 1, w), sc);
      EXPECT_GT(r, prev) << "case " << c;
      prev = r;
    }
  }
}

TEST(SchedulingProperty, OutputsAreValid) {
  Gen g(107);
  for (int c = 0; c < kCases; ++c) {
    const int slots = g.integer(1, 5), users = g.integer(1, 5), suavs = g.integer(1, 4);
    const PairSecrecyTable t = random_table(g, slots, users, suavs, -5.0, 5.0);
    for (const ScheduleResult& r : {greedy_schedule(t), exhaustive_schedule(t)}) {
      for (int n = 1; n <= slots; ++n) {
        std::vector<int> load(suavs, 0);
        for (int k = 0; k < users; ++k) {
          const int m = r.schedule.serving(k, n);
          if (m < 0) continue;
          ASSERT_LT(m, suavs);
          EXPECT_GT(t.at(k, m, n), 0.0) << "case " << c;
          EXPECT_LE(++load[m], 1) << "case " << c;
        }
      }
    }
    const ScheduleResult gr = greedy_schedule(t);
    EXPECT_LE(gr.objective, exhaustive_schedule(t).objective + 1e-12);
    EXPECT_LE(gr.comparisons, static_cast<std::int64_t>(slots) * (2 * users * suavs + suavs)) << "case " << c;
  }
}

TEST(SchedulingProperty, DistinctPreferencesMeanEquality) {
  Gen g(108);
  for (int c = 0; c < kCases; ++c) {
    const int users = g.integer(1, 4);
    const int suavs = g.integer(users, 5);
    // Each user's best SUAV is its own index.
    std::vector<std::vector<double>> m(users, std::vector<double>(suavs));
    for (int k = 0; k < users; ++k) {
      for (int j = 0; j < suavs; ++j) m[k][j] = g.uniform(-2.0, 5.0);
      m[k][k] = g.uniform(6.0, 10.0);
    }
    const PairSecrecyTable t = PairSecrecyTable::from_matrices({m});
    EXPECT_DOUBLE_EQ(greedy_schedule(t).objective, exhaustive_schedule(t).objective) << "case " << c;
  }
}

TEST(SchedulingProperty, SlotPermutationCommutes) {
  Gen g(109);
  for (int c = 0; c < 50; ++c) {
    const int slots = g.integer(2, 6);
    const PairSecrecyTable t = random_table(g, slots, g.integer(1, 4), g.integer(1, 3), -3.0, 6.0);
    std::vector<int> perm(slots);
    for (int i = 0; i < slots; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), g.rng);
    std::vector<std::vector<std::vector<double>>> shuffled;
    for (int i : perm) shuffled.push_back(t.value[i]);
    const ScheduleResult a = greedy_schedule(t);
    const ScheduleResult b = greedy_schedule(PairSecrecyTable::from_matrices(shuffled));
    for (int i = 0; i < slots; ++i) EXPECT_EQ(b.schedule.suav_of[i], a.schedule.suav_of[perm[i]]) << "case " << c;
  }
}

TEST(PowerProperty, SurrogateSandwich) {
  Gen g(110);
  for (int c = 0; c < 40; ++c) {
    Scenario sc = random_scenario(g, g.integer(1, 3), g.integer(0, 2), 1, 1, 1);
    const TrajectoryPlan plan = random_positions(g, sc);
    const PowerSchedule p_r = random_powers(g, sc);
    const int m2 = g.integer(0, sc.suav_count - 1);
    const PowerSurrogate tu = build_tilde_upper(0, m2, 1, p_r, plan, sc);
    const PowerSurrogate bu = build_bar_upper(0, m2, 1, p_r, plan, sc);
    const PowerSchedule q = random_powers(g, sc);
    std::vector<double> pv(sc.uav_count());
    for (int i = 0; i < sc.uav_count(); ++i) pv[i] = q.at(i, 1);
    // exact legit rate >= bar - tilde_up, exact eve rate <= bar_up - tilde
    const double legit = pair_rate(sc.legit_users[0], m2, 1, plan, q, sc);
    const double legit_lb = log_received(sc.legit_users[0], all_uavs(sc), 1, pv, plan, sc) - tu(pv);
    const double eve = pair_rate(sc.eavesdroppers[0], m2, 1, plan, q, sc);
    const double eve_ub = bu(pv) - log_received(sc.eavesdroppers[0], interferers(m2, sc), 1, pv, plan, sc);
    const double B = sc.phys.bandwidth_hz;
    EXPECT_GE((legit - legit_lb) / B, -1e-9) << "case " << c;
    EXPECT_LE((eve - eve_ub) / B, 1e-9) << "case " << c;
  }
}

TEST(DinkelbachProperty, ResidualNonIncreasing) {
  Gen g(111);
  for (int c = 0; c < kCases; ++c) {
    // max (a x - b x^2) / (x^2 + d) over [lo, hi] by dense search
    const double a = g.uniform(0.5, 3), b = g.uniform(0, 0.5), d = g.uniform(0.1, 2);
    const double lo = g.uniform(0.1, 1), hi = lo + g.uniform(0.5, 3);
    const auto argmax = [&](double zeta) {
      double best = -1e300, bx = lo;
      for (int i = 0; i <= 4000; ++i) {
        const double x = lo + (hi - lo) * i / 4000.0;
        const double v = a * x - b * x * x - zeta * (x * x + d);
        if (v > best) best = v, bx = x;
      }
      return std::make_pair(a * bx - b * bx * bx, bx * bx + d);
    };
    const ScalarDinkelbachResult r = dinkelbach_scalar(argmax, 1e-10);
    EXPECT_TRUE(r.converged) << "case " << c;
    for (std::size_t i = 1; i < r.history.size(); ++i) {
      EXPECT_LE(r.history[i].F, r.history[i - 1].F + 1e-12) << "case " << c;
      EXPECT_GE(r.history[i].zeta, r.history[i - 1].zeta - 1e-12) << "case " << c;
    }
  }
}
