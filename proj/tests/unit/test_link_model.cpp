#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "uavsee/link_model.hpp"

using namespace uavsee;
using namespace uavsee::testing;

namespace {

Scenario single_link(int juavs = 0) {
  Scenario sc;
  sc.phys = default_physics();
  sc.phys.slot_s = 1.0;
  sc.period_s = 1.0;
  sc.slot_count = 1;
  sc.juav_count = juavs;
  sc.legit_users = {Vec2(0, 0)};
  sc.eavesdroppers = {Vec2(500, 0)};
  return sc;
}

}  // namespace

TEST(Channel, GainExamples) {
  Scenario sc = single_link();
  EXPECT_NEAR(channel_gain(Vec2(0, 0), Vec2(0, 0), sc), 1e-10, 1e-24);
  EXPECT_NEAR(channel_gain(Vec2(300, 400), Vec2(0, 0), sc), 1e-6 / 260000.0, 1e-22);
  sc.phys.altitude_m = 1.0;
  sc.phys.beta0 = 1.0;
  EXPECT_DOUBLE_EQ(channel_gain(Vec2(5, 5), Vec2(5, 5), sc), 1.0);
}

TEST(Rate, UserDirectlyBelow) {
  Scenario sc = single_link();
  TrajectoryPlan plan = TrajectoryPlan::zeros(1, 1, 1.0);
  const PowerSchedule p = PowerSchedule::uniform(1, 1, 1.0);
  const double r = pair_rate(Vec2(0, 0), 0, 1, plan, p, sc);
  EXPECT_NEAR(r, 1e6 * std::log2(10001.0), 1e-6);
  EXPECT_NEAR(r, 1.3288e7, 1e3);
}

TEST(Rate, ZeroPowerGivesZeroRate) {
  Scenario sc = single_link();
  TrajectoryPlan plan = TrajectoryPlan::zeros(1, 1, 1.0);
  EXPECT_EQ(pair_rate(Vec2(0, 0), 0, 1, plan, PowerSchedule::uniform(1, 1, 0.0), sc), 0.0);
}

TEST(Rate, JammerStrictlyReducesRate) {
  Scenario sc = single_link(1);
  TrajectoryPlan plan = TrajectoryPlan::zeros(2, 1, 1.0);
  plan.uavs[1].q[1] = Vec2(200, 100);
  PowerSchedule p = PowerSchedule::uniform(2, 1, 1.0);
  p.p[1][0] = 0.0;
  const double quiet = pair_rate(Vec2(0, 0), 0, 1, plan, p, sc);
  p.p[1][0] = 0.3;
  const double jammed = pair_rate(Vec2(0, 0), 0, 1, plan, p, sc);
  EXPECT_LT(jammed, quiet);
}

TEST(Secrecy, UnscheduledUserHasNoSecrecy) {
  Scenario sc = single_link();
  TrajectoryPlan plan = TrajectoryPlan::zeros(1, 1, 1.0);
  const RateReport r = secrecy_report(plan, PowerSchedule::uniform(1, 1, 1.0),
                                      ScheduleMatrix::empty(1, 1), sc);
  EXPECT_EQ(r.sum_bps, 0.0);
  EXPECT_EQ(r.total_bps[0], 0.0);
}

TEST(Secrecy, ColocatedEavesdropperCancels) {
  Scenario sc = single_link();
  sc.eavesdroppers = {Vec2(0, 0)};
  TrajectoryPlan plan = TrajectoryPlan::zeros(1, 1, 1.0);
  plan.uavs[0].q[1] = Vec2(30, -40);
  ScheduleMatrix x = ScheduleMatrix::empty(1, 1);
  x.suav_of[0][0] = 0;
  const RateReport r = secrecy_report(plan, PowerSchedule::uniform(1, 1, 0.7), x, sc);
  EXPECT_GT(r.legit_bps[0][0], 0.0);
  EXPECT_EQ(r.secrecy_bps[0][0], 0.0);
}

TEST(Secrecy, MatchesIndependentEvaluator) {
  Gen g(2024);
  for (int trial = 0; trial < 40; ++trial) {
    Scenario sc = random_scenario(g, g.integer(1, 3), g.integer(0, 2), g.integer(1, 4), g.integer(1, 3),
                                  g.integer(1, 5));
    const TrajectoryPlan plan = random_positions(g, sc);
    const PowerSchedule p = random_powers(g, sc);
    const ScheduleMatrix x = random_schedule(g, sc);
    const double ref = oracle_secrecy_sum(plan, p, x, sc);
    const double got = secrecy_report(plan, p, x, sc).sum_bps;
    EXPECT_LE(std::abs(got - ref), 1e-9 * std::max(1.0, std::abs(ref))) << "trial " << trial;
  }
}

TEST(Validation, PowersAndSchedules) {
  Scenario sc = single_link(1);
  sc.suav_count = 2;
  sc.juav_count = 0;
  sc.legit_users = {Vec2(0, 0), Vec2(10, 0)};
  EXPECT_NO_THROW(validate_powers(PowerSchedule::uniform(2, 1, 1.0), sc));
  EXPECT_THROW(validate_powers(PowerSchedule::uniform(2, 1, 1.5), sc), ValidationError);
  EXPECT_THROW(validate_powers(PowerSchedule::uniform(2, 1, -0.1), sc), ValidationError);

  ScheduleMatrix x = ScheduleMatrix::empty(1, 2);
  x.suav_of[0] = {0, 1};
  EXPECT_NO_THROW(validate_schedule(x, sc));
  EXPECT_EQ(x.x(0, 0, 1), 1);
  EXPECT_EQ(x.x(0, 1, 1), 0);
  x.suav_of[0] = {1, 1};
  EXPECT_THROW(validate_schedule(x, sc), ValidationError);
  x.suav_of[0] = {2, -1};
  EXPECT_THROW(validate_schedule(x, sc), ValidationError);
}

TEST(See, UnitConventions) {
  EXPECT_DOUBLE_EQ(secrecy_energy_efficiency(1000.0, 10.0, 0.5, SeeUnits::kBpsPerJoule), 100.0);
  EXPECT_DOUBLE_EQ(secrecy_energy_efficiency(1000.0, 10.0, 0.5, SeeUnits::kBitsPerJoule), 50.0);
  EXPECT_EQ(parse_see_units(to_string(SeeUnits::kBitsPerJoule)), SeeUnits::kBitsPerJoule);
  EXPECT_THROW(parse_see_units("joules"), ValidationError);
}
