#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "uavsee/kinematics.hpp"

using namespace uavsee;
using namespace uavsee::testing;

namespace {

Scenario one_uav(double period_s, double slot_s) {
  Scenario sc;
  sc.phys = default_physics();
  sc.phys.slot_s = slot_s;
  sc.period_s = period_s;
  sc.slot_count = derive_slot_count(period_s, slot_s);
  sc.legit_users = {Vec2(0, 0)};
  sc.eavesdroppers = {Vec2(300, 0)};
  return sc;
}

int count_kind(const std::vector<Violation>& v, ConstraintKind k) {
  int c = 0;
  for (const auto& x : v) c += x.constraint == k;
  return c;
}

}  // namespace

TEST(Energy, SingleSlotHandValue) {
  Scenario sc = one_uav(0.5, 0.5);
  TrajectoryPlan plan = TrajectoryPlan::zeros(1, 1, 0.5);
  for (auto& v : plan.uavs[0].v) v = Vec2(30.0, 0.0);
  const EnergyReport e = propulsion_energy(plan, sc);
  EXPECT_NEAR(e.total_j, 0.5 * (9.26e-4 * 27000.0 + 2250.0 / 30.0), 1e-9);
  EXPECT_NEAR(e.total_j, 50.001, 1e-9);
}

TEST(Energy, MinimumPowerSpeed) {
  const PhysicalParams p = default_physics();
  double best_v = 0.0;
  double best = 1e300;
  for (int i = 1; i <= 500000; ++i) {
    const double v = 50.0 * i / 500000.0;
    const double w = level_flight_power(v, p);
    if (w < best) {
      best = w;
      best_v = v;
    }
  }
  EXPECT_NEAR(best_v, std::pow(p.c2 / (3.0 * p.c1), 0.25), 1e-3);
  EXPECT_NEAR(best_v, 30.0, 0.1);
}

TEST(Energy, LinearInSlotLength) {
  Scenario a = one_uav(4.0, 1.0);
  Scenario b = one_uav(8.0, 2.0);
  TrajectoryPlan pa = TrajectoryPlan::zeros(1, 4, 1.0);
  for (std::size_t n = 0; n < pa.uavs[0].v.size(); ++n) {
    pa.uavs[0].v[n] = Vec2(10.0 + n, 3.0);
    pa.uavs[0].a[n] = Vec2(0.5, -1.0 * n);
  }
  TrajectoryPlan pb = pa;
  pb.slot_s = 2.0;
  const EnergyReport ea = propulsion_energy(pa, a);
  const EnergyReport eb = propulsion_energy(pb, b);
  EXPECT_NEAR(eb.total_j, 2.0 * ea.total_j, 1e-9 * ea.total_j);
  EXPECT_NEAR(eb.per_uav_j[0], 2.0 * ea.per_uav_j[0], 1e-9 * ea.total_j);
}

TEST(Energy, ZeroSpeedIsADomainError) {
  Scenario sc = one_uav(2.0, 1.0);
  TrajectoryPlan plan = TrajectoryPlan::zeros(1, 2, 1.0);
  plan.uavs[0].v[1] = Vec2(5.0, 0.0);
  EXPECT_THROW(propulsion_energy(plan, sc), DomainError);
}

TEST(Energy, CircleMatchesClosedForm) {
  const PhysicalParams p = default_physics();
  Scenario sc = one_uav(80.0, 0.5);
  const TrajectoryPlan plan = exact_circle_plan(200.0, 80.0, 160, 0.5);
  const double e = propulsion_energy(plan, sc).total_j;
  const double ref = oracle_circle_energy(200.0, 80.0, 160, 0.5, p);
  EXPECT_LE(std::abs(e - ref) / ref, 1e-9);
}

TEST(Circular, SpeedOfTheExampleOrbit) {
  Scenario sc = one_uav(80.0, 0.5);
  const TrajectoryPlan plan = circular_initializer(sc, Vec2::Zero(), 200.0);
  EXPECT_NEAR(plan.uavs[0].v[0].norm(), 2.0 * M_PI * 200.0 / 80.0, 1e-9);
  EXPECT_NEAR(plan.uavs[0].v[0].norm(), 15.708, 1e-3);
}

TEST(Circular, DynamicsHoldExactly) {
  Scenario sc = one_uav(40.0, 1.0);
  sc.juav_count = 2;
  const TrajectoryPlan plan = circular_initializer(sc, Vec2(10.0, -20.0), 120.0);
  EXPECT_TRUE(check_feasibility(plan, sc).empty());
  FeasibilityTolerances tight;
  tight.position_m = 1e-6;
  tight.velocity_mps = 1e-9;
  EXPECT_TRUE(check_feasibility(plan, sc, tight).empty());
  for (const auto& u : plan.uavs) {
    EXPECT_EQ(u.q.front(), u.q.back());
    EXPECT_EQ(u.v.front(), u.v.back());
  }
  EXPECT_NEAR((plan.uavs[1].q[0] - Vec2(10.0, -20.0)).norm(), 130.0, 1e-9);
}

TEST(Circular, RejectsDegenerateAndInfeasibleOrbits) {
  Scenario sc = one_uav(40.0, 1.0);
  EXPECT_THROW(circular_initializer(sc, Vec2::Zero(), 0.0), PreconditionError);
  try {
    circular_initializer(sc, Vec2::Zero(), 400.0);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("speed"), std::string::npos);
  }
  Scenario fast = one_uav(10.0, 1.0);
  try {
    circular_initializer(fast, Vec2::Zero(), 70.0);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("acceleration"), std::string::npos);
  }
}

TEST(Feasibility, ConstructedViolations) {
  Scenario sc = one_uav(40.0, 1.0);
  const TrajectoryPlan ok = circular_initializer(sc, Vec2::Zero(), 100.0);
  EXPECT_TRUE(check_feasibility(ok, sc).empty());

  TrajectoryPlan fast = ok;
  fast.uavs[0].v[7] = fast.uavs[0].v[7].normalized() * 51.0;
  const auto vs = check_feasibility(fast, sc);
  ASSERT_EQ(count_kind(vs, ConstraintKind::kSpeed), 1);
  for (const auto& v : vs) {
    if (v.constraint == ConstraintKind::kSpeed) {
      EXPECT_EQ(v.slot, 7);
      EXPECT_NEAR(v.magnitude, 1.0, 1e-12);
    }
  }

  TrajectoryPlan open = ok;
  open.uavs[0].q.back() += Vec2(3.0, 4.0);
  const auto vo = check_feasibility(open, sc);
  EXPECT_EQ(count_kind(vo, ConstraintKind::kPositionPeriodicity), 1);

  TrajectoryPlan hard = ok;
  hard.uavs[0].a[3] = Vec2(6.0, 0.0);
  EXPECT_EQ(count_kind(check_feasibility(hard, sc), ConstraintKind::kAcceleration), 1);

  TrajectoryPlan short_plan = TrajectoryPlan::zeros(1, 10, 1.0);
  EXPECT_EQ(check_feasibility(short_plan, sc).front().constraint, ConstraintKind::kShape);
}
