#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace uavsee::testing {

namespace {

double gain(const Scenario& sc, const Vec2& uav, const Vec2& ground) {
  const double dx = uav.x() - ground.x();
  const double dy = uav.y() - ground.y();
  const double H = sc.phys.altitude_m;
  return sc.phys.beta0 / (dx * dx + dy * dy + H * H);
}

std::vector<Vec2> slot_positions(const TrajectoryPlan& plan, int n) {
  std::vector<Vec2> q;
  for (const auto& u : plan.uavs) q.push_back(u.q[n]);
  return q;
}

std::vector<double> slot_powers(const PowerSchedule& powers, int n) {
  std::vector<double> p;
  for (const auto& row : powers.p) p.push_back(row[n - 1]);
  return p;
}

}  // namespace

double oracle_rate(const Scenario& sc, const std::vector<Vec2>& q, const std::vector<double>& p,
                   const Vec2& ground, int suav) {
  double interference = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (static_cast<int>(i) == suav) continue;
    interference += p[i] * gain(sc, q[i], ground);
  }
  const double sinr = p[suav] * gain(sc, q[suav], ground) / (interference + sc.phys.noise_w);
  return sc.phys.bandwidth_hz * std::log2(1.0 + sinr);
}

double oracle_slot_secrecy(const Scenario& sc, const std::vector<Vec2>& q,
                           const std::vector<double>& p, const std::vector<int>& suav_of_user) {
  double total = 0.0;
  for (std::size_t k = 0; k < suav_of_user.size(); ++k) {
    const int m = suav_of_user[k];
    if (m < 0) continue;
    double worst = 0.0;
    for (const auto& e : sc.eavesdroppers) worst = std::max(worst, oracle_rate(sc, q, p, e, m));
    total += oracle_rate(sc, q, p, sc.legit_users[k], m) - worst;
  }
  return total;
}

double oracle_secrecy_sum(const TrajectoryPlan& plan, const PowerSchedule& powers,
                          const ScheduleMatrix& x, const Scenario& sc) {
  double total = 0.0;
  for (int n = 1; n <= sc.slot_count; ++n) {
    const auto q = slot_positions(plan, n);
    const auto p = slot_powers(powers, n);
    for (int k = 0; k < sc.user_count(); ++k) {
      const int m = x.suav_of[n - 1][k];
      if (m < 0) continue;
      double worst = 0.0;
      for (const auto& e : sc.eavesdroppers) worst = std::max(worst, oracle_rate(sc, q, p, e, m));
      total += std::max(0.0, oracle_rate(sc, q, p, sc.legit_users[k], m) - worst);
    }
  }
  return total;
}

double oracle_best_assignment(const std::vector<std::vector<double>>& entries) {
  const int users = static_cast<int>(entries.size());
  const int suavs = users == 0 ? 0 : static_cast<int>(entries.front().size());
  std::vector<int> labels;
  for (int m = 0; m < suavs; ++m) labels.push_back(m);
  for (int k = 0; k < users; ++k) labels.push_back(-1);
  std::sort(labels.begin(), labels.end());
  double best = -std::numeric_limits<double>::infinity();
  do {
    double value = 0.0;
    for (int k = 0; k < users; ++k) {
      if (labels[k] >= 0) value += entries[k][labels[k]];
    }
    best = std::max(best, value);
  } while (std::next_permutation(labels.begin(), labels.end()));
  return best;
}

double level_flight_power(double speed, const PhysicalParams& p) {
  return p.c1 * speed * speed * speed + p.c2 / speed;
}

double oracle_circle_energy(double radius, double period_s, int slots, double slot_s,
                            const PhysicalParams& p) {
  const double speed = 2.0 * std::numbers::pi * radius / period_s;
  const double accel = speed * speed / radius;
  const double power = p.c1 * std::pow(speed, 3) + p.c2 / speed * (1.0 + accel * accel / (p.gravity * p.gravity));
  return slots * slot_s * power;
}

TrajectoryPlan exact_circle_plan(double radius, double period_s, int slots, double slot_s,
                                 const Vec2& center) {
  TrajectoryPlan plan = TrajectoryPlan::zeros(1, slots, slot_s);
  const double w = 2.0 * std::numbers::pi / period_s;
  for (int n = 0; n <= slots + 1; ++n) {
    const double th = w * n * slot_s;
    plan.uavs[0].q[n] = center + radius * Vec2(std::cos(th), std::sin(th));
    plan.uavs[0].v[n] = radius * w * Vec2(-std::sin(th), std::cos(th));
    plan.uavs[0].a[n] = -radius * w * w * Vec2(std::cos(th), std::sin(th));
  }
  return plan;
}

Vec2 Gen::in_disc(double radius) {
  const double r = radius * std::sqrt(uniform(0.0, 1.0));
  const double th = uniform(0.0, 2.0 * std::numbers::pi);
  return Vec2(r * std::cos(th), r * std::sin(th));
}

Scenario random_scenario(Gen& g, int suavs, int juavs, int users, int eves, int slots, double slot_s,
                         double spread) {
  Scenario sc;
  sc.phys = default_physics();
  sc.phys.slot_s = slot_s;
  sc.suav_count = suavs;
  sc.juav_count = juavs;
  sc.slot_count = slots;
  sc.period_s = slots * slot_s;
  for (int k = 0; k < users; ++k) sc.legit_users.push_back(g.point(spread));
  for (int e = 0; e < eves; ++e) sc.eavesdroppers.push_back(g.point(spread));
  return sc;
}

TrajectoryPlan random_positions(Gen& g, const Scenario& sc, double spread) {
  TrajectoryPlan plan = TrajectoryPlan::zeros(sc.uav_count(), sc.slot_count, sc.phys.slot_s);
  for (auto& u : plan.uavs) {
    for (std::size_t n = 0; n < u.q.size(); ++n) {
      u.q[n] = g.point(spread);
      u.v[n] = Vec2(g.uniform(5.0, 40.0), g.uniform(-10.0, 10.0));
      u.a[n] = Vec2(g.uniform(-3.0, 3.0), g.uniform(-3.0, 3.0));
    }
  }
  return plan;
}

PowerSchedule random_powers(Gen& g, const Scenario& sc) {
  PowerSchedule p = PowerSchedule::uniform(sc.uav_count(), sc.slot_count, 0.0);
  for (auto& row : p.p) {
    for (auto& w : row) w = g.uniform(0.0, sc.phys.p_max_w);
  }
  return p;
}

ScheduleMatrix random_schedule(Gen& g, const Scenario& sc) {
  ScheduleMatrix x = ScheduleMatrix::empty(sc.slot_count, sc.user_count());
  for (int n = 0; n < sc.slot_count; ++n) {
    std::vector<int> labels;
    for (int m = 0; m < sc.suav_count; ++m) labels.push_back(m);
    for (int k = 0; k < sc.user_count(); ++k) labels.push_back(-1);
    std::shuffle(labels.begin(), labels.end(), g.rng);
    for (int k = 0; k < sc.user_count(); ++k) x.suav_of[n][k] = labels[k];
  }
  return x;
}

PairSecrecyTable random_table(Gen& g, int slots, int users, int suavs, double lo, double hi) {
  std::vector<std::vector<std::vector<double>>> v(slots, std::vector<std::vector<double>>(users, std::vector<double>(suavs)));
  for (auto& s : v) {
    for (auto& row : s) {
      for (auto& e : row) e = g.uniform(lo, hi);
    }
  }
  return PairSecrecyTable::from_matrices(std::move(v));
}

}  // namespace uavsee::testing
