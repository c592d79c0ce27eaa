#include "uavsee/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace uavsee {

TrajectoryPlan TrajectoryPlan::zeros(int uav_count, int slot_count, double slot_s) {
  TrajectoryPlan plan;
  plan.slot_s = slot_s;
  plan.uavs.resize(uav_count);
  for (auto& u : plan.uavs) {
    u.q.assign(slot_count + 2, Vec2::Zero());
    u.v.assign(slot_count + 2, Vec2::Zero());
    u.a.assign(slot_count + 2, Vec2::Zero());
  }
  return plan;
}

double propulsion_power(const Vec2& v, const Vec2& a, const PhysicalParams& p) {
  const double speed = v.norm();
  return p.c1 * speed * speed * speed +
         (p.c2 / speed) * (1.0 + a.squaredNorm() / (p.gravity * p.gravity));
}

EnergyReport propulsion_energy(const TrajectoryPlan& plan, const Scenario& sc) {
  const int n_slots = plan.slot_count();
  EnergyReport rep;
  rep.per_uav_j.assign(plan.uav_count(), 0.0);
  rep.slot_power_w.assign(plan.uav_count(), std::vector<double>(n_slots, 0.0));
  for (int i = 0; i < plan.uav_count(); ++i) {
    const UavTrack& u = plan.uavs[i];
    for (int n = 1; n <= n_slots; ++n) {
      if (!(u.v[n].norm() > 0.0)) {
        std::ostringstream os;
        os << "zero speed for UAV " << i << " at slot " << n
           << ": fixed-wing energy model requires |v| > 0";
        throw DomainError(os.str());
      }
      const double power = propulsion_power(u.v[n], u.a[n], sc.phys);
      rep.slot_power_w[i][n - 1] = power;
      rep.per_uav_j[i] += plan.slot_s * power;
    }
    rep.total_j += rep.per_uav_j[i];
  }
  return rep;
}

TrajectoryPlan circular_initializer(const Scenario& sc, const Vec2& center, double radius) {
  if (!(radius > 0.0)) {
    throw PreconditionError("radius must be strictly positive (a zero-speed orbit violates the fixed-wing model)");
  }
  const int m = sc.uav_count();
  const int n_slots = sc.slot_count;
  const double delta = sc.phys.slot_s;
  const double omega = 2.0 * std::numbers::pi / sc.period_s;
  const double r_max = radius + 10.0 * (m - 1);
  if (omega * r_max > sc.phys.v_max) {
    std::ostringstream os;
    os << "speed limit: 2*pi*r/T = " << omega * r_max << " m/s exceeds v_max = " << sc.phys.v_max;
    throw PreconditionError(os.str());
  }
  if (omega * omega * r_max > sc.phys.a_max) {
    std::ostringstream os;
    os << "acceleration limit: (2*pi/T)^2*r = " << omega * omega * r_max
       << " m/s^2 exceeds a_max = " << sc.phys.a_max;
    throw PreconditionError(os.str());
  }

  TrajectoryPlan plan = TrajectoryPlan::zeros(m, n_slots, delta);
  double centered_sq = 0.0;  // sum_j (j - N/2)^2 over j = 0..N
  for (int j = 0; j <= n_slots; ++j) centered_sq += std::pow(j - 0.5 * n_slots, 2);

  for (int i = 0; i < m; ++i) {
    UavTrack& u = plan.uavs[i];
    const double r = radius + 10.0 * i;
    const double phase = 2.0 * std::numbers::pi * i / m;
    auto exact_velocity = [&](int n) {
      const double th = phase + omega * n * delta;
      return Vec2(-r * omega * std::sin(th), r * omega * std::cos(th));
    };
    const Vec2 q0 = center + r * Vec2(std::cos(phase), std::sin(phase));
    const Vec2 v0 = exact_velocity(0);

    std::vector<Vec2> accel(n_slots + 1);
    for (int n = 0; n <= n_slots; ++n) accel[n] = (exact_velocity(n + 1) - exact_velocity(n)) / delta;

    auto simulate = [&](const std::vector<Vec2>& acc) {
      u.q[0] = q0;
      u.v[0] = v0;
      for (int n = 0; n <= n_slots; ++n) {
        u.q[n + 1] = u.q[n] + u.v[n] * delta + 0.5 * acc[n] * delta * delta;
        u.v[n + 1] = u.v[n] + acc[n] * delta;
      }
    };

    // The sampled circle has period T = N*delta while the recursion spans
    // (N+1)*delta, so close the gap: a uniform shift fixes velocity, a
    // centered ramp (which leaves velocity untouched) fixes position.
    simulate(accel);
    const Vec2 vel_shift = (v0 - u.v[n_slots + 1]) / ((n_slots + 1) * delta);
    for (auto& a : accel) a += vel_shift;
    simulate(accel);
    const Vec2 pos_gap = q0 - u.q[n_slots + 1];
    const Vec2 ramp = -pos_gap / (delta * delta * centered_sq);
    for (int n = 0; n <= n_slots; ++n) accel[n] += ramp * (n - 0.5 * n_slots);
    simulate(accel);

    u.q[n_slots + 1] = u.q[0];
    u.v[n_slots + 1] = u.v[0];
    for (int n = 0; n <= n_slots; ++n) u.a[n] = accel[n];
    u.a[n_slots + 1] = accel[0];
  }

  const auto violations = check_feasibility(plan, sc);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "closed circular orbit breaks " << to_string(violations.front().constraint) << " at UAV "
       << violations.front().uav << ", slot " << violations.front().slot;
    throw PreconditionError(os.str());
  }
  return plan;
}

TrajectoryPlan circular_initializer(const Scenario& sc) {
  const InitialOrbit orbit = sc.orbit ? *sc.orbit : default_orbit(sc);
  return circular_initializer(sc, orbit.center, orbit.radius_m);
}

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kPositionDynamics: return "position_dynamics";
    case ConstraintKind::kVelocityDynamics: return "velocity_dynamics";
    case ConstraintKind::kPositionPeriodicity: return "position_periodicity";
    case ConstraintKind::kVelocityPeriodicity: return "velocity_periodicity";
    case ConstraintKind::kSpeed: return "speed";
    case ConstraintKind::kAcceleration: return "acceleration";
    case ConstraintKind::kShape: return "shape";
  }
  return "unknown";
}

std::vector<Violation> check_feasibility(const TrajectoryPlan& plan, const Scenario& sc,
                                         const FeasibilityTolerances& tol) {
  std::vector<Violation> out;
  const int n_slots = sc.slot_count;
  if (plan.uav_count() != sc.uav_count()) {
    out.push_back({ConstraintKind::kShape, -1, -1,
                   static_cast<double>(std::abs(plan.uav_count() - sc.uav_count()))});
    return out;
  }
  const double delta = plan.slot_s;
  for (int i = 0; i < plan.uav_count(); ++i) {
    const UavTrack& u = plan.uavs[i];
    const std::size_t want = static_cast<std::size_t>(n_slots) + 2;
    if (u.q.size() != want || u.v.size() != want || u.a.size() != want) {
      out.push_back({ConstraintKind::kShape, i, -1, 0.0});
      continue;
    }
    for (int n = 0; n <= n_slots; ++n) {
      const double pos_res =
          (u.q[n + 1] - u.q[n] - u.v[n] * delta - 0.5 * u.a[n] * delta * delta).norm();
      if (pos_res > tol.position_m) out.push_back({ConstraintKind::kPositionDynamics, i, n, pos_res});
      const double vel_res = (u.v[n + 1] - u.v[n] - u.a[n] * delta).norm();
      if (vel_res > tol.velocity_mps) out.push_back({ConstraintKind::kVelocityDynamics, i, n, vel_res});
    }
    const double q_gap = (u.q[0] - u.q[n_slots + 1]).norm();
    if (q_gap > tol.position_m) out.push_back({ConstraintKind::kPositionPeriodicity, i, n_slots + 1, q_gap});
    const double v_gap = (u.v[0] - u.v[n_slots + 1]).norm();
    if (v_gap > tol.velocity_mps) out.push_back({ConstraintKind::kVelocityPeriodicity, i, n_slots + 1, v_gap});
    for (int n = 0; n <= n_slots + 1; ++n) {
      const double speed = u.v[n].norm();
      if (speed > sc.phys.v_max + tol.bound) out.push_back({ConstraintKind::kSpeed, i, n, speed - sc.phys.v_max});
      const double acc = u.a[n].norm();
      if (acc > sc.phys.a_max + tol.bound) out.push_back({ConstraintKind::kAcceleration, i, n, acc - sc.phys.a_max});
    }
  }
  return out;
}

}  // namespace uavsee
