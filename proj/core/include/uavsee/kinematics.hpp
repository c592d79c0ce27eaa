#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "uavsee/scenario.hpp"

namespace uavsee {

/// Raised when an operation's precondition on the trajectory does not hold
/// (e.g. a zero-speed slot for the fixed-wing energy model).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by circular_initializer when the requested circle breaks a
/// mobility limit; the message names the binding constraint.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position/velocity/acceleration samples of one UAV for n = 0..N+1.
struct UavTrack {
  std::vector<Vec2> q;
  std::vector<Vec2> v;
  std::vector<Vec2> a;
};

/// Discrete periodic trajectories of the whole fleet. Boundary points n = 0
/// and n = N+1 coincide; traffic and energy are accounted on n = 1..N.
struct TrajectoryPlan {
  double slot_s = 0.0;
  std::vector<UavTrack> uavs;

  int uav_count() const { return static_cast<int>(uavs.size()); }
  int slot_count() const {
    return uavs.empty() ? 0 : static_cast<int>(uavs.front().q.size()) - 2;
  }

  /// Zero-filled plan with N+2 samples per UAV.
  static TrajectoryPlan zeros(int uav_count, int slot_count, double slot_s);
};

struct EnergyReport {
  std::vector<double> per_uav_j;                   // E_i
  double total_j = 0.0;                            // E_total
  std::vector<std::vector<double>> slot_power_w;   // [uav][n-1], propulsion power
};

/// Instantaneous fixed-wing propulsion power c1|v|^3 + (c2/|v|)(1 + |a|^2/g^2).
double propulsion_power(const Vec2& v, const Vec2& a, const PhysicalParams& p);

/// Propulsion energy over slots 1..N with each slot weighted by delta.
/// Throws DomainError on a zero-speed slot.
EnergyReport propulsion_energy(const TrajectoryPlan& plan, const Scenario& sc);

/// Periodic seed trajectories: UAV i flies a circle of radius
/// radius + 10 i with phase 2 pi i / (M1 + M2), sampled from uniform circular
/// motion with period T and closed so that the discrete dynamics hold exactly.
TrajectoryPlan circular_initializer(const Scenario& sc, const Vec2& center, double radius);

/// Convenience: the scenario's own orbit (or default_orbit()).
TrajectoryPlan circular_initializer(const Scenario& sc);

enum class ConstraintKind { kPositionDynamics, kVelocityDynamics, kPositionPeriodicity,
                            kVelocityPeriodicity, kSpeed, kAcceleration, kShape };

std::string to_string(ConstraintKind kind);

struct Violation {
  ConstraintKind constraint;
  int uav = -1;
  int slot = -1;
  double magnitude = 0.0;
};

struct FeasibilityTolerances {
  double position_m = 1e-6;
  double velocity_mps = 1e-6;
  double bound = 1e-9;
};

/// Lists every broken mobility constraint; empty iff the plan is feasible.
std::vector<Violation> check_feasibility(const TrajectoryPlan& plan, const Scenario& sc,
                                         const FeasibilityTolerances& tol = {});

}  // namespace uavsee
