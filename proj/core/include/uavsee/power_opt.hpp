#pragma once

#include <optional>
#include <vector>

#include "uavsee/convex/solver.hpp"
#include "uavsee/link_model.hpp"

namespace uavsee {

/// First-order expansion of log2(a'x + b) around x_r: value and gradient.
/// Concavity makes it a global over-estimator on a'x + b > 0.
struct LogAffineBound {
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<double> x_r;

  double operator()(const std::vector<double>& x) const;
};

LogAffineBound log2_affine_upper(const std::vector<double>& a, double b, const std::vector<double>& x_r);

/// First-order upper bound of B log2(sum_i p_i h_i + sigma^2) around p^r over
/// a fixed UAV subset. Affine in the slot's powers, exact at p^r.
struct PowerSurrogate {
  std::vector<int> uavs;          // UAVs in the summed set
  std::vector<double> gains;      // h_i for those UAVs
  std::vector<double> p_r;        // expansion powers, one per UAV in the fleet
  std::vector<double> slope;      // d/dp_i in bps per watt, one per UAV in the fleet
  double value_at_expansion = 0.0;  // B log2(sum p_r h + sigma^2)

  /// Bound value at the slot power vector p (one entry per UAV).
  double operator()(const std::vector<double>& p) const;
};

/// Upper bound on the legitimate user's interference log, over every SUAV
/// but m2 and every JUAV.
PowerSurrogate build_tilde_upper(int k2, int m2, int slot, const PowerSchedule& p_r,
                                 const TrajectoryPlan& plan, const Scenario& sc);

/// Upper bound on the eavesdropper's total received-power log, over every UAV.
PowerSurrogate build_bar_upper(int k1, int m2, int slot, const PowerSchedule& p_r,
                               const TrajectoryPlan& plan, const Scenario& sc);

/// Exact B log2(sum_{i in set} p_i h_i + sigma^2) for a ground node.
double log_received(const Vec2& ground, const std::vector<int>& uavs, int slot,
                    const std::vector<double>& p, const TrajectoryPlan& plan, const Scenario& sc);

/// UAV subsets appearing in the rate expressions.
std::vector<int> all_uavs(const Scenario& sc);
std::vector<int> interferers(int m2, const Scenario& sc);

/// Sum over scheduled pairs of R_{k2,m2}[n] - max_{k1} R_{k1,m2}[n] in bps,
/// without the per-slot clamp.
double scheduled_secrecy(const TrajectoryPlan& plan, const PowerSchedule& powers,
                         const ScheduleMatrix& x, const Scenario& sc);

struct P21Result {
  PowerSchedule powers;
  double objective = 0.0;                   // sum of tau over slots, bps
  std::vector<double> slot_objective;       // per slot, bps (0 for idle slots)
  std::vector<convex::SolveReport> reports;  // per solved slot
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds the per-slot convex power program at expansion point p_r.
/// Returns nullopt for slots without scheduled users.
std::optional<convex::ConvexProgram> assemble_p21_slot(int slot, const ScheduleMatrix& x,
                                                       const TrajectoryPlan& plan,
                                                       const PowerSchedule& p_r, const Scenario& sc);

/// Solves every slot's power program independently. Idle slots keep p_r.
/// Throws SolverError naming the slot if a program cannot be solved.
P21Result solve_p21(const ScheduleMatrix& x, const TrajectoryPlan& plan, const PowerSchedule& p_r,
                    const Scenario& sc);

struct PowerLoopOptions {
  int max_iterations = 30;
  double rel_tol = 1e-3;
};

struct PowerLoopResult {
  PowerSchedule powers;
  std::vector<double> objective_trace;  // scheduled_secrecy at p_init and each accepted iterate
  int iterations = 0;
  bool converged = false;
};

/// Successive convex approximation over the power block.
PowerLoopResult sca_power_loop(const ScheduleMatrix& x, const TrajectoryPlan& plan,
                               const PowerSchedule& p_init, const Scenario& sc,
                               const PowerLoopOptions& opts = {});

}  // namespace uavsee
