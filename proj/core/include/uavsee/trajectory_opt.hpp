#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uavsee/convex/solver.hpp"
#include "uavsee/link_model.hpp"
#include "uavsee/power_opt.hpp"

namespace uavsee {

/// |v_r|^2 + 2 v_r'(v - v_r): affine under-estimator of |v|^2.
double taylor_speed_lb(const Vec2& v, const Vec2& v_r);

/// |q_r - w|^2 + 2 (q_r - w)'(q - q_r): affine under-estimator of |q - w|^2.
double taylor_dist_lb(const Vec2& q, const Vec2& q_r, const Vec2& w);

/// Concave-quadratic lower bound of B log2(sum_i p_i beta0 / (H^2 + |q_i - w|^2) + sigma^2)
/// over a UAV subset, built from the first-order expansion in the squared
/// distances around q_r. Exact at q_r.
struct DistanceSurrogate {
  Vec2 ground = Vec2::Zero();
  std::vector<int> uavs;
  std::vector<double> coef;        // bps per m^2, non-negative
  std::vector<double> d2_r;        // |q_r - w|^2
  double value_at_expansion = 0.0;  // bps

  /// Bound at fleet positions q (one per UAV).
  double operator()(const std::vector<Vec2>& q) const;
};

/// Lower bound on the legitimate user's total received-power log (all UAVs).
DistanceSurrogate build_bar_lb(int k2, int m2, int slot, const TrajectoryPlan& plan_r,
                               const PowerSchedule& powers, const Scenario& sc);

/// Lower bound on the eavesdropper's interference log (all UAVs but m2).
DistanceSurrogate build_tilde_lb(int k1, int m2, int slot, const TrajectoryPlan& plan_r,
                                 const PowerSchedule& powers, const Scenario& sc);

/// Exact B log2(sum_{i in set} p_i beta0 / (H^2 + |q_i - w|^2) + sigma^2).
double log_received_at(const Vec2& ground, const std::vector<int>& uavs, int slot,
                       const std::vector<Vec2>& q, const PowerSchedule& powers, const Scenario& sc);

/// Lowest speed slack admitted by the energy surrogate [m/s].
inline constexpr double kMuMin = 1.0;

enum class TrajectoryObjective {
  kSee,        // sum Phi - zeta * energy
  kRateMax,    // sum Phi
  kEnergyMin,  // energy only
};

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index map of the trajectory program. Rates are measured in bits/s/Hz
/// (divided by B) and logs are normalized by sigma^2.
struct P33Layout {
  int slots = 0;  // N
  int uavs = 0;   // M
  int kin0 = 0;
  int mu0 = -1;
  std::vector<char> pinned;  // per UAV: q[0] fixed by an equality

  int q(int uav, int n, int c) const { return kin0 + (uav * (slots + 1) + n) * 6 + c; }
  int v(int uav, int n, int c) const { return q(uav, n, 0) + 2 + c; }
  int a(int uav, int n, int c) const { return q(uav, n, 0) + 4 + c; }
  int mu(int uav, int n) const { return mu0 + uav * slots + (n - 1); }

  struct Pair {
    int user = 0, slot = 0, suav = 0;
    int Phi = -1, phi = -1, varpi = -1;
    std::vector<int> inter;  // interfering UAVs with positive power
    std::vector<int> S, z;
  };
  struct Eve {
    int eve = 0, slot = 0;
    int varpi = -1;
    std::vector<int> uavs;  // UAVs with positive power
    std::vector<int> Z, zbar;
  };
  std::vector<Pair> pairs;
  std::vector<Eve> eves;
};

struct P33Program {
  convex::ConvexProgram prog;
  P33Layout layout;
  TrajectoryObjective objective = TrajectoryObjective::kSee;
  double zeta = 0.0;
  Eigen::VectorXd interior;  // strictly feasible point at plan_r
  Eigen::VectorXd tight;     // plan_r with every slack at its binding value
};

/// Assembles the convex trajectory program at expansion point plan_r.
/// Scheduled pairs whose secrecy at plan_r is not positive are left out.
P33Program assemble_p33(const ScheduleMatrix& x, const PowerSchedule& powers,
                        const TrajectoryPlan& plan_r, double zeta, const Scenario& sc,
                        TrajectoryObjective objective = TrajectoryObjective::kSee);

/// Rebuilds the objective for a new Dinkelbach parameter.
void set_p33_zeta(P33Program& p, double zeta, const Scenario& sc);

/// sum Phi of a program point [bits/s/Hz].
double p33_numerator(const P33Program& p, const Eigen::VectorXd& x);
/// Surrogate energy sum delta (c1|v|^3 + c2/mu + c2 |a|^2 / (mu g^2)) [J].
double p33_energy(const P33Program& p, const Eigen::VectorXd& x, const Scenario& sc);
/// e^z sigma^2 (H^2 + S) / (p beta0) for every interference term; 1 when tight.
std::vector<double> p33_tightness(const P33Program& p, const Eigen::VectorXd& x,
                                  const PowerSchedule& powers, const Scenario& sc);
TrajectoryPlan p33_plan(const P33Program& p, const Eigen::VectorXd& x, const Scenario& sc);

struct DinkelbachStep {
  double zeta = 0.0;
  double F = 0.0;            // numerator - zeta * energy
  double numerator = 0.0;    // bits/s/Hz
  double energy = 0.0;       // J (surrogate)
  int newton_iterations = 0;
};

struct DinkelbachOptions {
  double epsilon = 1e-2;
  int max_iterations = 30;
  double zeta0 = 0.0;
};

struct DinkelbachResult {
  TrajectoryPlan plan;
  Eigen::VectorXd x;
  double zeta_star = 0.0;
  std::vector<DinkelbachStep> history;
  bool converged = false;
  convex::SolveStatus status = convex::SolveStatus::kOptimal;
  std::string message;
};

/// Fractional maximization of sum Phi / energy over the trajectory program.
DinkelbachResult dinkelbach(const ScheduleMatrix& x, const PowerSchedule& powers,
                            const TrajectoryPlan& plan_r, const Scenario& sc,
                            const DinkelbachOptions& opts = {});

/// Generic Dinkelbach iteration for max f/g with F(zeta) = max f - zeta g
/// supplied by the caller (returns the maximizer's f and g).
struct ScalarDinkelbachResult {
  double zeta_star = 0.0;
  std::vector<DinkelbachStep> history;
  bool converged = false;
};
ScalarDinkelbachResult dinkelbach_scalar(
    const std::function<std::pair<double, double>(double zeta)>& parametric_argmax, double epsilon,
    int max_iterations = 50, double zeta0 = 0.0);

struct TrajectoryLoopOptions {
  TrajectoryObjective objective = TrajectoryObjective::kSee;
  int max_iterations = 20;
  double rel_tol = 1e-3;
  double epsilon = 1e-2;  // Dinkelbach tolerance
};

struct TrajectoryTraceRow {
  int sca_iter = 0;
  int dinkelbach_iter = 0;
  double zeta = 0.0;
  double F = 0.0;
  double true_value = 0.0;  // objective of the accepted plan (SEE in bps/J, secrecy or -energy)
  double energy_j = 0.0;
  double secrecy_bps = 0.0;
};

struct TrajectoryLoopResult {
  TrajectoryPlan plan;
  std::vector<double> value_trace;  // true objective at plan_init and each accepted iterate
  std::vector<TrajectoryTraceRow> rows;
  int iterations = 0;
  bool converged = false;
};

/// True objective of a plan for the given mode: SEE (bps/J), secrecy sum
/// (bps) or minus the energy (J).
double trajectory_objective_value(TrajectoryObjective mode, const TrajectoryPlan& plan,
                                  const PowerSchedule& powers, const ScheduleMatrix& x,
                                  const Scenario& sc);

/// Outer successive convex approximation over trajectories.
TrajectoryLoopResult sca_trajectory_loop(const ScheduleMatrix& x, const PowerSchedule& powers,
                                         const TrajectoryPlan& plan_init, const Scenario& sc,
                                         const TrajectoryLoopOptions& opts = {});

}  // namespace uavsee
