#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "uavsee/convex/program.hpp"

namespace uavsee::convex {

enum class SolveStatus { kOptimal, kMaxIter, kInfeasible, kNumericFailure };

std::string to_string(SolveStatus status);

struct SolveOptions {
  double alpha = 0.25;               // Armijo fraction
  double beta = 0.5;                 // backtracking factor
  double t_growth = 10.0;            // barrier parameter multiplier per stage
  double gap_tol = 1e-8;             // stop once m / t <= gap_tol
  double newton_tol = 1e-10;         // centering stops at lambda^2 / 2 <= newton_tol
  int max_newton_per_stage = 500;
  int max_newton_total = 10000;
  double regularization = 1e-10;     // on the scaled KKT diagonal
  int refinement_steps = 2;
  bool estimate_t0_from_warm_start = true;
  double warm_pullback = 1e-2;       // step from a feasible warm start toward the cold point
};

struct SolveReport {
  Eigen::VectorXd x;
  double objective = 0.0;
  double primal_infeasibility = 0.0;  // max(f_i(x)_+, |A x - b|)
  double stationarity = 0.0;          // scaled barrier-KKT gradient norm
  int newton_iterations = 0;          // phase II
  int phase1_iterations = 0;
  int barrier_stages = 0;
  double final_t = 0.0;
  SolveStatus status = SolveStatus::kNumericFailure;
  std::string message;

  bool ok() const { return status == SolveStatus::kOptimal; }
};

/// Log-barrier interior-point method with Newton centering steps. A warm
/// start that is not strictly feasible is pulled toward a strictly feasible
/// cold point; a cold point that is not strictly feasible triggers phase I.
SolveReport solve(const ConvexProgram& prog, const std::optional<Eigen::VectorXd>& warm_start = {},
                  const SolveOptions& opts = {});

/// Searches for a strictly feasible point by minimizing s subject to
/// f_i(x) <= s. Returns nullopt when none exists (s* >= 0).
std::optional<Eigen::VectorXd> find_strictly_feasible(const ConvexProgram& prog,
                                                      const Eigen::VectorXd& start,
                                                      const SolveOptions& opts = {},
                                                      int* iterations = nullptr);

/// True if x lies in every atom domain, satisfies f_i(x) < 0 and A x = b to
/// `eq_tol`.
bool strictly_feasible(const ConvexProgram& prog, const Eigen::VectorXd& x, double eq_tol = 1e-9);

struct DerivativeError {
  double gradient = 0.0;
  double hessian = 0.0;
  double worst() const { return gradient > hessian ? gradient : hessian; }
};

/// Central finite-difference comparison (step 1e-6 (1 + |x_j|)) of one atom's
/// analytic gradient and Hessian.
DerivativeError atom_derivative_error(const Atom& atom, const Eigen::VectorXd& x);

/// Worst relative derivative error over every atom of the program at x.
double gradient_check(const ConvexProgram& prog, const Eigen::VectorXd& x);

}  // namespace uavsee::convex
