#pragma once

// Convex programs with closed-form optima. Together they use every atom.

#include <cmath>
#include <string>
#include <vector>

#include "uavsee/convex/program.hpp"

namespace uavsee::testing {

struct AnalyticProblem {
  std::string name;
  convex::ConvexProgram prog;
  double optimum;
  Eigen::VectorXd argmin;  // empty: not unique or not checked
};

inline std::vector<AnalyticProblem> analytic_bank() {
  using namespace convex;
  std::vector<AnalyticProblem> bank;

  {  // min x^2 s.t. x >= 1, cold start outside the feasible set
    ConvexProgram p;
    p.add_block("x", 1);
    Function f;
    f.add(squared_norm({Lin::var(0)}));
    p.set_objective(f);
    Function g;
    g.add(affine(Lin::var(0, -1.0).plus(1.0)));
    p.add_inequality(g);
    bank.push_back({"square above one", p, 1.0, Eigen::VectorXd::Constant(1, 1.0)});
  }
  {  // min e^-z + z
    ConvexProgram p;
    p.add_block("z", 1);
    Function f;
    f.add(exponential(Lin::var(0, -1.0))).add(affine(Lin::var(0)));
    p.set_objective(f);
    bank.push_back({"exp plus linear", p, 1.0, Eigen::VectorXd::Zero(1)});
  }
  {  // min c2/mu on [0.1, 5]
    ConvexProgram p;
    p.add_block("mu", 1);
    Function f;
    f.add(reciprocal(Lin::var(0), 2250.0));
    p.set_objective(f);
    Function hi, lo;
    hi.add(affine(Lin::var(0).plus(-5.0)));
    lo.add(affine(Lin::var(0, -1.0).plus(0.1)));
    p.add_inequality(hi);
    p.add_inequality(lo);
    p.initial_point = Eigen::VectorXd::Constant(1, 1.0);
    bank.push_back({"reciprocal on interval", p, 450.0, Eigen::VectorXd::Constant(1, 5.0)});
  }
  {  // min |x|^3 - 3 x1: 3|x| x = (3, 0) at x = (1, 0)
    ConvexProgram p;
    p.add_block("x", 2);
    Function f;
    f.add(cubed_norm({Lin::var(0), Lin::var(1)})).add(affine(Lin::var(0, -3.0)));
    p.set_objective(f);
    Eigen::VectorXd x(2);
    x << 1.0, 0.0;
    bank.push_back({"cubed norm", p, -2.0, x});
  }
  {  // min y^2/s + s with y = 2: 4/s + s at s = 2
    ConvexProgram p;
    p.add_block("y", 1);
    p.add_block("s", 1);
    Function f;
    f.add(quad_over_lin({Lin::var(0)}, Lin::var(1))).add(affine(Lin::var(1)));
    p.set_objective(f);
    Function pos;
    pos.add(affine(Lin::var(1, -1.0)));
    p.add_inequality(pos);
    p.add_equality({{{0, 1.0}}, 2.0, "y = 2"});
    p.initial_point = Eigen::VectorXd::Constant(2, 1.0);
    p.initial_point[0] = 2.0;
    Eigen::VectorXd x(2);
    x << 2.0, 2.0;
    bank.push_back({"quad over lin", p, 4.0, x});
  }
  {  // min log(e^x1 + e^x2) s.t. x1 + x2 = 2
    ConvexProgram p;
    p.add_block("x", 2);
    Function f;
    f.add(log_sum_exp({Lin::var(0), Lin::var(1)}, 0.0));
    p.set_objective(f);
    p.add_equality({{{0, 1.0}, {1, 1.0}}, 2.0, "sum"});
    p.initial_point = Eigen::VectorXd::Zero(2);
    p.initial_point[1] = 2.0;
    bank.push_back({"log-sum-exp on a line", p, 1.0 + std::log(2.0), Eigen::VectorXd::Constant(2, 1.0)});
  }
  {  // max sum log x_i s.t. sum x_i <= 3
    ConvexProgram p;
    p.add_block("x", 3);
    Function f;
    Function budget;
    Lin total(-3.0);
    for (int i = 0; i < 3; ++i) {
      f.add(neg_log(Lin::var(i)));
      Function pos;
      pos.add(affine(Lin::var(i, -1.0)));
      p.add_inequality(pos);
      total.add(i, 1.0);
    }
    budget.add(affine(total));
    p.set_objective(f);
    p.add_inequality(budget);
    p.initial_point = Eigen::VectorXd::Constant(3, 0.5);
    bank.push_back({"log utility budget", p, 0.0, Eigen::VectorXd::Constant(3, 1.0)});
  }
  {  // min 0.5 x'Px + q'x, constraint inactive
    ConvexProgram p;
    p.add_block("x", 2);
    Eigen::MatrixXd P(2, 2);
    P << 2.0, 0.5, 0.5, 1.0;
    Function f;
    f.add(quadratic({Lin::var(0), Lin::var(1)}, P)).add(affine(Lin::var(0, -1.0).add(1, -1.0)));
    p.set_objective(f);
    Function g;
    g.add(affine(Lin::var(0).plus(-10.0)));
    p.add_inequality(g);
    Eigen::VectorXd x(2);
    x << 0.5 / 1.75, 1.5 / 1.75;
    bank.push_back({"quadratic", p, -1.0 / 1.75, x});
  }
  {  // min -x s.t. e^x <= 2
    ConvexProgram p;
    p.add_block("x", 1);
    Function f;
    f.add(affine(Lin::var(0, -1.0)));
    p.set_objective(f);
    Function g;
    g.add(exponential(Lin::var(0))).plus(-2.0);
    p.add_inequality(g);
    bank.push_back({"exp constraint", p, -std::log(2.0), Eigen::VectorXd::Constant(1, std::log(2.0))});
  }
  {  // min x + y on the unit disc
    ConvexProgram p;
    p.add_block("x", 2);
    Function f;
    f.add(affine(Lin::var(0).add(1, 1.0)));
    p.set_objective(f);
    Function g;
    g.add(squared_norm({Lin::var(0), Lin::var(1)})).plus(-1.0);
    p.add_inequality(g);
    bank.push_back({"disc", p, -std::sqrt(2.0), Eigen::VectorXd::Constant(2, -std::sqrt(0.5))});
  }
  {  // min x on [3, 5] from x = 0
    ConvexProgram p;
    p.add_block("x", 1);
    Function f;
    f.add(affine(Lin::var(0)));
    p.set_objective(f);
    Function lo, hi;
    lo.add(affine(Lin::var(0, -1.0).plus(3.0)));
    hi.add(affine(Lin::var(0).plus(-5.0)));
    p.add_inequality(lo);
    p.add_inequality(hi);
    bank.push_back({"interval from outside", p, 3.0, Eigen::VectorXd::Constant(1, 3.0)});
  }
  return bank;
}

// x >= 2 and x <= 1.
inline convex::ConvexProgram infeasible_program() {
  using namespace convex;
  ConvexProgram p;
  p.add_block("x", 1);
  Function f;
  f.add(affine(Lin::var(0)));
  p.set_objective(f);
  Function lo, hi;
  lo.add(affine(Lin::var(0, -1.0).plus(2.0)));
  hi.add(affine(Lin::var(0).plus(-1.0)));
  p.add_inequality(lo);
  p.add_inequality(hi);
  return p;
}

}  // namespace uavsee::testing
