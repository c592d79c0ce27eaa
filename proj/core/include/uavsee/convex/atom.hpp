#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace uavsee::convex {

/// Sparse affine expression sum_j c_j x_j + offset over global variable indices.
struct Lin {
  std::vector<std::pair<int, double>> terms;
  double offset = 0.0;

  Lin() = default;
  explicit Lin(double c) : offset(c) {}
  static Lin var(int index, double coef = 1.0) {
    Lin e;
    e.terms.emplace_back(index, coef);
    return e;
  }
  Lin& add(int index, double coef) {
    terms.emplace_back(index, coef);
    return *this;
  }
  Lin& plus(double c) {
    offset += c;
    return *this;
  }
};

enum class AtomKind {
  kAffine,       // u
  kQuadratic,    // 0.5 u' P u, P symmetric PSD
  kSquaredNorm,  // |u|^2
  kCubedNorm,    // |u|^3
  kReciprocal,   // 1/u, u > 0
  kQuadOverLin,  // |y|^2 / s with u = (y, s), s > 0
  kExp,          // e^u, u <= 40
  kLogSumExp,    // log(sum_i e^{u_i} + c), c >= 0
  kNegLog,       // -log(u), u > 0
};

std::string to_string(AtomKind kind);

/// scale * g(A x[vars] + b). Every non-affine atom is convex and carries a
/// non-negative scale.
struct Atom {
  AtomKind kind = AtomKind::kAffine;
  double scale = 1.0;
  std::vector<int> vars;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd P;
  double constant = 0.0;

  int arg_dim() const { return static_cast<int>(A.rows()); }
  int local_dim() const { return static_cast<int>(vars.size()); }
};

/// Largest exponent accepted by kExp; beyond it the atom reports +inf so that
/// line searches back off instead of overflowing.
inline constexpr double kExpArgumentCap = 40.0;

Atom affine(const Lin& u, double scale = 1.0);
Atom quadratic(const std::vector<Lin>& u, const Eigen::MatrixXd& P, double scale = 1.0);
Atom squared_norm(const std::vector<Lin>& u, double scale = 1.0);
Atom cubed_norm(const std::vector<Lin>& u, double scale = 1.0);
Atom reciprocal(const Lin& u, double scale = 1.0);
Atom quad_over_lin(const std::vector<Lin>& y, const Lin& s, double scale = 1.0);
Atom exponential(const Lin& u, double scale = 1.0);
Atom log_sum_exp(const std::vector<Lin>& u, double constant, double scale = 1.0);
Atom neg_log(const Lin& u, double scale = 1.0);

/// Value, gradient and Hessian of an atom with respect to its local
/// variables. `value` is +inf outside the domain.
struct AtomEval {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

/// Local argument u = A x_loc + b gathered from the global vector.
Eigen::VectorXd atom_argument(const Atom& atom, const Eigen::VectorXd& x);

double atom_value(const Atom& atom, const Eigen::VectorXd& x);
bool atom_eval(const Atom& atom, const Eigen::VectorXd& x, bool want_hessian, AtomEval& out);

}  // namespace uavsee::convex
