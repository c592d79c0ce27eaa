#include "uavsee/convex/atom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace uavsee::convex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Atom compile(AtomKind kind, const std::vector<Lin>& rows, double scale) {
  if (rows.empty()) throw std::invalid_argument("atom needs at least one argument row");
  if (kind != AtomKind::kAffine && !(scale >= 0.0)) {
    throw std::invalid_argument("non-affine atom " + to_string(kind) + " needs a non-negative scale");
  }
  Atom a;
  a.kind = kind;
  a.scale = scale;
  for (const auto& r : rows) {
    for (const auto& [j, c] : r.terms) {
      if (j < 0) throw std::invalid_argument("negative variable index in atom");
      a.vars.push_back(j);
    }
  }
  std::sort(a.vars.begin(), a.vars.end());
  a.vars.erase(std::unique(a.vars.begin(), a.vars.end()), a.vars.end());
  a.A = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), static_cast<int>(a.vars.size()));
  a.b.resize(static_cast<int>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    a.b[r] = rows[r].offset;
    for (const auto& [j, c] : rows[r].terms) {
      const auto pos = std::lower_bound(a.vars.begin(), a.vars.end(), j) - a.vars.begin();
      a.A(static_cast<int>(r), static_cast<int>(pos)) += c;
    }
  }
  return a;
}

// g(u), g'(u), g''(u) of the outer function; returns false outside the domain.
bool outer(const Atom& a, const Eigen::VectorXd& u, bool want_hessian, double& g,
           Eigen::VectorXd& gu, Eigen::MatrixXd& hu) {
  const int d = static_cast<int>(u.size());
  gu.setZero(d);
  if (want_hessian) hu.setZero(d, d);
  switch (a.kind) {
    case AtomKind::kAffine:
      g = u[0];
      gu[0] = 1.0;
      return true;
    case AtomKind::kQuadratic:
      g = 0.5 * u.dot(a.P * u);
      gu = a.P * u;
      if (want_hessian) hu = a.P;
      return true;
    case AtomKind::kSquaredNorm:
      g = u.squaredNorm();
      gu = 2.0 * u;
      if (want_hessian) hu.diagonal().setConstant(2.0);
      return true;
    case AtomKind::kCubedNorm: {
      const double r = u.norm();
      g = r * r * r;
      gu = 3.0 * r * u;
      if (want_hessian && r > 0.0) {
        hu = (3.0 / r) * u * u.transpose();
        hu.diagonal().array() += 3.0 * r;
      }
      return true;
    }
    case AtomKind::kReciprocal: {
      const double s = u[0];
      if (!(s > 0.0)) return false;
      g = 1.0 / s;
      gu[0] = -1.0 / (s * s);
      if (want_hessian) hu(0, 0) = 2.0 / (s * s * s);
      return true;
    }
    case AtomKind::kQuadOverLin: {
      const double s = u[d - 1];
      if (!(s > 0.0)) return false;
      const auto y = u.head(d - 1);
      const double yy = y.squaredNorm();
      g = yy / s;
      gu.head(d - 1) = (2.0 / s) * y;
      gu[d - 1] = -yy / (s * s);
      if (want_hessian) {
        hu.topLeftCorner(d - 1, d - 1).diagonal().setConstant(2.0 / s);
        hu.col(d - 1).head(d - 1) = (-2.0 / (s * s)) * y;
        hu.row(d - 1).head(d - 1) = hu.col(d - 1).head(d - 1).transpose();
        hu(d - 1, d - 1) = 2.0 * yy / (s * s * s);
      }
      return true;
    }
    case AtomKind::kExp: {
      if (!(u[0] <= kExpArgumentCap)) return false;
      g = std::exp(u[0]);
      gu[0] = g;
      if (want_hessian) hu(0, 0) = g;
      return true;
    }
    case AtomKind::kLogSumExp: {
      double m = u.maxCoeff();
      if (a.constant > 0.0) m = std::max(m, std::log(a.constant));
      if (!std::isfinite(m)) return false;
      const Eigen::VectorXd w = (u.array() - m).exp().matrix();
      const double wc = a.constant > 0.0 ? a.constant * std::exp(-m) : 0.0;
      const double z = w.sum() + wc;
      g = m + std::log(z);
      gu = w / z;
      if (want_hessian) {
        hu = -gu * gu.transpose();
        hu.diagonal() += gu;
      }
      return true;
    }
    case AtomKind::kNegLog: {
      const double s = u[0];
      if (!(s > 0.0)) return false;
      g = -std::log(s);
      gu[0] = -1.0 / s;
      if (want_hessian) hu(0, 0) = 1.0 / (s * s);
      return true;
    }
  }
  return false;
}

}  // namespace

std::string to_string(AtomKind kind) {
  switch (kind) {
    case AtomKind::kAffine: return "affine";
    case AtomKind::kQuadratic: return "quadratic";
    case AtomKind::kSquaredNorm: return "squared_norm";
    case AtomKind::kCubedNorm: return "cubed_norm";
    case AtomKind::kReciprocal: return "reciprocal";
    case AtomKind::kQuadOverLin: return "quad_over_lin";
    case AtomKind::kExp: return "exp";
    case AtomKind::kLogSumExp: return "log_sum_exp";
    case AtomKind::kNegLog: return "neg_log";
  }
  return "unknown";
}

Atom affine(const Lin& u, double scale) { return compile(AtomKind::kAffine, {u}, scale); }

Atom quadratic(const std::vector<Lin>& u, const Eigen::MatrixXd& P, double scale) {
  Atom a = compile(AtomKind::kQuadratic, u, scale);
  if (P.rows() != a.arg_dim() || P.cols() != a.arg_dim()) {
    throw std::invalid_argument("quadratic atom: P has the wrong shape");
  }
  const Eigen::MatrixXd sym = 0.5 * (P + P.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, sym.norm())) {
    throw std::invalid_argument("quadratic atom: P is not positive semidefinite");
  }
  a.P = sym;
  return a;
}

Atom squared_norm(const std::vector<Lin>& u, double scale) {
  return compile(AtomKind::kSquaredNorm, u, scale);
}

Atom cubed_norm(const std::vector<Lin>& u, double scale) {
  return compile(AtomKind::kCubedNorm, u, scale);
}

Atom reciprocal(const Lin& u, double scale) { return compile(AtomKind::kReciprocal, {u}, scale); }

Atom quad_over_lin(const std::vector<Lin>& y, const Lin& s, double scale) {
  std::vector<Lin> rows = y;
  rows.push_back(s);
  return compile(AtomKind::kQuadOverLin, rows, scale);
}

Atom exponential(const Lin& u, double scale) { return compile(AtomKind::kExp, {u}, scale); }

Atom log_sum_exp(const std::vector<Lin>& u, double constant, double scale) {
  if (!(constant >= 0.0)) throw std::invalid_argument("log_sum_exp atom: constant must be >= 0");
  Atom a = compile(AtomKind::kLogSumExp, u, scale);
  a.constant = constant;
  return a;
}

Atom neg_log(const Lin& u, double scale) { return compile(AtomKind::kNegLog, {u}, scale); }

Eigen::VectorXd atom_argument(const Atom& atom, const Eigen::VectorXd& x) {
  Eigen::VectorXd xl(atom.local_dim());
  for (int j = 0; j < atom.local_dim(); ++j) xl[j] = x[atom.vars[j]];
  return atom.A * xl + atom.b;
}

double atom_value(const Atom& atom, const Eigen::VectorXd& x) {
  AtomEval e;
  return atom_eval(atom, x, false, e) ? e.value : kInf;
}

bool atom_eval(const Atom& atom, const Eigen::VectorXd& x, bool want_hessian, AtomEval& out) {
  const Eigen::VectorXd u = atom_argument(atom, x);
  double g = 0.0;
  Eigen::VectorXd gu;
  Eigen::MatrixXd hu;
  if (!outer(atom, u, want_hessian, g, gu, hu) || !std::isfinite(g)) {
    out.value = kInf;
    return false;
  }
  out.value = atom.scale * g;
  out.grad = atom.scale * (atom.A.transpose() * gu);
  if (want_hessian) {
    if (atom.kind == AtomKind::kAffine) {
      out.hess.setZero(atom.local_dim(), atom.local_dim());
    } else {
      out.hess = atom.scale * (atom.A.transpose() * hu * atom.A);
    }
  }
  return true;
}

}  // namespace uavsee::convex
