#include "uavsee/convex/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <Eigen/OrderingMethods>

namespace uavsee::convex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

using SpMat = Eigen::SparseMatrix<double>;

// Support of a function (sorted union of its atoms' variables) together
// with each atom's local-to-support index map.
struct CompiledFn {
  std::vector<int> support;
  std::vector<std::vector<int>> pos;
};

CompiledFn compile_fn(const Function& f) {
  CompiledFn c;
  for (const auto& a : f.atoms) c.support.insert(c.support.end(), a.vars.begin(), a.vars.end());
  std::sort(c.support.begin(), c.support.end());
  c.support.erase(std::unique(c.support.begin(), c.support.end()), c.support.end());
  for (const auto& a : f.atoms) {
    std::vector<int> p(a.vars.size());
    for (std::size_t j = 0; j < a.vars.size(); ++j) {
      p[j] = static_cast<int>(std::lower_bound(c.support.begin(), c.support.end(), a.vars[j]) -
                              c.support.begin());
    }
    c.pos.push_back(std::move(p));
  }
  return c;
}

// Size of the terms summed into an atom's value, for round-off estimates.
double atom_magnitude(const Atom& atom, const Eigen::VectorXd& x, double value) {
  if (atom.kind != AtomKind::kAffine) return std::abs(value);
  double m = std::abs(atom.b[0]);
  for (int j = 0; j < atom.local_dim(); ++j) m += std::abs(atom.A(0, j) * x[atom.vars[j]]);
  return std::abs(atom.scale) * m;
}

// Lower-triangular KKT matrix whose sparsity pattern is fixed after the
// first assembly; later assemblies write straight into the value array.
class KktAssembler {
 public:
  explicit KktAssembler(int dim) : dim_(dim) {}

  void begin() {
    cursor_ = 0;
    if (frozen_) {
      std::fill(mat_.valuePtr(), mat_.valuePtr() + mat_.nonZeros(), 0.0);
    } else {
      triplets_.clear();
    }
  }

  void add(int r, int c, double v) {
    if (r < c) std::swap(r, c);
    if (frozen_) {
      mat_.valuePtr()[slots_[cursor_++]] += v;
    } else {
      triplets_.emplace_back(r, c, v);
    }
  }

  void finish() {
    if (frozen_) return;
    mat_.resize(dim_, dim_);
    mat_.setFromTriplets(triplets_.begin(), triplets_.end());
    mat_.makeCompressed();
    slots_.resize(triplets_.size());
    for (std::size_t k = 0; k < triplets_.size(); ++k) {
      const int r = triplets_[k].row();
      const int c = triplets_[k].col();
      const int* begin = mat_.innerIndexPtr() + mat_.outerIndexPtr()[c];
      const int* end = mat_.innerIndexPtr() + mat_.outerIndexPtr()[c + 1];
      slots_[k] = static_cast<int>(std::lower_bound(begin, end, r) - mat_.innerIndexPtr());
    }
    diag_.resize(dim_);
    for (int c = 0; c < dim_; ++c) diag_[c] = mat_.outerIndexPtr()[c];  // diagonal leads each column
    triplets_.clear();
    triplets_.shrink_to_fit();
    frozen_ = true;
  }

  SpMat& matrix() { return mat_; }
  double& diag(int c) { return mat_.valuePtr()[diag_[c]]; }
  bool frozen() const { return frozen_; }

 private:
  int dim_;
  bool frozen_ = false;
  int cursor_ = 0;
  SpMat mat_;
  std::vector<Eigen::Triplet<double>> triplets_;
  std::vector<int> slots_;
  std::vector<int> diag_;
};

struct Engine {
  const ConvexProgram& prog;
  const SolveOptions& opts;
  int n = 0;
  int p = 0;
  int m = 0;
  std::vector<CompiledFn> cons;
  Eigen::SparseMatrix<double, Eigen::RowMajor> A;
  Eigen::VectorXd b;
  KktAssembler kkt;
  // Bound on the Newton decrement produced by round-off in the f_i: a
  // relative error e_i in f_i perturbs the barrier gradient by e_i g_i / -f_i,
  // whose Hessian-norm is at most e_i.
  double lambda_noise = 0.0;
  Eigen::SimplicialLDLT<SpMat> aat;
  bool aat_ready = false;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool lu_analyzed = false;
  SpMat full;  // symmetric expansion of the scaled KKT matrix

  // Results of the most recent assembly / solve.
  Eigen::VectorXd grad;
  Eigen::VectorXd obj_grad;
  Eigen::VectorXd dx;
  Eigen::VectorXd w;

  Engine(const ConvexProgram& pr, const SolveOptions& o)
      : prog(pr), opts(o), n(pr.var_count()), p(static_cast<int>(pr.equalities().size())),
        m(static_cast<int>(pr.inequalities().size())), kkt(pr.var_count() + p) {
    for (const auto& f : prog.inequalities()) cons.push_back(compile_fn(f));
    A.resize(p, n);
    b.resize(p);
    std::vector<Eigen::Triplet<double>> t;
    for (int r = 0; r < p; ++r) {
      const auto& e = prog.equalities()[r];
      for (const auto& [j, c] : e.terms) t.emplace_back(r, j, c);
      b[r] = e.rhs;
    }
    A.setFromTriplets(t.begin(), t.end());
  }

  bool eq_feasible(const Eigen::VectorXd& x) const {
    if (p == 0) return true;
    for (int r = 0; r < p; ++r) {
      double ax = 0.0;
      double scale = 1.0 + std::abs(b[r]);
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it) {
        ax += it.value() * x[it.col()];
        scale += std::abs(it.value() * x[it.col()]);
      }
      if (std::abs(ax - b[r]) > 1e-9 * scale) return false;
    }
    return true;
  }

  // t f0(x) - sum log(-f_i(x)); +inf outside the domain. `mag` receives the
  // magnitude of the summed terms for round-off estimates.
  double barrier(const Eigen::VectorXd& x, double t, double* mag = nullptr) const {
    const double f0 = prog.objective().value(x);
    if (!std::isfinite(f0)) return kInf;
    double sum = t * f0;
    double size = std::abs(sum);
    for (const auto& f : prog.inequalities()) {
      const double fi = f.value(x);
      if (!(fi < 0.0)) return kInf;
      const double l = -std::log(-fi);
      sum += l;
      size += std::abs(l);
    }
    if (mag) *mag = size;
    return sum;
  }

  bool eval_constraint(int i, const Eigen::VectorXd& x, bool want_hessian, double& fi,
                       Eigen::VectorXd& g, Eigen::MatrixXd& H, double* mag = nullptr) const {
    const Function& f = prog.inequalities()[i];
    const CompiledFn& c = cons[i];
    const int s = static_cast<int>(c.support.size());
    fi = f.constant;
    if (mag) *mag = std::abs(f.constant);
    g.setZero(s);
    if (want_hessian) H.setZero(s, s);
    AtomEval e;
    for (std::size_t a = 0; a < f.atoms.size(); ++a) {
      if (!atom_eval(f.atoms[a], x, want_hessian, e)) return false;
      fi += e.value;
      if (mag) *mag += atom_magnitude(f.atoms[a], x, e.value);
      const auto& pos = c.pos[a];
      for (std::size_t j = 0; j < pos.size(); ++j) {
        g[pos[j]] += e.grad[j];
        if (want_hessian && f.atoms[a].kind != AtomKind::kAffine) {
          for (std::size_t k = 0; k < pos.size(); ++k) H(pos[j], pos[k]) += e.hess(j, k);
        }
      }
    }
    return std::isfinite(fi);
  }

  // Gradients of f0 and of the log barrier, separately.
  bool gradients(const Eigen::VectorXd& x, Eigen::VectorXd& g0, Eigen::VectorXd& gb) const {
    g0.setZero(n);
    gb.setZero(n);
    AtomEval e;
    for (const auto& a : prog.objective().atoms) {
      if (!atom_eval(a, x, false, e)) return false;
      for (int j = 0; j < a.local_dim(); ++j) g0[a.vars[j]] += e.grad[j];
    }
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    for (int i = 0; i < m; ++i) {
      double fi = 0.0;
      if (!eval_constraint(i, x, false, fi, g, H) || !(fi < 0.0)) return false;
      for (std::size_t k = 0; k < cons[i].support.size(); ++k) gb[cons[i].support[k]] += g[k] / (-fi);
    }
    return true;
  }

  bool assemble(const Eigen::VectorXd& x, double t) {
    kkt.begin();
    grad.setZero(n);
    obj_grad.setZero(n);
    AtomEval e;
    for (const auto& a : prog.objective().atoms) {
      if (!atom_eval(a, x, true, e)) return false;
      const int d = a.local_dim();
      for (int j = 0; j < d; ++j) obj_grad[a.vars[j]] += e.grad[j];
      if (a.kind == AtomKind::kAffine) continue;
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k <= j; ++k) kkt.add(a.vars[j], a.vars[k], t * e.hess(j, k));
      }
    }
    grad = t * obj_grad;
    lambda_noise = 0.0;
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    for (int i = 0; i < m; ++i) {
      double fi = 0.0;
      double mag = 0.0;
      if (!eval_constraint(i, x, true, fi, g, H, &mag) || !(fi < 0.0)) return false;
      const double inv = 1.0 / (-fi);
      lambda_noise += 64.0 * kEps * mag * inv;
      const auto& sup = cons[i].support;
      const int s = static_cast<int>(sup.size());
      for (int j = 0; j < s; ++j) {
        grad[sup[j]] += inv * g[j];
        for (int k = 0; k <= j; ++k) kkt.add(sup[j], sup[k], inv * inv * g[j] * g[k] + inv * H(j, k));
      }
    }
    for (int j = 0; j < n; ++j) kkt.add(j, j, 0.0);
    for (int r = 0; r < p; ++r) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it) {
        kkt.add(n + r, static_cast<int>(it.col()), it.value());
      }
      kkt.add(n + r, n + r, 0.0);
    }
    kkt.finish();
    return true;
  }

  // Solves [H A'; A 0][dx; w] = [-grad; -(A x - b)] with symmetric Jacobi
  // scaling, a pivoting sparse LU and iterative refinement. Pivoting matters
  // late in the barrier schedule, where H mixes curvatures of order t and
  // t^2 and unpivoted symmetric factorizations lose every digit.
  bool newton_direction(const Eigen::VectorXd& x) {
    SpMat& K = kkt.matrix();
    const int dim = n + p;
    Eigen::VectorXd d(dim);
    double max_diag = 0.0;
    for (int j = 0; j < n; ++j) max_diag = std::max(max_diag, kkt.diag(j));
    const double floor = std::max(1e-12 * max_diag, 1e-300);
    for (int j = 0; j < n; ++j) d[j] = kkt.diag(j) > floor ? 1.0 / std::sqrt(kkt.diag(j)) : 1.0;
    for (int r = 0; r < p; ++r) {
      double ss = 0.0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it) {
        ss += std::pow(it.value() * d[it.col()], 2);
      }
      d[n + r] = ss > 0.0 ? 1.0 / std::sqrt(ss) : 1.0;
    }
    for (int c = 0; c < dim; ++c) {
      for (SpMat::InnerIterator it(K, c); it; ++it) it.valueRef() *= d[it.row()] * d[c];
    }
    full = K.selfadjointView<Eigen::Lower>();
    if (!lu_analyzed) {
      lu.analyzePattern(full);
      lu_analyzed = true;
    }
    // A singular matrix (dependent equality rows, directions without
    // curvature) is retried with a growing quasi-definite shift.
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(dim);
    const Eigen::VectorXd base_diag = K.diagonal();
    for (double reg = 0.0;; reg = reg == 0.0 ? opts.regularization : reg * 100.0) {
      if (reg > 0.0) {
        shift.head(n).setConstant(reg);
        shift.tail(p).setConstant(-reg);
        for (int c = 0; c < dim; ++c) full.coeffRef(c, c) = base_diag[c] + shift[c];
      }
      lu.factorize(full);
      if (lu.info() == Eigen::Success) break;
      if (reg > 1e-4) return false;
    }

    Eigen::VectorXd rhs(dim);
    rhs.head(n) = -grad;
    if (p > 0) rhs.tail(p) = -(A * x - b);
    rhs.array() *= d.array();
    Eigen::VectorXd y = lu.solve(rhs);
    for (int k = 0; k < opts.refinement_steps; ++k) {
      const Eigen::VectorXd ky = full * y - shift.cwiseProduct(y);
      y += lu.solve(rhs - ky);
    }
    if (!y.allFinite()) return false;
    dx = d.head(n).cwiseProduct(y.head(n));
    w = p > 0 ? Eigen::VectorXd(d.tail(p).cwiseProduct(y.tail(p))) : Eigen::VectorXd();
    return true;
  }

  enum class StageResult { kCentered, kMaxIter, kFailure };

  StageResult center(Eigen::VectorXd& x, double t, int& iterations, std::string& why,
                     const std::function<bool(const Eigen::VectorXd&)>& stop = {}) {
    int stalled = 0;
    for (int it = 0; it <= opts.max_newton_per_stage; ++it) {
      if (!assemble(x, t)) {
        why = "iterate left the barrier domain";
        return StageResult::kFailure;
      }
      if (!newton_direction(x)) {
        why = "KKT factorization failed";
        return StageResult::kFailure;
      }
      const bool feasible_eq = eq_feasible(x);
      const double slope = grad.dot(dx);
      const double lambda2 = std::abs(slope);
      double mag0 = 0.0;
      const double phi0 = barrier(x, t, &mag0);
      // A decrement below the barrier's round-off level cannot be certified.
      const double noise0 = std::max(64.0 * kEps * mag0, lambda_noise * lambda_noise);
      if (feasible_eq && lambda2 / 2.0 <= std::max(opts.newton_tol, noise0)) return StageResult::kCentered;
      if (it == opts.max_newton_per_stage || iterations >= opts.max_newton_total) {
        why = "Newton iteration limit";
        return StageResult::kMaxIter;
      }

      double s = 1.0;
      Eigen::VectorXd trial = x + dx;
      double mag = 0.0;
      double phi_trial = barrier(trial, t, &mag);
      while (!std::isfinite(phi_trial) && s > 1e-16) {
        s *= opts.beta;
        trial = x + s * dx;
        phi_trial = barrier(trial, t, &mag);
      }
      bool accepted = std::isfinite(phi_trial);
      if (accepted && feasible_eq) {
        const double noise = 64.0 * kEps * std::max(mag0, mag);
        while (phi_trial > phi0 + opts.alpha * s * slope + noise && s > 1e-16) {
          s *= opts.beta;
          trial = x + s * dx;
          phi_trial = barrier(trial, t, &mag);
        }
        accepted = phi_trial <= phi0 + opts.alpha * s * slope + noise;
        // Steps accepted only through the round-off allowance make no
        // measurable progress. Once that repeats, a decrement small against
        // m changes the duality gap by at most a percent.
        stalled = accepted && phi0 - phi_trial <= noise ? stalled + 1 : 0;
        if (stalled > 0 && lambda2 <= std::max(1e-6, 4.0 * noise0)) return StageResult::kCentered;
        if (stalled >= 3 && lambda2 / 2.0 <= 1e-2 * std::max(m, 1)) return StageResult::kCentered;
      }
      if (!accepted) {
        // Below round-off the barrier value cannot certify descent; a small
        // decrement means the point is already centered.
        if (feasible_eq && lambda2 <= std::max(1e-6, 4.0 * noise0)) return StageResult::kCentered;
        std::ostringstream os;
        os << "line search stalled (lambda^2 = " << lambda2 << ", t = " << t << ")";
        why = os.str();
        return StageResult::kFailure;
      }
      // Newton steps keep A x = b only to the accuracy of the linear solve;
      // remove the accumulated drift by projecting back when it stays in
      // the barrier domain.
      if (p > 0 && !eq_feasible(trial)) {
        Eigen::VectorXd projected = trial - project_residual(trial);
        if (std::isfinite(barrier(projected, t))) trial = std::move(projected);
      }
      x = trial;
      ++iterations;
      // Phase I barrier problems can be unbounded below; any point passing
      // the caller's test ends the stage.
      if (stop && stop(x)) return StageResult::kCentered;
    }
    return StageResult::kMaxIter;
  }

  // KKT residual |grad f0 + sum lambda_i grad f_i + A' nu| with the
  // primal-dual multiplier update lambda_i = (1 + grad f_i' dx / -f_i) / (-t f_i)
  // taken from the last Newton step. Using the updated multipliers keeps the
  // residual free of the cancellation error in near-active f_i.
  double stationarity(const Eigen::VectorXd& x, double t) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    AtomEval e;
    for (const auto& a : prog.objective().atoms) {
      if (!atom_eval(a, x, false, e)) return kInf;
      for (int j = 0; j < a.local_dim(); ++j) r[a.vars[j]] += e.grad[j];
    }
    const double g0_norm = r.lpNorm<Eigen::Infinity>();
    double term_norm = 0.0;
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    for (int i = 0; i < m; ++i) {
      double fi = 0.0;
      if (!eval_constraint(i, x, false, fi, g, H) || !(fi < 0.0)) return kInf;
      const auto& sup = cons[i].support;
      double directional = 0.0;
      for (std::size_t k = 0; k < sup.size(); ++k) directional += g[k] * dx[sup[k]];
      const double lambda = std::max(0.0, (1.0 + directional / (-fi)) / (-t * fi));
      for (std::size_t k = 0; k < sup.size(); ++k) r[sup[k]] += lambda * g[k];
      term_norm = std::max(term_norm, lambda * g.lpNorm<Eigen::Infinity>());
    }
    if (p > 0 && w.size() == p) r += A.transpose() * (w / t);
    return r.lpNorm<Eigen::Infinity>() / (1.0 + g0_norm + term_norm);
  }

  // Newton decrement lambda^2 of the barrier problem at (x, t).
  double decrement(const Eigen::VectorXd& x, double t) {
    if (!assemble(x, t) || !newton_direction(x)) return kInf;
    return std::abs(grad.dot(dx));
  }

  // A' (A A')^{-1} (A x - b): the minimal-norm correction onto A x = b.
  Eigen::VectorXd project_residual(const Eigen::VectorXd& x) {
    if (!aat_ready) {
      const SpMat At = A.transpose();
      SpMat AAt = SpMat(A) * At;
      for (int r = 0; r < p; ++r) AAt.coeffRef(r, r) += 1e-12 * (1.0 + AAt.coeff(r, r));
      aat.compute(AAt);
      aat_ready = true;
    }
    if (aat.info() != Eigen::Success) return Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd r = A * x - b;
    return A.transpose() * aat.solve(r);
  }

  // Barrier parameter that best explains x as a central point:
  // argmin_t |P (t g0 + gb)| with P the projector onto null(A).
  double estimate_t(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g0, gb;
    if (!gradients(x, g0, gb)) return 1.0;
    if (p > 0) {
      const SpMat At = A.transpose();
      SpMat AAt = SpMat(A) * At;
      for (int r = 0; r < p; ++r) AAt.coeffRef(r, r) += 1e-12 * (1.0 + AAt.coeff(r, r));
      Eigen::SimplicialLDLT<SpMat> chol(AAt);
      if (chol.info() != Eigen::Success) return 1.0;
      g0 -= At * chol.solve(SpMat(A) * g0);
      gb -= At * chol.solve(SpMat(A) * gb);
    }
    const double gg = g0.squaredNorm();
    if (!(gg > 0.0)) return 1.0;
    const double t = -g0.dot(gb) / gg;
    return std::isfinite(t) ? t : 1.0;
  }

  struct LoopResult {
    bool complete = false;
    bool stopped_early = false;
    std::string why;
    SolveStatus status = SolveStatus::kOptimal;
    int stages = 0;
    double t = 1.0;
  };

  LoopResult run(Eigen::VectorXd& x, double t0, int& iterations,
                 const std::function<bool(const Eigen::VectorXd&)>& stop_after_stage = {}) {
    LoopResult r;
    double t = t0;
    while (true) {
      const StageResult sr = center(x, t, iterations, r.why, stop_after_stage);
      ++r.stages;
      r.t = t;
      if (sr == StageResult::kFailure) {
        r.status = SolveStatus::kNumericFailure;
        return r;
      }
      if (sr == StageResult::kMaxIter) {
        r.status = SolveStatus::kMaxIter;
        return r;
      }
      if (stop_after_stage && stop_after_stage(x)) {
        r.stopped_early = true;
        return r;
      }
      if (m == 0 || m / t <= opts.gap_tol) break;
      t *= opts.t_growth;
    }
    r.complete = true;
    return r;
  }
};

double point_infeasibility(const ConvexProgram& prog, const Eigen::VectorXd& x) {
  return prog.infeasibility(x);
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kMaxIter: return "max_iter";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kNumericFailure: return "numeric_failure";
  }
  return "unknown";
}

bool strictly_feasible(const ConvexProgram& prog, const Eigen::VectorXd& x, double eq_tol) {
  if (x.size() != prog.var_count() || !x.allFinite()) return false;
  if (!std::isfinite(prog.objective().value(x))) return false;
  for (const auto& f : prog.inequalities()) {
    if (!(f.value(x) < 0.0)) return false;
  }
  for (const auto& e : prog.equalities()) {
    double r = -e.rhs;
    for (const auto& [j, c] : e.terms) r += c * x[j];
    if (std::abs(r) > eq_tol * (1.0 + std::abs(e.rhs))) return false;
  }
  return true;
}

std::optional<Eigen::VectorXd> find_strictly_feasible(const ConvexProgram& prog,
                                                      const Eigen::VectorXd& start,
                                                      const SolveOptions& opts, int* iterations) {
  const int n = prog.var_count();
  if (start.size() != n) return std::nullopt;
  if (strictly_feasible(prog, start)) return start;

  double fmax = -kInf;
  for (const auto& f : prog.inequalities()) fmax = std::max(fmax, f.value(start));
  if (!std::isfinite(fmax) && fmax != -kInf) return std::nullopt;  // outside an atom domain
  if (fmax == -kInf) fmax = 0.0;

  ConvexProgram p1;
  for (const auto& blk : prog.blocks()) p1.add_block(blk.name, blk.size);
  const int s_idx = p1.add_block("phase1_s", 1);
  Function obj;
  obj.add(affine(Lin::var(s_idx)));
  p1.set_objective(obj);
  for (const auto& f : prog.inequalities()) {
    Function g = f;
    g.add(affine(Lin::var(s_idx, -1.0)));
    p1.add_inequality(std::move(g));
  }
  const double s_floor = -1.0 - std::abs(fmax);
  Function floor_fn;
  floor_fn.add(affine(Lin::var(s_idx, -1.0))).plus(s_floor);
  p1.add_inequality(floor_fn);
  for (const auto& e : prog.equalities()) p1.add_equality(e);

  Eigen::VectorXd x(n + 1);
  x.head(n) = start;
  x[n] = fmax + 1.0 + 0.1 * std::abs(fmax);

  Engine eng(p1, opts);
  int iters = 0;
  auto found = [&](const Eigen::VectorXd& z) {
    return z[n] < 0.0 && strictly_feasible(prog, z.head(n));
  };
  auto res = eng.run(x, 1.0, iters, found);
  if (iterations) *iterations = iters;
  if (found(x)) return Eigen::VectorXd(x.head(n));
  return std::nullopt;
}

SolveReport solve(const ConvexProgram& prog, const std::optional<Eigen::VectorXd>& warm_start,
                  const SolveOptions& opts) {
  SolveReport rep;
  const int n = prog.var_count();
  Eigen::VectorXd cold = prog.initial_point.size() == n ? prog.initial_point : Eigen::VectorXd::Zero(n);

  Eigen::VectorXd x;
  double t0 = 1.0;
  Engine eng(prog, opts);

  auto cold_point = [&]() -> std::optional<Eigen::VectorXd> {
    int it = 0;
    auto z = find_strictly_feasible(prog, cold, opts, &it);
    rep.phase1_iterations += it;
    return z;
  };

  bool have_start = false;
  bool warm = false;
  if (warm_start && warm_start->size() == n) {
    if (strictly_feasible(prog, *warm_start)) {
      x = *warm_start;
      have_start = warm = true;
      // A previous optimum hugs its active constraints, where the barrier
      // is dominated by round-off; move it slightly toward the cold point.
      if (opts.warm_pullback > 0.0 && strictly_feasible(prog, cold)) {
        const Eigen::VectorXd pulled = x + opts.warm_pullback * (cold - x);
        if (strictly_feasible(prog, pulled)) x = pulled;
      }
    } else if (auto c = cold_point()) {
      for (double theta : {0.99, 0.9, 0.5, 0.25}) {
        const Eigen::VectorXd blend = *c + theta * (*warm_start - *c);
        if (strictly_feasible(prog, blend)) {
          x = blend;
          have_start = warm = true;
          break;
        }
      }
      if (!have_start) {
        x = *c;
        have_start = true;
      }
    }
  } else if (auto c = cold_point()) {
    x = *c;
    have_start = true;
  }
  if (!have_start) {
    rep.status = SolveStatus::kInfeasible;
    rep.message = "no strictly feasible point found";
    rep.x = cold;
    rep.objective = prog.objective().value(cold);
    rep.primal_infeasibility = point_infeasibility(prog, cold);
    return rep;
  }

  const int m = static_cast<int>(prog.inequalities().size());
  if (warm && opts.estimate_t0_from_warm_start && m > 0) {
    const double t_max = m / opts.gap_tol;
    t0 = std::clamp(eng.estimate_t(x), 1.0, t_max);
    // The estimate only says which t the point is most central for; back
    // off while the Newton decrement there shows it is still far from the
    // central path, since centering at large t converges slowly.
    while (t0 > 1.0) {
      const double lambda2 = eng.decrement(x, t0);
      if (std::isfinite(lambda2) && lambda2 <= m) break;
      t0 = std::max(1.0, t0 / 10.0);
    }
  }

  int iters = 0;
  auto lr = eng.run(x, t0, iters);
  rep.x = x;
  rep.newton_iterations = iters;
  rep.barrier_stages = lr.stages;
  rep.final_t = lr.t;
  rep.objective = prog.objective().value(x);
  rep.primal_infeasibility = point_infeasibility(prog, x);
  if (eng.dx.size() == n) rep.stationarity = eng.stationarity(x, lr.t);
  if (!lr.complete) {
    rep.status = lr.status;
    rep.message = lr.why;
    return rep;
  }
  if (rep.primal_infeasibility > 1e-7) {
    rep.status = SolveStatus::kNumericFailure;
    rep.message = "final point violates constraints";
    return rep;
  }
  if (rep.stationarity > 1e-6) {
    rep.status = SolveStatus::kNumericFailure;
    std::ostringstream os;
    os << "stationarity residual " << rep.stationarity << " above 1e-6";
    rep.message = os.str();
    return rep;
  }
  rep.status = SolveStatus::kOptimal;
  return rep;
}

DerivativeError atom_derivative_error(const Atom& atom, const Eigen::VectorXd& x) {
  DerivativeError err;
  AtomEval e0;
  if (!atom_eval(atom, x, true, e0)) return {kInf, kInf};
  const int d = atom.local_dim();
  Eigen::MatrixXd fd_h(d, d);
  Eigen::VectorXd fd_g(d);
  Eigen::VectorXd xp = x;
  for (int j = 0; j < d; ++j) {
    const int idx = atom.vars[j];
    const double h = 1e-6 * (1.0 + std::abs(x[idx]));
    xp[idx] = x[idx] + h;
    const volatile double up = xp[idx];
    AtomEval ep, em;
    const bool okp = atom_eval(atom, xp, false, ep);
    xp[idx] = x[idx] - h;
    const volatile double down = xp[idx];
    const bool okm = atom_eval(atom, xp, false, em);
    xp[idx] = x[idx];
    if (!okp || !okm) return {kInf, kInf};
    const double step = up - down;
    fd_g[j] = (ep.value - em.value) / step;
    fd_h.col(j) = (ep.grad - em.grad) / step;
  }
  const double gscale = 1e-8 * (1.0 + e0.grad.cwiseAbs().maxCoeff());
  for (int j = 0; j < d; ++j) {
    const double denom = std::max(std::abs(e0.grad[j]), std::abs(fd_g[j])) + gscale;
    err.gradient = std::max(err.gradient, std::abs(e0.grad[j] - fd_g[j]) / denom);
  }
  const double hscale = 1e-8 * (1.0 + e0.hess.cwiseAbs().maxCoeff());
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const double denom = std::max(std::abs(e0.hess(j, k)), std::abs(fd_h(j, k))) + hscale;
      err.hessian = std::max(err.hessian, std::abs(e0.hess(j, k) - fd_h(j, k)) / denom);
    }
  }
  return err;
}

double gradient_check(const ConvexProgram& prog, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (const auto& a : prog.objective().atoms) worst = std::max(worst, atom_derivative_error(a, x).worst());
  for (const auto& f : prog.inequalities()) {
    for (const auto& a : f.atoms) worst = std::max(worst, atom_derivative_error(a, x).worst());
  }
  return worst;
}

}  // namespace uavsee::convex
