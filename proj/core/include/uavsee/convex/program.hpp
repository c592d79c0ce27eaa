#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "uavsee/convex/atom.hpp"

namespace uavsee::convex {

/// Sum of atoms plus a constant.
struct Function {
  std::vector<Atom> atoms;
  double constant = 0.0;
  std::string label;

  Function& add(Atom a) {
    atoms.push_back(std::move(a));
    return *this;
  }
  Function& plus(double c) {
    constant += c;
    return *this;
  }
  double value(const Eigen::VectorXd& x) const;
};

struct EqualityRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
  std::string label;
};

/// minimize f0(x) s.t. f_i(x) <= 0, A x = b over named variable blocks.
class ConvexProgram {
 public:
  struct Block {
    std::string name;
    int offset = 0;
    int size = 0;
  };

  /// Appends a block of `size` variables and returns its first index.
  int add_block(const std::string& name, int size);
  int var_count() const { return var_count_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  void set_objective(Function f) { objective_ = std::move(f); }
  const Function& objective() const { return objective_; }
  Function& objective() { return objective_; }

  /// Adds f(x) <= 0.
  void add_inequality(Function f) { inequalities_.push_back(std::move(f)); }
  const std::vector<Function>& inequalities() const { return inequalities_; }

  void add_equality(EqualityRow row) { equalities_.push_back(std::move(row)); }
  const std::vector<EqualityRow>& equalities() const { return equalities_; }

  /// Cold-start point; must lie in every atom domain. Zero if left empty.
  Eigen::VectorXd initial_point;

  /// Largest constraint violation max(f_i(x)_+, |A x - b|).
  double infeasibility(const Eigen::VectorXd& x) const;

  /// Human-readable listing of blocks, objective, constraints and equalities.
  void dump(std::ostream& os) const;

 private:
  int var_count_ = 0;
  std::vector<Block> blocks_;
  Function objective_;
  std::vector<Function> inequalities_;
  std::vector<EqualityRow> equalities_;
};

}  // namespace uavsee::convex
