#include "uavsee/convex/program.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace uavsee::convex {

double Function::value(const Eigen::VectorXd& x) const {
  double v = constant;
  for (const auto& a : atoms) v += atom_value(a, x);
  return v;
}

int ConvexProgram::add_block(const std::string& name, int size) {
  if (size < 0) throw std::invalid_argument("block size must be non-negative");
  blocks_.push_back({name, var_count_, size});
  var_count_ += size;
  return blocks_.back().offset;
}

double ConvexProgram::infeasibility(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const auto& f : inequalities_) worst = std::max(worst, f.value(x));
  for (const auto& e : equalities_) {
    double r = -e.rhs;
    for (const auto& [j, c] : e.terms) r += c * x[j];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

namespace {

std::string var_name(const ConvexProgram& prog, int index) {
  for (const auto& b : prog.blocks()) {
    if (index >= b.offset && index < b.offset + b.size) {
      return b.name + "[" + std::to_string(index - b.offset) + "]";
    }
  }
  return "x[" + std::to_string(index) + "]";
}

void dump_function(const ConvexProgram& prog, const Function& f, std::ostream& os) {
  if (!f.label.empty()) os << "  # " << f.label << "\n";
  for (const auto& a : f.atoms) {
    os << "  " << a.scale << " * " << to_string(a.kind);
    if (a.kind == AtomKind::kLogSumExp) os << "(c=" << a.constant << ")";
    os << " of";
    for (int r = 0; r < a.arg_dim(); ++r) {
      os << (r == 0 ? " [" : "; ");
      bool first = true;
      for (int j = 0; j < a.local_dim(); ++j) {
        if (a.A(r, j) == 0.0) continue;
        os << (first ? "" : " + ") << a.A(r, j) << "*" << var_name(prog, a.vars[j]);
        first = false;
      }
      if (a.b[r] != 0.0 || first) os << (first ? "" : " + ") << a.b[r];
    }
    os << "]\n";
  }
  if (f.constant != 0.0) os << "  + " << f.constant << "\n";
}

}  // namespace

void ConvexProgram::dump(std::ostream& os) const {
  os << "variables " << var_count_ << "\n";
  for (const auto& b : blocks_) os << "block " << b.name << " offset " << b.offset << " size " << b.size << "\n";
  os << "minimize\n";
  dump_function(*this, objective_, os);
  for (std::size_t i = 0; i < inequalities_.size(); ++i) {
    os << "subject to [" << i << "] <= 0\n";
    dump_function(*this, inequalities_[i], os);
  }
  for (std::size_t i = 0; i < equalities_.size(); ++i) {
    const auto& e = equalities_[i];
    os << "equality [" << i << "]" << (e.label.empty() ? "" : " " + e.label) << ":";
    for (const auto& [j, c] : e.terms) os << " " << c << "*" << var_name(*this, j);
    os << " = " << e.rhs << "\n";
  }
}

}  // namespace uavsee::convex
