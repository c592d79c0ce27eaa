#include "uavsee/power_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace uavsee {

namespace {

constexpr double kLog2e = std::numbers::log2e;

std::vector<double> slot_powers(const PowerSchedule& p, int slot) {
  std::vector<double> out(p.uav_count());
  for (int i = 0; i < p.uav_count(); ++i) out[i] = p.at(i, slot);
  return out;
}

PowerSurrogate linearize(const Vec2& ground, const std::vector<int>& set, int slot,
                         const PowerSchedule& p_r, const TrajectoryPlan& plan, const Scenario& sc) {
  PowerSurrogate s;
  s.uavs = set;
  s.p_r = slot_powers(p_r, slot);
  s.slope.assign(sc.uav_count(), 0.0);
  std::vector<double> x_r;
  for (int i : set) {
    s.gains.push_back(channel_gain(plan.uavs[i].q[slot], ground, sc));
    x_r.push_back(s.p_r[i]);
  }
  const LogAffineBound lb = log2_affine_upper(s.gains, sc.phys.noise_w, x_r);
  const double B = sc.phys.bandwidth_hz;
  s.value_at_expansion = B * lb.value;
  for (std::size_t j = 0; j < set.size(); ++j) s.slope[set[j]] = B * lb.gradient[j];
  return s;
}

}  // namespace

LogAffineBound log2_affine_upper(const std::vector<double>& a, double b, const std::vector<double>& x_r) {
  LogAffineBound out;
  out.x_r = x_r;
  double total = b;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * x_r[i];
  out.value = std::log2(total);
  out.gradient.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.gradient[i] = a[i] * kLog2e / total;
  return out;
}

double LogAffineBound::operator()(const std::vector<double>& x) const {
  double v = value;
  for (std::size_t i = 0; i < gradient.size(); ++i) v += gradient[i] * (x[i] - x_r[i]);
  return v;
}

double PowerSurrogate::operator()(const std::vector<double>& p) const {
  double v = value_at_expansion;
  for (std::size_t i = 0; i < slope.size(); ++i) v += slope[i] * (p[i] - p_r[i]);
  return v;
}

std::vector<int> all_uavs(const Scenario& sc) {
  std::vector<int> out(sc.uav_count());
  for (int i = 0; i < sc.uav_count(); ++i) out[i] = i;
  return out;
}

std::vector<int> interferers(int m2, const Scenario& sc) {
  std::vector<int> out;
  for (int i = 0; i < sc.uav_count(); ++i) {
    if (i != m2) out.push_back(i);
  }
  return out;
}

PowerSurrogate build_tilde_upper(int k2, int m2, int slot, const PowerSchedule& p_r,
                                 const TrajectoryPlan& plan, const Scenario& sc) {
  return linearize(sc.legit_users[k2], interferers(m2, sc), slot, p_r, plan, sc);
}

PowerSurrogate build_bar_upper(int k1, int /*m2*/, int slot, const PowerSchedule& p_r,
                               const TrajectoryPlan& plan, const Scenario& sc) {
  return linearize(sc.eavesdroppers[k1], all_uavs(sc), slot, p_r, plan, sc);
}

double log_received(const Vec2& ground, const std::vector<int>& uavs, int slot,
                    const std::vector<double>& p, const TrajectoryPlan& plan, const Scenario& sc) {
  double total = sc.phys.noise_w;
  for (int i : uavs) total += p[i] * channel_gain(plan.uavs[i].q[slot], ground, sc);
  return sc.phys.bandwidth_hz * std::log2(total);
}

double scheduled_secrecy(const TrajectoryPlan& plan, const PowerSchedule& powers,
                         const ScheduleMatrix& x, const Scenario& sc) {
  double total = 0.0;
  for (int n = 1; n <= sc.slot_count; ++n) {
    for (int k = 0; k < sc.user_count(); ++k) {
      const int m = x.serving(k, n);
      if (m < 0) continue;
      double eve = 0.0;
      for (const auto& w : sc.eavesdroppers) eve = std::max(eve, pair_rate(w, m, n, plan, powers, sc));
      total += pair_rate(sc.legit_users[k], m, n, plan, powers, sc) - eve;
    }
  }
  return total;
}

std::optional<convex::ConvexProgram> assemble_p21_slot(int slot, const ScheduleMatrix& x,
                                                       const TrajectoryPlan& plan,
                                                       const PowerSchedule& p_r, const Scenario& sc) {
  using namespace convex;
  std::vector<int> users;
  for (int k = 0; k < sc.user_count(); ++k) {
    if (x.serving(k, slot) >= 0) users.push_back(k);
  }
  if (users.empty()) return std::nullopt;

  const int M = sc.uav_count();
  const int K = static_cast<int>(users.size());
  const double sigma2 = sc.phys.noise_w;
  const double B = sc.phys.bandwidth_hz;
  const double pmax = sc.phys.p_max_w;
  const std::vector<int> all = all_uavs(sc);

  ConvexProgram prog;
  const int p0 = prog.add_block("p", M);
  const int tau0 = prog.add_block("tau", K);
  const int gam0 = prog.add_block("gamma", K);

  Function obj;
  for (int j = 0; j < K; ++j) obj.add(affine(Lin::var(tau0 + j, -1.0)));
  prog.set_objective(obj);

  // log2(1 + sum_{i in set} p_i h_i / sigma^2) as a scaled neg-log atom.
  auto log_term = [&](const Vec2& ground, const std::vector<int>& set) {
    Lin u(1.0);
    for (int i : set) u.add(p0 + i, channel_gain(plan.uavs[i].q[slot], ground, sc) / sigma2);
    return neg_log(u, 1.0 / std::numbers::ln2);
  };

  std::vector<double> pstart(M);
  for (int i = 0; i < M; ++i) pstart[i] = std::clamp(p_r.at(i, slot), 1e-3 * pmax, (1.0 - 1e-3) * pmax);
  Eigen::VectorXd start = Eigen::VectorXd::Zero(prog.var_count());
  for (int i = 0; i < M; ++i) start[p0 + i] = pstart[i];

  for (int j = 0; j < K; ++j) {
    const int k = users[j];
    const int m = x.serving(k, slot);
    const std::vector<int> inter = interferers(m, sc);
    const Vec2& wk = sc.legit_users[k];

    // tau + gamma - Rbar/B + Rtilde_up/B <= 0
    const PowerSurrogate up = build_tilde_upper(k, m, slot, p_r, plan, sc);
    Function legit;
    legit.label = "legit user " + std::to_string(k) + " via SUAV " + std::to_string(m);
    Lin lin = Lin::var(tau0 + j);
    lin.add(gam0 + j, 1.0);
    double interference_r = 0.0;
    for (int i : inter) interference_r += up.p_r[i] * channel_gain(plan.uavs[i].q[slot], wk, sc);
    double offset = std::log2(1.0 + interference_r / sigma2);
    for (int i : inter) {
      lin.add(p0 + i, up.slope[i] / B);
      offset -= up.slope[i] / B * up.p_r[i];
    }
    lin.plus(offset);
    legit.add(affine(lin));
    legit.add(log_term(wk, all));
    const double legit_at_start = log_received(wk, all, slot, pstart, plan, sc) / B -
                                  up(pstart) / B;

    double gamma_start = -1e300;
    for (int e = 0; e < sc.eve_count(); ++e) {
      const Vec2& we = sc.eavesdroppers[e];
      const PowerSurrogate bar = build_bar_upper(e, m, slot, p_r, plan, sc);
      // -gamma + Rbar_up/B - Rtilde/B <= 0
      Function eve;
      eve.label = "eavesdropper " + std::to_string(e) + " on SUAV " + std::to_string(m);
      double total_r = 0.0;
      for (int i : all) total_r += bar.p_r[i] * channel_gain(plan.uavs[i].q[slot], we, sc);
      Lin el = Lin::var(gam0 + j, -1.0);
      double eoff = std::log2(1.0 + total_r / sigma2);
      for (int i : all) {
        el.add(p0 + i, bar.slope[i] / B);
        eoff -= bar.slope[i] / B * bar.p_r[i];
      }
      el.plus(eoff);
      eve.add(affine(el));
      if (!inter.empty()) eve.add(log_term(we, inter));
      prog.add_inequality(std::move(eve));
      gamma_start = std::max(gamma_start, bar(pstart) / B - log_received(we, inter, slot, pstart, plan, sc) / B);
    }
    start[gam0 + j] = gamma_start + 1.0;
    start[tau0 + j] = legit_at_start - start[gam0 + j] - 1.0;
    prog.add_inequality(std::move(legit));
  }
  for (int i = 0; i < M; ++i) {
    Function lo;
    lo.label = "p >= 0";
    lo.add(affine(Lin::var(p0 + i, -1.0)));
    prog.add_inequality(std::move(lo));
    Function hi;
    hi.label = "p <= p_max";
    hi.add(affine(Lin::var(p0 + i, 1.0).plus(-pmax)));
    prog.add_inequality(std::move(hi));
  }
  prog.initial_point = start;
  return prog;
}

P21Result solve_p21(const ScheduleMatrix& x, const TrajectoryPlan& plan, const PowerSchedule& p_r,
                    const Scenario& sc) {
  P21Result res;
  res.powers = p_r;
  res.slot_objective.assign(sc.slot_count, 0.0);
  const double B = sc.phys.bandwidth_hz;
  const int M = sc.uav_count();
  for (int n = 1; n <= sc.slot_count; ++n) {
    auto prog = assemble_p21_slot(n, x, plan, p_r, sc);
    if (!prog) continue;
    convex::SolveReport rep = convex::solve(*prog);
    if (!rep.ok()) {
      std::ostringstream os;
      os << "power program for slot " << n << " failed: " << convex::to_string(rep.status) << " ("
         << rep.message << ")";
      throw SolverError(os.str());
    }
    for (int i = 0; i < M; ++i) {
      res.powers.p[i][n - 1] = std::clamp(rep.x[i], 0.0, sc.phys.p_max_w);
    }
    res.slot_objective[n - 1] = -rep.objective * B;
    res.objective += res.slot_objective[n - 1];
    res.reports.push_back(std::move(rep));
  }
  return res;
}

PowerLoopResult sca_power_loop(const ScheduleMatrix& x, const TrajectoryPlan& plan,
                               const PowerSchedule& p_init, const Scenario& sc,
                               const PowerLoopOptions& opts) {
  PowerLoopResult res;
  res.powers = p_init;
  double current = scheduled_secrecy(plan, p_init, x, sc);
  res.objective_trace.push_back(current);
  for (int it = 0; it < opts.max_iterations; ++it) {
    ++res.iterations;
    const P21Result step = solve_p21(x, plan, res.powers, sc);
    const double next = scheduled_secrecy(plan, step.powers, x, sc);
    if (next < current) {
      // Surrogate optimum did not improve the true objective (solver
      // round-off); keep the incumbent.
      res.converged = true;
      break;
    }
    const double gain = next - current;
    res.powers = step.powers;
    res.objective_trace.push_back(next);
    current = next;
    if (gain <= opts.rel_tol * std::abs(current)) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace uavsee
