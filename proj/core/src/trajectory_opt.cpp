#include "uavsee/trajectory_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace uavsee {

namespace {

using convex::Function;
using convex::Lin;

constexpr double kLog2e = std::numbers::log2e;
constexpr double kMargin = 1e-3;

std::vector<Vec2> positions(const TrajectoryPlan& plan, int slot) {
  std::vector<Vec2> q(plan.uav_count());
  for (int i = 0; i < plan.uav_count(); ++i) q[i] = plan.uavs[i].q[slot];
  return q;
}

// log2(1 + sum g_i / (H^2 + d_i)) with g = p beta0 / sigma^2, and its
// gradient in the squared distances d_i.
struct NormalizedLog {
  double value = 0.0;
  std::vector<double> coef;  // -d value / d d_i >= 0
  std::vector<double> d2;
};

NormalizedLog normalized_log(const Vec2& ground, const std::vector<int>& set, int slot,
                             const std::vector<Vec2>& q, const PowerSchedule& powers,
                             const Scenario& sc) {
  const double H2 = sc.phys.altitude_m * sc.phys.altitude_m;
  NormalizedLog out;
  double sum = 1.0;
  std::vector<double> g(set.size());
  for (std::size_t j = 0; j < set.size(); ++j) {
    const int i = set[j];
    g[j] = powers.at(i, slot) * sc.phys.beta0 / sc.phys.noise_w;
    out.d2.push_back((q[i] - ground).squaredNorm());
    sum += g[j] / (H2 + out.d2[j]);
  }
  out.value = std::log2(sum);
  for (std::size_t j = 0; j < set.size(); ++j) {
    const double den = H2 + out.d2[j];
    out.coef.push_back(kLog2e * g[j] / (den * den) / sum);
  }
  return out;
}

DistanceSurrogate surrogate_from(const Vec2& ground, const std::vector<int>& set, int slot,
                                 const TrajectoryPlan& plan_r, const PowerSchedule& powers,
                                 const Scenario& sc) {
  const NormalizedLog nl = normalized_log(ground, set, slot, positions(plan_r, slot), powers, sc);
  const double B = sc.phys.bandwidth_hz;
  DistanceSurrogate s;
  s.ground = ground;
  s.uavs = set;
  s.d2_r = nl.d2;
  s.value_at_expansion = B * (nl.value + std::log2(sc.phys.noise_w));
  for (double c : nl.coef) s.coef.push_back(B * c);
  return s;
}

std::vector<int> positive(const std::vector<int>& set, int slot, const PowerSchedule& powers) {
  std::vector<int> out;
  for (int i : set) {
    if (powers.at(i, slot) > 0.0) out.push_back(i);
  }
  return out;
}

// Squared-norm atom |q_i[n] - w|^2 with weight c.
convex::Atom distance_atom(const P33Layout& L, int uav, int slot, const Vec2& w, double c) {
  return convex::squared_norm({Lin::var(L.q(uav, slot, 0)).plus(-w.x()),
                               Lin::var(L.q(uav, slot, 1)).plus(-w.y())},
                              c);
}

// S - chi_lb(q) <= 0 where chi_lb is the tangent of |q - w|^2 at q_r.
Function distance_slack_row(const P33Layout& L, int uav, int slot, const Vec2& q_r, const Vec2& w,
                            int slack) {
  const Vec2 d = q_r - w;
  Lin u = Lin::var(slack);
  u.add(L.q(uav, slot, 0), -2.0 * d.x());
  u.add(L.q(uav, slot, 1), -2.0 * d.y());
  u.plus(-(d.squaredNorm() - 2.0 * d.dot(q_r)));
  Function f;
  f.label = "distance slack";
  f.add(convex::affine(u));
  return f;
}

// -z - log(H^2 + S) + log g <= 0, i.e. e^z >= g / (H^2 + S).
Function exponent_row(int z, int slack, double H2, double g) {
  Function f;
  f.label = "interference exponent";
  f.add(convex::affine(Lin::var(z, -1.0).plus(std::log(g))));
  f.add(convex::neg_log(Lin::var(slack).plus(H2)));
  return f;
}

// (1/ln2) log(1 + sum e^z) - varpi <= 0
Function lse_row(int varpi, const std::vector<int>& z) {
  Function f;
  f.label = "interference log";
  std::vector<Lin> u;
  for (int zi : z) u.push_back(Lin::var(zi));
  f.add(convex::log_sum_exp(u, 1.0, 1.0 / std::numbers::ln2));
  f.add(convex::affine(Lin::var(varpi, -1.0)));
  return f;
}

double lse2(const std::vector<double>& z) {
  double sum = 1.0;
  for (double v : z) sum += std::exp(v);
  return std::log2(sum);
}

}  // namespace

double taylor_speed_lb(const Vec2& v, const Vec2& v_r) {
  return v_r.squaredNorm() + 2.0 * v_r.dot(v - v_r);
}

double taylor_dist_lb(const Vec2& q, const Vec2& q_r, const Vec2& w) {
  const Vec2 d = q_r - w;
  return d.squaredNorm() + 2.0 * d.dot(q - q_r);
}

double DistanceSurrogate::operator()(const std::vector<Vec2>& q) const {
  double v = value_at_expansion;
  for (std::size_t j = 0; j < uavs.size(); ++j) {
    v -= coef[j] * ((q[uavs[j]] - ground).squaredNorm() - d2_r[j]);
  }
  return v;
}

DistanceSurrogate build_bar_lb(int k2, int /*m2*/, int slot, const TrajectoryPlan& plan_r,
                               const PowerSchedule& powers, const Scenario& sc) {
  return surrogate_from(sc.legit_users[k2], all_uavs(sc), slot, plan_r, powers, sc);
}

DistanceSurrogate build_tilde_lb(int k1, int m2, int slot, const TrajectoryPlan& plan_r,
                                 const PowerSchedule& powers, const Scenario& sc) {
  return surrogate_from(sc.eavesdroppers[k1], interferers(m2, sc), slot, plan_r, powers, sc);
}

double log_received_at(const Vec2& ground, const std::vector<int>& uavs, int slot,
                       const std::vector<Vec2>& q, const PowerSchedule& powers, const Scenario& sc) {
  double total = sc.phys.noise_w;
  for (int i : uavs) {
    total += powers.at(i, slot) * sc.phys.beta0 /
             ((q[i] - ground).squaredNorm() + sc.phys.altitude_m * sc.phys.altitude_m);
  }
  return sc.phys.bandwidth_hz * std::log2(total);
}

P33Program assemble_p33(const ScheduleMatrix& x, const PowerSchedule& powers,
                        const TrajectoryPlan& plan_r, double zeta, const Scenario& sc,
                        TrajectoryObjective objective) {
  const int M = sc.uav_count();
  const int N = sc.slot_count;
  if (plan_r.uav_count() != M || plan_r.slot_count() != N) {
    throw AssemblyError("expansion plan does not match the scenario dimensions");
  }
  const double delta = sc.phys.slot_s;
  const double H2 = sc.phys.altitude_m * sc.phys.altitude_m;
  const double gain_scale = sc.phys.beta0 / sc.phys.noise_w;
  const bool with_rate = objective != TrajectoryObjective::kEnergyMin;
  const bool with_energy = objective != TrajectoryObjective::kRateMax;

  P33Program out;
  out.objective = objective;
  out.zeta = zeta;
  P33Layout& L = out.layout;
  L.slots = N;
  L.uavs = M;
  convex::ConvexProgram& prog = out.prog;

  L.kin0 = prog.add_block("kinematics", M * (N + 1) * 6);
  if (with_energy) L.mu0 = prog.add_block("mu", M * N);

  // Active pairs and the slots they occupy.
  std::vector<char> slot_active(N + 1, 0);
  std::vector<char> involved(M, 0);
  if (with_rate) {
    for (int n = 1; n <= N; ++n) {
      for (int k = 0; k < sc.user_count(); ++k) {
        const int m = x.serving(k, n);
        if (m < 0) continue;
        double eve = 0.0;
        for (const auto& w : sc.eavesdroppers) eve = std::max(eve, pair_rate(w, m, n, plan_r, powers, sc));
        if (pair_rate(sc.legit_users[k], m, n, plan_r, powers, sc) - eve <= 0.0) continue;
        P33Layout::Pair pr;
        pr.user = k;
        pr.slot = n;
        pr.suav = m;
        pr.inter = positive(interferers(m, sc), n, powers);
        L.pairs.push_back(std::move(pr));
        slot_active[n] = 1;
      }
    }
    for (auto& pr : L.pairs) {
      pr.Phi = prog.add_block("Phi", 1);
      pr.phi = prog.add_block("phi", 1);
      if (!pr.inter.empty()) {
        pr.varpi = prog.add_block("varpi", 1);
        const int s0 = prog.add_block("S", static_cast<int>(pr.inter.size()));
        const int z0 = prog.add_block("z", static_cast<int>(pr.inter.size()));
        for (std::size_t j = 0; j < pr.inter.size(); ++j) {
          pr.S.push_back(s0 + static_cast<int>(j));
          pr.z.push_back(z0 + static_cast<int>(j));
        }
      }
      involved[pr.suav] = 1;
      for (int i : pr.inter) involved[i] = 1;
    }
    for (int n = 1; n <= N; ++n) {
      if (!slot_active[n]) continue;
      for (int e = 0; e < sc.eve_count(); ++e) {
        P33Layout::Eve ev;
        ev.eve = e;
        ev.slot = n;
        ev.uavs = positive(all_uavs(sc), n, powers);
        ev.varpi = prog.add_block("varpi_eve", 1);
        const int z0 = prog.add_block("Z", static_cast<int>(ev.uavs.size()));
        const int zb0 = prog.add_block("zbar", static_cast<int>(ev.uavs.size()));
        for (std::size_t j = 0; j < ev.uavs.size(); ++j) {
          ev.Z.push_back(z0 + static_cast<int>(j));
          ev.zbar.push_back(zb0 + static_cast<int>(j));
        }
        L.eves.push_back(std::move(ev));
      }
    }
  }
  L.pinned.assign(M, 0);
  for (int i = 0; i < M; ++i) L.pinned[i] = involved[i] ? 0 : 1;

  Eigen::VectorXd interior = Eigen::VectorXd::Zero(prog.var_count());
  Eigen::VectorXd tight = Eigen::VectorXd::Zero(prog.var_count());

  // Kinematics: cyclic double-integrator recursion and magnitude bounds.
  for (int i = 0; i < M; ++i) {
    const UavTrack& u = plan_r.uavs[i];
    for (int n = 0; n <= N; ++n) {
      const int nn = (n == N) ? 0 : n + 1;
      for (int c = 0; c < 2; ++c) {
        convex::EqualityRow pos;
        pos.label = "position dynamics";
        pos.terms = {{L.q(i, nn, c), 1.0},
                     {L.q(i, n, c), -1.0},
                     {L.v(i, n, c), -delta},
                     {L.a(i, n, c), -0.5 * delta * delta}};
        prog.add_equality(std::move(pos));
        convex::EqualityRow vel;
        vel.label = "velocity dynamics";
        vel.terms = {{L.v(i, nn, c), 1.0}, {L.v(i, n, c), -1.0}, {L.a(i, n, c), -delta}};
        prog.add_equality(std::move(vel));
      }
      Function vb;
      vb.label = "speed bound";
      vb.add(convex::squared_norm({Lin::var(L.v(i, n, 0)), Lin::var(L.v(i, n, 1))}));
      vb.plus(-sc.phys.v_max * sc.phys.v_max);
      prog.add_inequality(std::move(vb));
      Function ab;
      ab.label = "acceleration bound";
      ab.add(convex::squared_norm({Lin::var(L.a(i, n, 0)), Lin::var(L.a(i, n, 1))}));
      ab.plus(-sc.phys.a_max * sc.phys.a_max);
      prog.add_inequality(std::move(ab));
      for (int c = 0; c < 2; ++c) {
        for (Eigen::VectorXd* pt : {&interior, &tight}) {
          (*pt)[L.q(i, n, c)] = u.q[n][c];
          (*pt)[L.v(i, n, c)] = u.v[n][c];
          (*pt)[L.a(i, n, c)] = u.a[n][c];
        }
      }
    }
    if (L.pinned[i]) {
      for (int c = 0; c < 2; ++c) {
        convex::EqualityRow pin;
        pin.label = "pinned start";
        pin.terms = {{L.q(i, 0, c), 1.0}};
        pin.rhs = u.q[0][c];
        prog.add_equality(std::move(pin));
      }
    }
  }

  // Speed slack: mu >= mu_min and mu^2 <= tangent of |v|^2.
  if (with_energy) {
    for (int i = 0; i < M; ++i) {
      for (int n = 1; n <= N; ++n) {
        Vec2 vr = plan_r.uavs[i].v[n];
        const double speed = vr.norm();
        if (speed < 2.0 * kMuMin) vr = speed > 0.0 ? vr * (2.0 * kMuMin / speed) : Vec2(2.0 * kMuMin, 0.0);
        Function lo;
        lo.label = "speed slack floor";
        lo.add(convex::affine(Lin::var(L.mu(i, n), -1.0).plus(kMuMin)));
        prog.add_inequality(std::move(lo));
        Function up;
        up.label = "speed slack";
        up.add(convex::squared_norm({Lin::var(L.mu(i, n))}));
        Lin t = Lin::var(L.v(i, n, 0), -2.0 * vr.x());
        t.add(L.v(i, n, 1), -2.0 * vr.y());
        t.plus(vr.squaredNorm());
        up.add(convex::affine(t));
        prog.add_inequality(std::move(up));
        interior[L.mu(i, n)] = speed * (1.0 - kMargin);
        tight[L.mu(i, n)] = speed;
      }
    }
  }

  // Eavesdropper side.
  std::vector<std::vector<double>> eve_varpi_tight(N + 1, std::vector<double>(sc.eve_count(), 0.0));
  std::vector<std::vector<double>> eve_varpi_int(N + 1, std::vector<double>(sc.eve_count(), 0.0));
  std::vector<std::vector<int>> eve_varpi_idx(N + 1, std::vector<int>(sc.eve_count(), -1));
  for (const auto& ev : L.eves) {
    const Vec2& w = sc.eavesdroppers[ev.eve];
    std::vector<double> zt, zi;
    for (std::size_t j = 0; j < ev.uavs.size(); ++j) {
      const int i = ev.uavs[j];
      const Vec2& qr = plan_r.uavs[i].q[ev.slot];
      const double d2 = (qr - w).squaredNorm();
      const double g = powers.at(i, ev.slot) * gain_scale;
      prog.add_inequality(exponent_row(ev.zbar[j], ev.Z[j], H2, g));
      prog.add_inequality(distance_slack_row(L, i, ev.slot, qr, w, ev.Z[j]));
      tight[ev.Z[j]] = d2;
      tight[ev.zbar[j]] = std::log(g) - std::log(H2 + d2);
      interior[ev.Z[j]] = d2 - kMargin * (H2 + d2);
      interior[ev.zbar[j]] = std::log(g) - std::log(H2 + interior[ev.Z[j]]) + kMargin;
      zt.push_back(tight[ev.zbar[j]]);
      zi.push_back(interior[ev.zbar[j]]);
    }
    prog.add_inequality(lse_row(ev.varpi, ev.zbar));
    tight[ev.varpi] = lse2(zt);
    interior[ev.varpi] = lse2(zi) + kMargin;
    eve_varpi_tight[ev.slot][ev.eve] = tight[ev.varpi];
    eve_varpi_int[ev.slot][ev.eve] = interior[ev.varpi];
    eve_varpi_idx[ev.slot][ev.eve] = ev.varpi;
  }

  // Legitimate side and the per-pair eavesdropper coupling.
  for (const auto& pr : L.pairs) {
    const int n = pr.slot;
    const Vec2& wk = sc.legit_users[pr.user];
    const std::vector<Vec2> qr = positions(plan_r, n);

    std::vector<double> zt, zi;
    for (std::size_t j = 0; j < pr.inter.size(); ++j) {
      const int i = pr.inter[j];
      const double d2 = (qr[i] - wk).squaredNorm();
      const double g = powers.at(i, n) * gain_scale;
      prog.add_inequality(exponent_row(pr.z[j], pr.S[j], H2, g));
      prog.add_inequality(distance_slack_row(L, i, n, qr[i], wk, pr.S[j]));
      tight[pr.S[j]] = d2;
      tight[pr.z[j]] = std::log(g) - std::log(H2 + d2);
      interior[pr.S[j]] = d2 - kMargin * (H2 + d2);
      interior[pr.z[j]] = std::log(g) - std::log(H2 + interior[pr.S[j]]) + kMargin;
      zt.push_back(tight[pr.z[j]]);
      zi.push_back(interior[pr.z[j]]);
    }
    double varpi_t = 0.0, varpi_i = 0.0;
    if (pr.varpi >= 0) {
      prog.add_inequality(lse_row(pr.varpi, pr.z));
      varpi_t = tight[pr.varpi] = lse2(zt);
      varpi_i = interior[pr.varpi] = lse2(zi) + kMargin;
    }

    // phi >= varpi_eve - Rtilde_lb / B for every eavesdropper.
    double phi_t = -std::numeric_limits<double>::infinity();
    double phi_i = phi_t;
    const std::vector<int> inter_e = positive(interferers(pr.suav, sc), n, powers);
    for (int e = 0; e < sc.eve_count(); ++e) {
      const Vec2& we = sc.eavesdroppers[e];
      const NormalizedLog nl = normalized_log(we, inter_e, n, qr, powers, sc);
      Function f;
      f.label = "eavesdropper " + std::to_string(e) + " on SUAV " + std::to_string(pr.suav);
      Lin u = Lin::var(eve_varpi_idx[n][e]);
      u.add(pr.phi, -1.0);
      double off = -nl.value;
      for (std::size_t j = 0; j < inter_e.size(); ++j) {
        off -= nl.coef[j] * nl.d2[j];
        f.add(distance_atom(L, inter_e[j], n, we, nl.coef[j]));
      }
      u.plus(off);
      f.add(convex::affine(u));
      prog.add_inequality(std::move(f));
      phi_t = std::max(phi_t, eve_varpi_tight[n][e] - nl.value);
      phi_i = std::max(phi_i, eve_varpi_int[n][e] - nl.value);
    }
    if (sc.eve_count() == 0) phi_t = phi_i = 0.0;
    tight[pr.phi] = phi_t;
    interior[pr.phi] = phi_i + kMargin;

    // Phi + phi + varpi - Rbar_lb / B <= 0
    const std::vector<int> all_pos = positive(all_uavs(sc), n, powers);
    const NormalizedLog nl = normalized_log(wk, all_pos, n, qr, powers, sc);
    Function f;
    f.label = "legit user " + std::to_string(pr.user) + " via SUAV " + std::to_string(pr.suav);
    Lin u = Lin::var(pr.Phi);
    u.add(pr.phi, 1.0);
    if (pr.varpi >= 0) u.add(pr.varpi, 1.0);
    double off = -nl.value;
    for (std::size_t j = 0; j < all_pos.size(); ++j) {
      off -= nl.coef[j] * nl.d2[j];
      f.add(distance_atom(L, all_pos[j], n, wk, nl.coef[j]));
    }
    u.plus(off);
    f.add(convex::affine(u));
    prog.add_inequality(std::move(f));
    tight[pr.Phi] = nl.value - varpi_t - phi_t;
    interior[pr.Phi] = nl.value - varpi_i - interior[pr.phi] - kMargin;
  }

  out.interior = interior;
  out.tight = tight;
  prog.initial_point = interior;
  set_p33_zeta(out, zeta, sc);
  return out;
}

void set_p33_zeta(P33Program& p, double zeta, const Scenario& sc) {
  p.zeta = zeta;
  const P33Layout& L = p.layout;
  Function obj;
  obj.label = "objective";
  if (p.objective != TrajectoryObjective::kEnergyMin) {
    for (const auto& pr : L.pairs) obj.add(convex::affine(Lin::var(pr.Phi, -1.0)));
  }
  const double weight = p.objective == TrajectoryObjective::kEnergyMin ? 1.0
                        : p.objective == TrajectoryObjective::kSee     ? zeta
                                                                       : 0.0;
  if (weight != 0.0 && L.mu0 >= 0) {
    const double w = weight * sc.phys.slot_s;
    const double g2 = sc.phys.gravity * sc.phys.gravity;
    for (int i = 0; i < L.uavs; ++i) {
      for (int n = 1; n <= L.slots; ++n) {
        const Lin mu = Lin::var(L.mu(i, n));
        obj.add(convex::cubed_norm({Lin::var(L.v(i, n, 0)), Lin::var(L.v(i, n, 1))}, w * sc.phys.c1));
        obj.add(convex::reciprocal(mu, w * sc.phys.c2));
        obj.add(convex::quad_over_lin({Lin::var(L.a(i, n, 0)), Lin::var(L.a(i, n, 1))}, mu,
                                      w * sc.phys.c2 / g2));
      }
    }
  }
  p.prog.set_objective(std::move(obj));
}

double p33_numerator(const P33Program& p, const Eigen::VectorXd& x) {
  double s = 0.0;
  for (const auto& pr : p.layout.pairs) s += x[pr.Phi];
  return s;
}

double p33_energy(const P33Program& p, const Eigen::VectorXd& x, const Scenario& sc) {
  const P33Layout& L = p.layout;
  if (L.mu0 < 0) return 0.0;
  const double g2 = sc.phys.gravity * sc.phys.gravity;
  double e = 0.0;
  for (int i = 0; i < L.uavs; ++i) {
    for (int n = 1; n <= L.slots; ++n) {
      const Vec2 v(x[L.v(i, n, 0)], x[L.v(i, n, 1)]);
      const Vec2 a(x[L.a(i, n, 0)], x[L.a(i, n, 1)]);
      const double mu = x[L.mu(i, n)];
      e += sc.phys.c1 * std::pow(v.norm(), 3) + sc.phys.c2 / mu + sc.phys.c2 * a.squaredNorm() / (mu * g2);
    }
  }
  return e * sc.phys.slot_s;
}

std::vector<double> p33_tightness(const P33Program& p, const Eigen::VectorXd& x,
                                  const PowerSchedule& powers, const Scenario& sc) {
  const double H2 = sc.phys.altitude_m * sc.phys.altitude_m;
  const double scale = sc.phys.noise_w / sc.phys.beta0;
  std::vector<double> out;
  for (const auto& pr : p.layout.pairs) {
    for (std::size_t j = 0; j < pr.inter.size(); ++j) {
      out.push_back(std::exp(x[pr.z[j]]) * scale * (H2 + x[pr.S[j]]) / powers.at(pr.inter[j], pr.slot));
    }
  }
  for (const auto& ev : p.layout.eves) {
    for (std::size_t j = 0; j < ev.uavs.size(); ++j) {
      out.push_back(std::exp(x[ev.zbar[j]]) * scale * (H2 + x[ev.Z[j]]) / powers.at(ev.uavs[j], ev.slot));
    }
  }
  return out;
}

TrajectoryPlan p33_plan(const P33Program& p, const Eigen::VectorXd& x, const Scenario& sc) {
  const P33Layout& L = p.layout;
  TrajectoryPlan plan = TrajectoryPlan::zeros(L.uavs, L.slots, sc.phys.slot_s);
  for (int i = 0; i < L.uavs; ++i) {
    UavTrack& u = plan.uavs[i];
    for (int n = 0; n <= L.slots; ++n) {
      u.q[n] = Vec2(x[L.q(i, n, 0)], x[L.q(i, n, 1)]);
      u.v[n] = Vec2(x[L.v(i, n, 0)], x[L.v(i, n, 1)]);
      u.a[n] = Vec2(x[L.a(i, n, 0)], x[L.a(i, n, 1)]);
    }
    u.q[L.slots + 1] = u.q[0];
    u.v[L.slots + 1] = u.v[0];
    u.a[L.slots + 1] = u.a[0];
  }
  return plan;
}

DinkelbachResult dinkelbach(const ScheduleMatrix& x, const PowerSchedule& powers,
                            const TrajectoryPlan& plan_r, const Scenario& sc,
                            const DinkelbachOptions& opts) {
  DinkelbachResult res;
  res.plan = plan_r;
  P33Program p = assemble_p33(x, powers, plan_r, opts.zeta0, sc, TrajectoryObjective::kSee);
  if (p.layout.pairs.empty()) {
    // Nothing to secure: the ratio is zero everywhere.
    res.converged = true;
    res.x = p.tight;
    return res;
  }
  double zeta = opts.zeta0;
  std::optional<Eigen::VectorXd> warm;
  double prev_F = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iterations; ++it) {
    set_p33_zeta(p, zeta, sc);
    const convex::SolveReport rep = convex::solve(p.prog, warm);
    if (!rep.ok()) {
      res.status = rep.status;
      res.message = "trajectory program: " + rep.message;
      return res;
    }
    DinkelbachStep step;
    step.zeta = zeta;
    step.numerator = p33_numerator(p, rep.x);
    step.energy = p33_energy(p, rep.x, sc);
    step.F = step.numerator - zeta * step.energy;
    step.newton_iterations = rep.newton_iterations + rep.phase1_iterations;
    res.history.push_back(step);
    res.x = rep.x;
    res.plan = p33_plan(p, rep.x, sc);
    warm = rep.x;
    if (step.F <= opts.epsilon) {
      res.converged = true;
      res.zeta_star = step.numerator / step.energy;
      return res;
    }
    if (it > 0 && step.F >= prev_F) {
      res.status = convex::SolveStatus::kNumericFailure;
      res.message = "Dinkelbach residual stopped decreasing";
      res.zeta_star = step.numerator / step.energy;
      return res;
    }
    prev_F = step.F;
    zeta = step.numerator / step.energy;
  }
  res.zeta_star = zeta;
  res.status = convex::SolveStatus::kMaxIter;
  res.message = "Dinkelbach iteration limit reached";
  return res;
}

ScalarDinkelbachResult dinkelbach_scalar(
    const std::function<std::pair<double, double>(double zeta)>& parametric_argmax, double epsilon,
    int max_iterations, double zeta0) {
  ScalarDinkelbachResult res;
  double zeta = zeta0;
  for (int it = 0; it < max_iterations; ++it) {
    const auto [f, g] = parametric_argmax(zeta);
    DinkelbachStep step;
    step.zeta = zeta;
    step.numerator = f;
    step.energy = g;
    step.F = f - zeta * g;
    res.history.push_back(step);
    zeta = f / g;
    if (step.F <= epsilon) {
      res.converged = true;
      break;
    }
  }
  res.zeta_star = zeta;
  return res;
}

double trajectory_objective_value(TrajectoryObjective mode, const TrajectoryPlan& plan,
                                  const PowerSchedule& powers, const ScheduleMatrix& x,
                                  const Scenario& sc) {
  switch (mode) {
    case TrajectoryObjective::kRateMax: return secrecy_report(plan, powers, x, sc).sum_bps;
    case TrajectoryObjective::kEnergyMin: return -propulsion_energy(plan, sc).total_j;
    case TrajectoryObjective::kSee: break;
  }
  return secrecy_report(plan, powers, x, sc).sum_bps / propulsion_energy(plan, sc).total_j;
}

TrajectoryLoopResult sca_trajectory_loop(const ScheduleMatrix& x, const PowerSchedule& powers,
                                         const TrajectoryPlan& plan_init, const Scenario& sc,
                                         const TrajectoryLoopOptions& opts) {
  TrajectoryLoopResult res;
  res.plan = plan_init;
  double current = trajectory_objective_value(opts.objective, plan_init, powers, x, sc);
  res.value_trace.push_back(current);
  const double B = sc.phys.bandwidth_hz;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    ++res.iterations;
    TrajectoryPlan candidate;
    TrajectoryTraceRow row;
    row.sca_iter = it;
    if (opts.objective == TrajectoryObjective::kSee) {
      DinkelbachOptions dopts;
      dopts.epsilon = opts.epsilon;
      dopts.zeta0 = current / B;
      const DinkelbachResult d = dinkelbach(x, powers, res.plan, sc, dopts);
      if (d.status != convex::SolveStatus::kOptimal && d.history.empty()) {
        throw SolverError("trajectory step " + std::to_string(it) + " failed: " + d.message);
      }
      candidate = d.plan;
      row.dinkelbach_iter = static_cast<int>(d.history.size());
      row.zeta = d.zeta_star * B;
      row.F = d.history.empty() ? 0.0 : d.history.back().F;
    } else {
      P33Program p = assemble_p33(x, powers, res.plan, 0.0, sc, opts.objective);
      const convex::SolveReport rep = convex::solve(p.prog);
      if (!rep.ok()) {
        throw SolverError("trajectory step " + std::to_string(it) + " failed: " +
                          convex::to_string(rep.status) + " (" + rep.message + ")");
      }
      candidate = p33_plan(p, rep.x, sc);
    }
    const double next = trajectory_objective_value(opts.objective, candidate, powers, x, sc);
    if (next < current || !check_feasibility(candidate, sc).empty()) {
      res.converged = true;
      break;
    }
    const double gain = next - current;
    res.plan = std::move(candidate);
    current = next;
    res.value_trace.push_back(current);
    row.true_value = current;
    row.energy_j = propulsion_energy(res.plan, sc).total_j;
    row.secrecy_bps = secrecy_report(res.plan, powers, x, sc).sum_bps;
    res.rows.push_back(row);
    if (gain <= opts.rel_tol * std::abs(current)) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace uavsee
