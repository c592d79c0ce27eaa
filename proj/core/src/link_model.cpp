#include "uavsee/link_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uavsee {

PowerSchedule PowerSchedule::uniform(int uav_count, int slot_count, double watts) {
  PowerSchedule out;
  out.p.assign(uav_count, std::vector<double>(slot_count, watts));
  return out;
}

void validate_powers(const PowerSchedule& powers, const Scenario& sc) {
  if (powers.uav_count() != sc.uav_count() || powers.slot_count() != sc.slot_count) {
    throw ValidationError("power schedule dimensions do not match the scenario");
  }
  for (int i = 0; i < powers.uav_count(); ++i) {
    for (int n = 1; n <= sc.slot_count; ++n) {
      const double p = powers.at(i, n);
      if (!(p >= 0.0 && p <= sc.phys.p_max_w)) {
        std::ostringstream os;
        os << "power bound: p[" << i << "][" << n << "] = " << p << " outside [0, p_max]";
        throw ValidationError(os.str());
      }
    }
  }
}

ScheduleMatrix ScheduleMatrix::empty(int slot_count, int user_count) {
  ScheduleMatrix x;
  x.suav_of.assign(slot_count, std::vector<int>(user_count, -1));
  return x;
}

void validate_schedule(const ScheduleMatrix& x, const Scenario& sc) {
  if (x.slot_count() != sc.slot_count || (sc.slot_count > 0 && x.user_count() != sc.user_count())) {
    throw ValidationError("schedule dimensions do not match the scenario");
  }
  for (int n = 1; n <= sc.slot_count; ++n) {
    std::vector<int> load(sc.suav_count, 0);
    for (int k = 0; k < sc.user_count(); ++k) {
      const int m = x.serving(k, n);
      if (m == -1) continue;
      if (m < 0 || m >= sc.suav_count) {
        throw ValidationError("schedule: user assigned to a non-SUAV index");
      }
      if (++load[m] > 1) {
        std::ostringstream os;
        os << "schedule: SUAV " << m << " serves more than one user in slot " << n;
        throw ValidationError(os.str());
      }
    }
  }
}

double channel_gain(const Vec2& uav_pos, const Vec2& ground_pos, const Scenario& sc) {
  const double h2 = sc.phys.altitude_m * sc.phys.altitude_m;
  return sc.phys.beta0 / ((uav_pos - ground_pos).squaredNorm() + h2);
}

double pair_rate(const Vec2& ground, int suav, int slot, const TrajectoryPlan& plan,
                 const PowerSchedule& powers, const Scenario& sc) {
  double signal = 0.0;
  double interference = 0.0;
  for (int i = 0; i < sc.uav_count(); ++i) {
    const double rx = powers.at(i, slot) * channel_gain(plan.uavs[i].q[slot], ground, sc);
    if (i == suav) {
      signal = rx;
    } else {
      interference += rx;
    }
  }
  return sc.phys.bandwidth_hz * std::log2(1.0 + signal / (interference + sc.phys.noise_w));
}

RateReport secrecy_report(const TrajectoryPlan& plan, const PowerSchedule& powers,
                          const ScheduleMatrix& x, const Scenario& sc) {
  const int k2 = sc.user_count();
  const int n_slots = sc.slot_count;
  RateReport rep;
  rep.legit_bps.assign(k2, std::vector<double>(n_slots, 0.0));
  rep.eve_bps.assign(k2, std::vector<double>(n_slots, 0.0));
  rep.secrecy_bps.assign(k2, std::vector<double>(n_slots, 0.0));
  rep.total_bps.assign(k2, 0.0);
  for (int n = 1; n <= n_slots; ++n) {
    for (int k = 0; k < k2; ++k) {
      const int m = x.serving(k, n);
      if (m < 0) continue;
      const double legit = pair_rate(sc.legit_users[k], m, n, plan, powers, sc);
      double eve = 0.0;
      for (const auto& w : sc.eavesdroppers) eve = std::max(eve, pair_rate(w, m, n, plan, powers, sc));
      rep.legit_bps[k][n - 1] = legit;
      rep.eve_bps[k][n - 1] = eve;
      rep.secrecy_bps[k][n - 1] = std::max(0.0, legit - eve);
      rep.total_bps[k] += rep.secrecy_bps[k][n - 1];
    }
  }
  for (double t : rep.total_bps) rep.sum_bps += t;
  return rep;
}

std::string to_string(SeeUnits units) {
  return units == SeeUnits::kBpsPerJoule ? "bps-per-joule" : "bits-per-joule";
}

SeeUnits parse_see_units(const std::string& text) {
  if (text == "bps-per-joule") return SeeUnits::kBpsPerJoule;
  if (text == "bits-per-joule") return SeeUnits::kBitsPerJoule;
  throw ValidationError("unknown SEE units '" + text + "' (bps-per-joule | bits-per-joule)");
}

double secrecy_energy_efficiency(double secrecy_sum_bps, double energy_j, double slot_s,
                                 SeeUnits units) {
  const double numerator = units == SeeUnits::kBitsPerJoule ? secrecy_sum_bps * slot_s : secrecy_sum_bps;
  return numerator / energy_j;
}

}  // namespace uavsee
