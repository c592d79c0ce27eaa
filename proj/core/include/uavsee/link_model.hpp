#pragma once

#include <string>
#include <vector>

#include "uavsee/kinematics.hpp"
#include "uavsee/scenario.hpp"

namespace uavsee {

/// Transmit powers p[uav][n-1] in watts for slots n = 1..N.
struct PowerSchedule {
  std::vector<std::vector<double>> p;

  int uav_count() const { return static_cast<int>(p.size()); }
  int slot_count() const { return p.empty() ? 0 : static_cast<int>(p.front().size()); }
  double at(int uav, int slot) const { return p[uav][slot - 1]; }

  static PowerSchedule uniform(int uav_count, int slot_count, double watts);
};

/// Throws ValidationError unless every power lies in [0, p_max].
void validate_powers(const PowerSchedule& powers, const Scenario& sc);

/// User-to-SUAV assignment per slot: suav_of[n-1][k2] is the serving SUAV or
/// -1. Storing one SUAV per user makes the per-user constraint structural;
/// validate() checks the per-SUAV one.
struct ScheduleMatrix {
  std::vector<std::vector<int>> suav_of;

  static ScheduleMatrix empty(int slot_count, int user_count);

  int slot_count() const { return static_cast<int>(suav_of.size()); }
  int user_count() const { return suav_of.empty() ? 0 : static_cast<int>(suav_of.front().size()); }
  int serving(int user, int slot) const { return suav_of[slot - 1][user]; }

  /// Binary view x_{k2,m2}[n].
  int x(int user, int suav, int slot) const { return serving(user, slot) == suav ? 1 : 0; }

  bool operator==(const ScheduleMatrix& other) const = default;
};

/// Throws ValidationError if a SUAV serves two users in one slot, an index is
/// out of range, or the dimensions do not match the scenario.
void validate_schedule(const ScheduleMatrix& x, const Scenario& sc);

/// LoS gain beta0 / (|q - w|^2 + H^2).
double channel_gain(const Vec2& uav_pos, const Vec2& ground_pos, const Scenario& sc);

/// Rate in bps at ground node `ground` from SUAV `suav` in slot n, treating
/// all other SUAVs and every JUAV as interference.
double pair_rate(const Vec2& ground, int suav, int slot, const TrajectoryPlan& plan,
                 const PowerSchedule& powers, const Scenario& sc);

struct RateReport {
  std::vector<std::vector<double>> legit_bps;    // [k2][n-1] R_{k2}[n]
  std::vector<std::vector<double>> eve_bps;      // [k2][n-1] max_{k1} R_{k1->k2}[n]
  std::vector<std::vector<double>> secrecy_bps;  // [k2][n-1] clamped increment
  std::vector<double> total_bps;                 // per user, sum over slots
  double sum_bps = 0.0;                          // over users
};

RateReport secrecy_report(const TrajectoryPlan& plan, const PowerSchedule& powers,
                          const ScheduleMatrix& x, const Scenario& sc);

enum class SeeUnits { kBpsPerJoule, kBitsPerJoule };

std::string to_string(SeeUnits units);
SeeUnits parse_see_units(const std::string& text);

/// Secrecy energy efficiency. bps-per-joule divides the slot-rate sum by the
/// energy; bits-per-joule first weights every slot by delta.
double secrecy_energy_efficiency(double secrecy_sum_bps, double energy_j, double slot_s,
                                 SeeUnits units);

}  // namespace uavsee
