#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavsee/link_model.hpp"

namespace uavsee {

/// Per-slot pair secrecy R_{k2,m2}[n] - max_{k1} R_{k1,m2}[n] in bps.
struct PairSecrecyTable {
  std::vector<std::vector<std::vector<double>>> value;  // [n-1][k2][m2]

  int slot_count() const { return static_cast<int>(value.size()); }
  int user_count() const { return value.empty() ? 0 : static_cast<int>(value.front().size()); }
  int suav_count() const {
    return value.empty() || value.front().empty() ? 0 : static_cast<int>(value.front().front().size());
  }
  double at(int user, int suav, int slot) const { return value[slot - 1][user][suav]; }

  /// Builds a table from explicit per-slot K2 x M2 matrices.
  static PairSecrecyTable from_matrices(std::vector<std::vector<std::vector<double>>> per_slot);
};

PairSecrecyTable pair_secrecy_table(const TrajectoryPlan& plan, const PowerSchedule& powers,
                                    const Scenario& sc);

/// Raised when the exhaustive search would enumerate too many assignments.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScheduleResult {
  ScheduleMatrix schedule;
  std::vector<double> slot_objective;  // scheduled secrecy per slot
  double objective = 0.0;
  std::int64_t comparisons = 0;        // greedy only
};

enum class SchedulerKind { kGreedy, kExhaustive };

std::string to_string(SchedulerKind kind);
SchedulerKind parse_scheduler(const std::string& text);

/// Slot-by-slot greedy assignment: every user picks its best SUAV, users with
/// no positive secrecy are dropped, and a SUAV claimed by several users keeps
/// the best one. Losers are not reassigned. Ties go to the lowest index.
ScheduleResult greedy_schedule(const PairSecrecyTable& table);

/// Largest per-slot count of partial injective assignments accepted by
/// exhaustive_schedule.
inline constexpr double kExhaustiveGuard = 1.0e6;

/// Optimal per-slot assignment by enumeration of every partial injective
/// user-to-SUAV map over positive-secrecy pairs.
ScheduleResult exhaustive_schedule(const PairSecrecyTable& table);

ScheduleResult run_scheduler(SchedulerKind kind, const PairSecrecyTable& table);

/// Sum of table entries selected by a schedule.
double schedule_objective(const PairSecrecyTable& table, const ScheduleMatrix& x);

}  // namespace uavsee
