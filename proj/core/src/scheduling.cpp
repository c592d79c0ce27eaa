#include "uavsee/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uavsee {

PairSecrecyTable PairSecrecyTable::from_matrices(
    std::vector<std::vector<std::vector<double>>> per_slot) {
  PairSecrecyTable t;
  t.value = std::move(per_slot);
  return t;
}

PairSecrecyTable pair_secrecy_table(const TrajectoryPlan& plan, const PowerSchedule& powers,
                                    const Scenario& sc) {
  PairSecrecyTable t;
  t.value.assign(sc.slot_count,
                 std::vector<std::vector<double>>(sc.user_count(), std::vector<double>(sc.suav_count, 0.0)));
  for (int n = 1; n <= sc.slot_count; ++n) {
    for (int m = 0; m < sc.suav_count; ++m) {
      double eve = 0.0;
      for (const auto& w : sc.eavesdroppers) eve = std::max(eve, pair_rate(w, m, n, plan, powers, sc));
      for (int k = 0; k < sc.user_count(); ++k) {
        t.value[n - 1][k][m] = pair_rate(sc.legit_users[k], m, n, plan, powers, sc) - eve;
      }
    }
  }
  return t;
}

std::string to_string(SchedulerKind kind) {
  return kind == SchedulerKind::kGreedy ? "greedy" : "exhaustive";
}

SchedulerKind parse_scheduler(const std::string& text) {
  if (text == "greedy") return SchedulerKind::kGreedy;
  if (text == "exhaustive") return SchedulerKind::kExhaustive;
  throw ValidationError("unknown scheduler '" + text + "' (greedy | exhaustive)");
}

ScheduleResult greedy_schedule(const PairSecrecyTable& table) {
  const int n_slots = table.slot_count();
  const int k2 = table.user_count();
  const int m2 = table.suav_count();
  ScheduleResult res;
  res.schedule = ScheduleMatrix::empty(n_slots, k2);
  res.slot_objective.assign(n_slots, 0.0);

  std::vector<int> choice(k2);
  std::vector<int> owner(m2);
  for (int n = 1; n <= n_slots; ++n) {
    // Negative entries count as zero, so the argmax over raw values followed
    // by a positivity check selects exactly the surviving pairs.
    for (int k = 0; k < k2; ++k) {
      int best = 0;
      for (int m = 1; m < m2; ++m) {
        ++res.comparisons;
        if (table.at(k, m, n) > table.at(k, best, n)) best = m;
      }
      ++res.comparisons;
      choice[k] = table.at(k, best, n) > 0.0 ? best : -1;
    }
    std::fill(owner.begin(), owner.end(), -1);
    for (int k = 0; k < k2; ++k) {
      const int m = choice[k];
      if (m < 0) continue;
      if (owner[m] < 0) {
        owner[m] = k;
        continue;
      }
      ++res.comparisons;
      if (table.at(k, m, n) > table.at(owner[m], m, n)) owner[m] = k;
    }
    for (int m = 0; m < m2; ++m) {
      if (owner[m] < 0) continue;
      res.schedule.suav_of[n - 1][owner[m]] = m;
      res.slot_objective[n - 1] += table.at(owner[m], m, n);
    }
    res.objective += res.slot_objective[n - 1];
  }
  return res;
}

namespace {

double partial_assignment_count(int users, int suavs) {
  // sum_j C(users, j) * P(suavs, j)
  double total = 0.0;
  double choose = 1.0;
  double perm = 1.0;
  for (int j = 0; j <= std::min(users, suavs); ++j) {
    total += choose * perm;
    choose = choose * (users - j) / (j + 1);
    perm *= (suavs - j);
  }
  return total;
}

struct SlotSearch {
  const PairSecrecyTable& table;
  int slot;
  int users;
  int suavs;
  std::vector<int> current;
  std::vector<int> best;
  std::vector<char> used;
  double best_value = 0.0;

  void visit(int k, double value) {
    if (k == users) {
      if (value > best_value) {
        best_value = value;
        best = current;
      }
      return;
    }
    for (int m = 0; m < suavs; ++m) {
      const double s = table.at(k, m, slot);
      if (used[m] || !(s > 0.0)) continue;
      used[m] = 1;
      current[k] = m;
      visit(k + 1, value + s);
      current[k] = -1;
      used[m] = 0;
    }
    visit(k + 1, value);
  }
};

}  // namespace

ScheduleResult exhaustive_schedule(const PairSecrecyTable& table) {
  const int n_slots = table.slot_count();
  const int k2 = table.user_count();
  const int m2 = table.suav_count();
  const double count = partial_assignment_count(k2, m2);
  if (count > kExhaustiveGuard) {
    std::ostringstream os;
    os << "exhaustive scheduling would enumerate " << count
       << " assignments per slot (limit 1e6); use the greedy scheduler";
    throw GuardError(os.str());
  }
  ScheduleResult res;
  res.schedule = ScheduleMatrix::empty(n_slots, k2);
  res.slot_objective.assign(n_slots, 0.0);
  for (int n = 1; n <= n_slots; ++n) {
    SlotSearch search{table, n, k2, m2, std::vector<int>(k2, -1), std::vector<int>(k2, -1),
                      std::vector<char>(m2, 0), 0.0};
    search.visit(0, 0.0);
    res.schedule.suav_of[n - 1] = search.best;
    res.slot_objective[n - 1] = search.best_value;
    res.objective += search.best_value;
  }
  return res;
}

ScheduleResult run_scheduler(SchedulerKind kind, const PairSecrecyTable& table) {
  return kind == SchedulerKind::kGreedy ? greedy_schedule(table) : exhaustive_schedule(table);
}

double schedule_objective(const PairSecrecyTable& table, const ScheduleMatrix& x) {
  double total = 0.0;
  for (int n = 1; n <= table.slot_count(); ++n) {
    for (int k = 0; k < table.user_count(); ++k) {
      const int m = x.serving(k, n);
      if (m >= 0) total += table.at(k, m, n);
    }
  }
  return total;
}

}  // namespace uavsee
