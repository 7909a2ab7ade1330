#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace segsolve {

// Finite school-choice instance. School 0 is the unlimited default school;
// schools 1..num_schools-1 have finite capacities. Each school ranks students
// by (tier, lottery): tier 0 for its residents, otherwise the student's
// nonresident tier; lower lottery numbers win ties.
struct MatchingInstance {
  int num_schools = 1;
  std::vector<int> capacity;                   // capacity[0] ignored
  std::vector<std::vector<int>> prefs;         // strict ranking, ends at school 0
  std::vector<int> home;                       // zone school index, 0 for none
  std::vector<std::uint8_t> nonresident_tier;  // >= 1
  std::vector<double> lottery;                 // one number per student
  bool neighborhood_priority = true;           // false: tiers ignored

  std::size_t num_students() const { return prefs.size(); }
  // Priority key of a student at a school; smaller is better.
  std::pair<int, double> key(int school, int student) const;
  // Position of school in the student's ranking, or list size if unranked.
  int rank_of(int student, int school) const;
};

using Assignment = std::vector<int>;  // school per student

Assignment deferred_acceptance(const MatchingInstance& inst);
Assignment top_trading_cycles(const MatchingInstance& inst);

struct BlockingPair {
  int student = -1;
  int school = -1;
};
// First student-school pair that blocks the assignment, if any.
std::optional<BlockingPair> find_blocking_pair(const MatchingInstance& inst, const Assignment& a);
// Seat-feasibility: no specialized school over capacity and every student
// assigned to a ranked school.
bool is_feasible(const MatchingInstance& inst, const Assignment& a);
// Pareto improvement search: a student preferring a school with a free seat,
// or a cycle of students each preferring the next student's school.
bool has_pareto_improvement(const MatchingInstance& inst, const Assignment& a);

}  // namespace segsolve
