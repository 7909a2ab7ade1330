#include <algorithm>
#include <stdexcept>
#include <functional>
#include <random>

#include "doctest.h"
#include "segsolve/matching.hpp"

using namespace segsolve;

namespace {

MatchingInstance random_instance(std::mt19937_64& rng, int students, int schools) {
  std::uniform_real_distribution<double> u(0, 1);
  MatchingInstance inst;
  inst.num_schools = schools;
  inst.capacity.assign(schools, 0);
  for (int c = 1; c < schools; ++c) inst.capacity[c] = 1 + int(rng() % 2);
  for (int i = 0; i < students; ++i) {
    std::vector<int> order;
    for (int c = 1; c < schools; ++c) order.push_back(c);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(rng() % schools);
    order.push_back(0);
    inst.prefs.push_back(order);
    inst.home.push_back(int(rng() % schools));
    inst.nonresident_tier.push_back(std::uint8_t(1 + rng() % 2));
    inst.lottery.push_back(u(rng));
  }
  inst.neighborhood_priority = rng() % 4 != 0;
  return inst;
}

// All seat-feasible assignments over the students' ranked lists.
std::vector<Assignment> all_assignments(const MatchingInstance& inst) {
  std::vector<Assignment> out;
  Assignment cur(inst.num_students());
  std::vector<int> load(inst.num_schools, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == inst.num_students()) {
      out.push_back(cur);
      return;
    }
    for (int c : inst.prefs[i]) {
      if (c != 0 && load[c] >= inst.capacity[c]) continue;
      ++load[c];
      cur[i] = c;
      rec(i + 1);
      --load[c];
    }
  };
  rec(0);
  return out;
}

bool weakly_prefers(const MatchingInstance& inst, int i, int a, int b) { return inst.rank_of(i, a) <= inst.rank_of(i, b); }

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("deferred acceptance is the student-optimal stable assignment") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    auto inst = random_instance(rng, 1 + int(rng() % 6), 2 + int(rng() % 3));
    auto da = deferred_acceptance(inst);
    REQUIRE(is_feasible(inst, da));
    CHECK_FALSE(find_blocking_pair(inst, da).has_value());
    for (auto& a : all_assignments(inst)) {
      if (find_blocking_pair(inst, a)) continue;
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(weakly_prefers(inst, int(i), da[i], a[i]));
    }
  }
}

TEST_CASE("blocking pairs are detected") {
  MatchingInstance inst;
  inst.num_schools = 2;
  inst.capacity = {0, 1};
  inst.prefs = {{1, 0}, {1, 0}};
  inst.home = {1, 0};
  inst.nonresident_tier = {1, 1};
  inst.lottery = {0.5, 0.1};
  Assignment wrong{0, 1};  // the resident has priority
  auto bp = find_blocking_pair(inst, wrong);
  REQUIRE(bp.has_value());
  CHECK(bp->student == 0);
  CHECK(bp->school == 1);
  CHECK(deferred_acceptance(inst) == Assignment{1, 0});
  inst.neighborhood_priority = false;  // lottery decides
  CHECK(deferred_acceptance(inst) == Assignment{0, 1});
}

TEST_CASE("top trading cycles is Pareto efficient") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 300; ++t) {
    auto inst = random_instance(rng, 1 + int(rng() % 6), 2 + int(rng() % 3));
    auto ttc = top_trading_cycles(inst);
    REQUIRE(is_feasible(inst, ttc));
    CHECK_FALSE(has_pareto_improvement(inst, ttc));
    for (auto& a : all_assignments(inst)) {
      bool all_weak = true, some_strict = false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        all_weak &= weakly_prefers(inst, int(i), a[i], ttc[i]);
        some_strict |= inst.rank_of(int(i), a[i]) < inst.rank_of(int(i), ttc[i]);
      }
      CHECK_FALSE((all_weak && some_strict));
    }
  }
}

TEST_CASE("residents of twin zones swap seats") {
  MatchingInstance inst;
  inst.num_schools = 3;
  inst.capacity = {0, 1, 1};
  inst.prefs = {{2, 1, 0}, {1, 2, 0}};
  inst.home = {1, 2};
  inst.nonresident_tier = {1, 1};
  inst.lottery = {0.3, 0.6};
  CHECK(top_trading_cycles(inst) == Assignment{2, 1});
  CHECK_FALSE(has_pareto_improvement(inst, Assignment{2, 1}));
  CHECK(has_pareto_improvement(inst, Assignment{1, 2}));
}

TEST_CASE("truthful ranking is a best response") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    auto inst = random_instance(rng, 2 + int(rng() % 5), 4);
    int i = int(rng() % inst.num_students());
    auto truth = inst.prefs[i];
    for (auto algo : {&deferred_acceptance, &top_trading_cycles}) {
      int truthful = inst.rank_of(i, (*algo)(inst)[i]);
      std::vector<int> schools{1, 2, 3};
      std::sort(schools.begin(), schools.end());
      do {
        for (std::size_t len = 0; len <= schools.size(); ++len) {
          auto dev = inst;
          dev.prefs[i].assign(schools.begin(), schools.begin() + len);
          dev.prefs[i].push_back(0);
          int got = (*algo)(dev)[i];
          // evaluated with the true ranking
          CHECK(inst.rank_of(i, got) >= truthful);
        }
      } while (std::next_permutation(schools.begin(), schools.end()));
    }
  }
}

}
