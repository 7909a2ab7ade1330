#include "segsolve/matching.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace segsolve {

std::pair<int, double> MatchingInstance::key(int school, int student) const {
  int tier = 0;
  if (neighborhood_priority && home[student] != school) tier = nonresident_tier[student];
  return {tier, lottery[student]};
}

int MatchingInstance::rank_of(int student, int school) const {
  const auto& p = prefs[student];
  auto it = std::find(p.begin(), p.end(), school);
  return int(it - p.begin());
}

Assignment deferred_acceptance(const MatchingInstance& inst) {
  const int n = int(inst.num_students());
  Assignment out(n, -1);
  std::vector<std::size_t> next(n, 0);
  using Heap = std::priority_queue<int, std::vector<int>, std::function<bool(int, int)>>;
  std::vector<Heap> held;
  for (int c = 0; c < inst.num_schools; ++c)
    held.emplace_back([&inst, c](int a, int b) { return inst.key(c, a) < inst.key(c, b); });  // worst on top
  std::vector<int> free(n);
  for (int i = 0; i < n; ++i) free[i] = n - 1 - i;
  while (!free.empty()) {
    int i = free.back();
    free.pop_back();
    if (next[i] >= inst.prefs[i].size()) throw std::logic_error("ranking must end at the default school");
    int c = inst.prefs[i][next[i]++];
    if (c == 0) {
      out[i] = 0;
      continue;
    }
    held[c].push(i);
    if (int(held[c].size()) > inst.capacity[c]) {
      free.push_back(held[c].top());
      held[c].pop();
    }
  }
  for (int c = 1; c < inst.num_schools; ++c)
    for (; !held[c].empty(); held[c].pop()) out[held[c].top()] = c;
  return out;
}

Assignment top_trading_cycles(const MatchingInstance& inst) {
  const int n = int(inst.num_students());
  const int S = inst.num_schools;
  Assignment out(n, -1);
  std::vector<char> remaining(n, 1);
  std::vector<int> cap(inst.capacity.begin(), inst.capacity.end());
  cap.resize(S, 0);
  std::vector<std::vector<int>> order(S);
  std::vector<std::size_t> ptr(S, 0);
  for (int c = 1; c < S; ++c) {
    auto& o = order[c];
    o.resize(n);
    for (int i = 0; i < n; ++i) o[i] = i;
    std::sort(o.begin(), o.end(), [&](int a, int b) { return inst.key(c, a) < inst.key(c, b); });
  }
  auto student_target = [&](int i) {
    for (int c : inst.prefs[i])
      if (c == 0 || cap[c] > 0) return c;
    return 0;
  };
  auto school_target = [&](int c) {
    auto& o = order[c];
    while (ptr[c] < o.size() && !remaining[o[ptr[c]]]) ++ptr[c];
    return ptr[c] < o.size() ? o[ptr[c]] : -1;
  };

  std::vector<int> stack;
  std::vector<char> on_stack(n + S, 0);
  for (int i0 = 0; i0 < n; ++i0) {
    if (!remaining[i0]) continue;
    stack.push_back(i0);
    on_stack[i0] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      int next;
      if (v < n) {
        int c = student_target(v);
        if (c == 0) {
          out[v] = 0;
          remaining[v] = 0;
          on_stack[v] = 0;
          stack.pop_back();
          continue;
        }
        next = n + c;
      } else {
        int c = v - n;
        int st = cap[c] > 0 ? school_target(c) : -1;
        if (st < 0) {
          on_stack[v] = 0;
          stack.pop_back();
          continue;
        }
        next = st;
      }
      if (!on_stack[next]) {
        stack.push_back(next);
        on_stack[next] = 1;
        continue;
      }
      // Trade along the cycle next -> ... -> top -> next.
      auto start = std::find(stack.begin(), stack.end(), next);
      std::vector<int> cycle(start, stack.end());
      stack.erase(start, stack.end());
      for (std::size_t k = 0; k < cycle.size(); ++k) {
        int u = cycle[k];
        on_stack[u] = 0;
        if (u >= n) continue;
        int c = cycle[(k + 1) % cycle.size()] - n;
        out[u] = c;
        remaining[u] = 0;
        --cap[c];
      }
    }
  }
  return out;
}

bool is_feasible(const MatchingInstance& inst, const Assignment& a) {
  if (a.size() != inst.num_students()) return false;
  std::vector<int> count(inst.num_schools, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= inst.num_schools) return false;
    if (inst.rank_of(int(i), a[i]) >= int(inst.prefs[i].size())) return false;
    ++count[a[i]];
  }
  for (int c = 1; c < inst.num_schools; ++c)
    if (count[c] > inst.capacity[c]) return false;
  return true;
}

std::optional<BlockingPair> find_blocking_pair(const MatchingInstance& inst, const Assignment& a) {
  const int n = int(inst.num_students());
  std::vector<int> count(inst.num_schools, 0);
  std::vector<std::pair<int, double>> worst(inst.num_schools, {-1, -1.0});
  for (int i = 0; i < n; ++i) {
    int c = a[i];
    ++count[c];
    if (c > 0) worst[c] = std::max(worst[c], inst.key(c, i));
  }
  for (int i = 0; i < n; ++i) {
    int mine = inst.rank_of(i, a[i]);
    for (int k = 0; k < mine; ++k) {
      int c = inst.prefs[i][k];
      if (c == 0 || count[c] < inst.capacity[c] || inst.key(c, i) < worst[c]) return BlockingPair{i, c};
    }
  }
  return std::nullopt;
}

bool has_pareto_improvement(const MatchingInstance& inst, const Assignment& a) {
  const int n = int(inst.num_students());
  const int S = inst.num_schools;
  std::vector<int> count(S, 0);
  std::vector<std::vector<int>> holders(S);
  for (int i = 0; i < n; ++i) {
    ++count[a[i]];
    holders[a[i]].push_back(i);
  }
  std::vector<std::vector<int>> wants(n);
  for (int i = 0; i < n; ++i) {
    int mine = inst.rank_of(i, a[i]);
    for (int k = 0; k < mine; ++k) {
      int c = inst.prefs[i][k];
      if (c == 0 || count[c] < inst.capacity[c]) return true;
      wants[i].push_back(c);
    }
  }
  // Cycle search on student -> desired school -> its holders.
  std::vector<char> color(n + S, 0);
  std::function<bool(int)> dfs = [&](int v) {
    color[v] = 1;
    const std::vector<int>& succ = v < n ? wants[v] : holders[v - n];
    for (int w : succ) {
      int node = v < n ? n + w : w;
      if (color[node] == 1) return true;
      if (color[node] == 0 && dfs(node)) return true;
    }
    color[v] = 2;
    return false;
  };
  for (int v = 0; v < n + S; ++v)
    if (color[v] == 0 && dfs(v)) return true;
  return false;
}

}  // namespace segsolve
