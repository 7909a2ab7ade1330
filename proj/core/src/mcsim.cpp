#include "segsolve/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "segsolve/benchmarks.hpp"
#include "segsolve/parallel.hpp"

namespace segsolve {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int housing_capacity(const EconomyParams& p, std::size_t n) { return int(std::floor(double(n) * p.q / p.m)); }
int school_capacity(const EconomyParams& p, std::size_t n) {
  return int(std::floor(double(n) * (p.q + p.delta_q) / p.m));
}

double fit(const Agent& a, const EconomyParams& p) { return a.s + a.eps * p.e; }

Estimate summarize(const std::vector<double>& xs) {
  Estimate e;
  std::size_t k = 0;
  double sum = 0.0;
  for (double x : xs)
    if (!std::isnan(x)) sum += x, ++k;
  if (k == 0) {
    e.mean = kNaN;
    e.se = kNaN;
    return e;
  }
  e.mean = sum / k;
  double ss = 0.0;
  for (double x : xs)
    if (!std::isnan(x)) ss += (x - e.mean) * (x - e.mean);
  e.se = k > 1 ? std::sqrt(ss / (k - 1) / k) : kNaN;
  return e;
}

Estimate point(double v) {
  Estimate e;
  e.mean = v;
  return e;
}

void set_z(Estimate& e, double target) {
  e.target = target;
  double gap = e.mean - target;
  if (e.se > 0.0) e.z = gap / e.se;
  else e.z = std::abs(gap) <= 1e-12 ? 0.0 : std::copysign(INFINITY, gap);
}

}  // namespace

void SimConfig::validate() const {
  if (n_agents < 1000) throw std::invalid_argument("simulation needs at least 1000 agents");
  if (double(n_agents) * params.q < 100.0) throw std::invalid_argument("simulation needs n q >= 100");
  if (replications < 1) throw std::invalid_argument("simulation needs at least one replication");
  if (cutoffs.size() != params.wealth.size()) throw std::invalid_argument("one cutoff per wealth type required");
}

std::vector<Agent> sample_agents(const EconomyParams& p, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> zone(1, p.m);
  std::uniform_int_distribution<int> other(1, p.m - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cum;
  double acc = 0.0;
  for (auto& a : p.wealth.atoms()) cum.push_back(acc += a.rho);
  std::vector<Agent> out(n);
  for (auto& a : out) {
    a.t1 = zone(rng);
    a.t2 = other(rng);
    if (a.t2 >= a.t1) ++a.t2;
    a.s = p.cdf.inverse(unit(rng));
    double u = unit(rng);
    a.eps = u < p.pi ? 1 : (u < 2.0 * p.pi ? -1 : 0);
    double w = unit(rng) * acc;
    a.wealth = int(std::upper_bound(cum.begin(), cum.end(), w) - cum.begin());
    a.wealth = std::min(a.wealth, int(cum.size()) - 1);
  }
  return out;
}

std::vector<Agent> sample_agents(const SimConfig& c) {
  std::mt19937_64 rng(c.seed);
  return sample_agents(c.params, c.n_agents, rng);
}

std::vector<int> housing_stage(const std::vector<Agent>& agents, const std::vector<Cutoff>& cutoffs,
                               const EconomyParams& p, HousingRule rule, std::mt19937_64& rng) {
  const int cap = housing_capacity(p, agents.size());
  std::vector<int> zone(agents.size(), 0);
  std::vector<std::vector<int>> members(p.m + 1);
  for (int i = 0; i < int(agents.size()); ++i) members[agents[i].t1].push_back(i);
  const auto& atoms = p.wealth.atoms();
  for (int k = 1; k <= p.m; ++k) {
    auto& mem = members[k];
    if (rule == HousingRule::Clearing) {
      // Largest shift-adjusted surplus (s - s_omega) / omega gets a house.
      auto surplus = [&](int i) {
        const auto& a = agents[i];
        return (a.s - cutoffs[a.wealth].s) / atoms[a.wealth].omega;
      };
      if (int(mem.size()) > cap) {
        std::nth_element(mem.begin(), mem.begin() + cap, mem.end(), [&](int a, int b) {
          double sa = surplus(a), sb = surplus(b);
          return sa != sb ? sa > sb : a < b;
        });
        mem.resize(cap);
      }
    } else {
      std::vector<int> demand;
      for (int i : mem)
        if (agents[i].s > cutoffs[agents[i].wealth].s) demand.push_back(i);
      if (int(demand.size()) > cap) {
        for (int j = 0; j < cap; ++j) {
          std::uniform_int_distribution<std::size_t> pick(j, demand.size() - 1);
          std::swap(demand[j], demand[pick(rng)]);
        }
        demand.resize(cap);
      }
      mem = std::move(demand);
    }
    for (int i : mem) zone[i] = k;
  }
  return zone;
}

double school_utility(const Agent& a, int school, const EconomyParams& p) {
  if (school == 0) return p.g;
  double v = fit(a, p);
  if (school == a.t1) return v;
  if (school == a.t2) return -v;
  return -std::numeric_limits<double>::infinity();
}

MatchingInstance build_instance(const std::vector<Agent>& agents, const std::vector<int>& residency,
                                const EconomyParams& p, Mechanism mech, std::uint64_t seed) {
  MatchingInstance inst;
  const std::size_t n = agents.size();
  inst.num_schools = p.m + 1;
  inst.capacity.assign(p.m + 1, school_capacity(p, n));
  inst.capacity[0] = int(n);
  inst.prefs.resize(n);
  inst.home = residency;
  inst.nonresident_tier.assign(n, 1);
  inst.neighborhood_priority = mech != Mechanism::NoPriority;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  inst.lottery.resize(n);
  for (auto& l : inst.lottery) l = unit(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = agents[i];
    std::pair<double, int> opts[] = {{school_utility(a, a.t1, p), a.t1},
                                     {school_utility(a, a.t2, p), a.t2},
                                     {p.g, 0}};
    // Higher utility first; exact ties go to the lower-indexed school.
    std::sort(std::begin(opts), std::end(opts),
              [](auto& x, auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
    for (auto& [u, c] : opts) {
      inst.prefs[i].push_back(c);
      if (c == 0) break;
    }
    if (mech == Mechanism::DA_L) inst.nonresident_tier[i] = residency[i] == 0 ? 1 : 2;
    if (mech == Mechanism::DA_WL) inst.nonresident_tier[i] = residency[i] == 0 && a.wealth == 0 ? 1 : 2;
  }
  return inst;
}

Assignment run_da_finite(const std::vector<Agent>& agents, const std::vector<int>& residency,
                         const EconomyParams& p, std::uint64_t seed) {
  return deferred_acceptance(build_instance(agents, residency, p, Mechanism::DA, seed));
}

Assignment run_ttc_finite(const std::vector<Agent>& agents, const std::vector<int>& residency,
                          const EconomyParams& p, std::uint64_t seed) {
  return top_trading_cycles(build_instance(agents, residency, p, Mechanism::TTC, seed));
}

Assignment run_school_stage(const std::vector<Agent>& agents, const std::vector<int>& residency,
                            const EconomyParams& p, Mechanism mech, std::uint64_t seed) {
  const std::size_t n = agents.size();
  switch (mech) {
    case Mechanism::N:
      return residency;
    case Mechanism::TTC:
      return run_ttc_finite(agents, residency, p, seed);
    case Mechanism::Auction: {
      // Each agent bids (fit - g) / omega at the specialized school it values most.
      const int cap = school_capacity(p, n);
      std::vector<std::vector<std::pair<double, int>>> bids(p.m + 1);
      for (int i = 0; i < int(n); ++i) {
        const auto& a = agents[i];
        double v = fit(a, p);
        int c = v >= 0.0 ? a.t1 : a.t2;
        double value = std::abs(v) - p.g;
        if (value > 0.0) bids[c].push_back({value / p.wealth.atoms()[a.wealth].omega, i});
      }
      Assignment out(n, 0);
      for (int c = 1; c <= p.m; ++c) {
        auto& b = bids[c];
        std::size_t take = std::min<std::size_t>(cap, b.size());
        std::partial_sort(b.begin(), b.begin() + take, b.end(),
                          [](auto& x, auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
        for (std::size_t j = 0; j < take; ++j) out[b[j].second] = c;
      }
      return out;
    }
    default:
      return deferred_acceptance(build_instance(agents, residency, p, mech, seed));
  }
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index), std::uint32_t(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t(out[0]) << 32) | out[1];
}

ReplicationDraw run_replication(const SimConfig& c, std::uint64_t rep_seed) {
  const auto& p = c.params;
  const std::size_t n = c.n_agents;
  const std::size_t T = p.wealth.size();
  std::mt19937_64 rng(rep_seed);
  auto agents = sample_agents(p, n, rng);
  auto zone = housing_stage(agents, c.cutoffs, p, c.housing, rng);
  std::uint64_t lottery_seed = rng();
  auto school = run_school_stage(agents, zone, p, c.mech, lottery_seed);

  ReplicationDraw d;
  d.seed = rep_seed;
  d.n1.assign(T, 0.0);
  d.n0.assign(T, 0.0);
  d.c1.assign(T, 0.0);
  d.c0.assign(T, 0.0);
  d.quality.assign(T, 0.0);
  std::size_t applicants = 0, rejected = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = agents[i];
    (zone[i] ? d.n1 : d.n0)[a.wealth] += 1.0;
    (school[i] ? d.c1 : d.c0)[a.wealth] += 1.0;
    if (school[i] != 0) {
      double v = fit(a, p);
      d.quality[a.wealth] += school[i] == a.t1 ? v : -v;
      if (zone[i] == 0) ++d.n0_admitted;
    }
    // Out-of-zone lottery applicants to their top specialized school.
    double v = fit(a, p);
    int top = v >= 0.0 ? a.t1 : a.t2;
    if (std::abs(v) <= p.g || top == zone[i]) continue;
    bool pool = false;
    switch (c.mech) {
      case Mechanism::DA:
      case Mechanism::NoPriority: pool = true; break;
      case Mechanism::TTC:
      case Mechanism::DA_L: pool = zone[i] == 0; break;
      case Mechanism::DA_WL: pool = zone[i] == 0 && a.wealth == 0; break;
      default: break;
    }
    if (!pool) continue;
    ++applicants;
    if (school[i] != top) ++rejected;
  }
  d.rejection = applicants ? double(rejected) / applicants : kNaN;
  for (std::size_t t = 0; t < T; ++t) {
    d.n1[t] /= n;
    d.n0[t] /= n;
    d.c1[t] /= n;
    d.c0[t] /= n;
    d.quality[t] /= n;
    d.quality_total += d.quality[t];
  }
  return d;
}

const MassEstimate& SimResult::mass(Location loc, double omega) const {
  for (auto& m : masses)
    if (m.location == loc && m.omega == omega) return m;
  throw std::out_of_range("no simulated mass for that location and wealth type");
}

SimResult estimate(const SimConfig& c) {
  c.validate();
  SimResult res;
  res.mech = c.mech;
  res.n_agents = c.n_agents;
  res.seed = c.seed;
  res.draws.resize(c.replications);
  parallel_for(c.replications, c.threads,
               [&](std::size_t k) { res.draws[k] = run_replication(c, replication_seed(c.seed, k)); });

  auto collect = [&](auto get) {
    std::vector<double> xs;
    for (auto& d : res.draws) xs.push_back(get(d));
    return summarize(xs);
  };
  res.rejection = collect([](auto& d) { return d.rejection; });
  const auto& atoms = c.params.wealth.atoms();
  for (auto loc : {Location::N1, Location::N0, Location::C1, Location::C0}) {
    for (std::size_t t = 0; t < atoms.size(); ++t) {
      auto est = collect([&](const ReplicationDraw& d) {
        switch (loc) {
          case Location::N1: return d.n1[t];
          case Location::N0: return d.n0[t];
          case Location::C1: return d.c1[t];
          default: return d.c0[t];
        }
      });
      res.masses.push_back({loc, atoms[t].omega, est});
    }
  }
  for (std::size_t t = 0; t < atoms.size(); ++t)
    res.quality.push_back(collect([&](const ReplicationDraw& d) { return d.quality[t]; }));
  res.quality_total = collect([](auto& d) { return d.quality_total; });
  auto share = [](const std::vector<double>& v) {
    double tot = std::accumulate(v.begin(), v.end(), 0.0);
    return tot > 0.0 ? v.front() / tot : kNaN;
  };
  res.poor_share_n1 = collect([&](auto& d) { return share(d.n1); });
  res.poor_share_c1 = collect([&](auto& d) { return share(d.c1); });
  return res;
}

void score(SimResult& r, const AnalyticTargets& t) {
  if (t.rejection) set_z(r.rejection, *t.rejection);
  for (auto& tm : t.masses)
    for (auto& m : r.masses)
      if (m.location == tm.location && m.omega == tm.omega) set_z(m.value, tm.value.mean);
  for (std::size_t i = 0; i < t.quality.size() && i < r.quality.size(); ++i) set_z(r.quality[i], t.quality[i]);
  if (t.quality_total) set_z(r.quality_total, *t.quality_total);
}

AnalyticTargets targets_from(const Equilibrium& eq) {
  AnalyticTargets t;
  if (eq.mech != Mechanism::N) t.rejection = eq.r;
  auto nb = neighborhood_profile(eq);
  auto sc = school_profile(eq);
  const auto& atoms = eq.params.wealth.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double w = atoms[i].omega, rho = atoms[i].rho;
    t.masses.push_back({Location::N1, w, point(nb.n1.masses[i].mass)});
    t.masses.push_back({Location::N0, w, point(nb.n0.masses[i].mass)});
    t.masses.push_back({Location::C1, w, point(sc.masses[i].mass)});
    t.masses.push_back({Location::C0, w, point(rho - sc.masses[i].mass)});
  }
  // Match-quality closed forms exist for the example economy only.
  std::optional<Scenario> scenario;
  if (eq.mech == Mechanism::N) scenario = Scenario::N;
  if (eq.mech == Mechanism::DA) scenario = Scenario::DALongTerm;
  if (eq.mech == Mechanism::TTC) scenario = Scenario::TTCLongTerm;
  if (scenario) {
    try {
      auto row = match_quality(*scenario, ExampleEconomy(eq.params));
      t.quality = {row.poor_quality / 100.0, row.rich_quality / 100.0};
      t.quality_total = row.total_quality / 100.0;
    } catch (const std::invalid_argument&) {
    }
  }
  return t;
}

}  // namespace segsolve
