// One line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <stdexcept>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "generators.hpp"
#include "segsolve/benchmarks.hpp"
#include "segsolve/equilibrium.hpp"
#include "segsolve/matching.hpp"
#include "segsolve/mcsim.hpp"
#include "segsolve/mechanisms.hpp"
#include "segsolve/segregation.hpp"
#include "segsolve/sweep.hpp"

using namespace segsolve;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    else if (detail.size() < 400) detail += "; " + what;
    pass = false;
  }
};

std::string num(double v) { return format_number(v); }

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& ex) {
    o.pass = false;
    o.detail = std::string("exception: ") + ex.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) o.require(false, "runtime " + num(secs) + " s over budget " + num(budget_s) + " s");
  char time_buf[32];
  std::snprintf(time_buf, sizeof time_buf, "%.2fs", secs);
  std::printf("criterion %d: %s  %s (%s)%s%s\n", id, o.pass ? "PASS" : "FAIL", title, time_buf,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

EconomyParams random_uniform_binary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    auto p = gen::random_economy(rng);
    p.cdf = SignalCdf::uniform();
    p.wealth = gen::random_wealth(rng, 2);
    try {
      p.validate_structure();
      if (check_assumption1(p).passed() && check_assumption2(p).passed()) return p;
    } catch (const std::exception&) {
    }
  }
}

std::vector<EconomyParams> theorem_sample() {
  std::mt19937_64 rng(20240611);
  std::vector<EconomyParams> out;
  while (out.size() < 200) out.push_back(gen::random_economy(rng));
  return out;
}

bool is_conditional(const std::string& name) {
  return name.find("greater") != std::string::npos || name.find("smaller") != std::string::npos ||
         name.rfind("price:", 0) == 0 || name.rfind("binary:", 0) == 0 || name.rfind("school", 0) == 0 ||
         name.rfind("expansion", 0) == 0;
}

}  // namespace

int main() {
  const auto ex = example_params();

  run(1, "example equilibria", 1.0, [&] {
    Outcome o;
    const double want[] = {9.0 / 15, 11.0 / 15, 13.0 / 15};
    const long share[] = {41, 33, 9};
    int k = 0;
    for (auto m : {Mechanism::N, Mechanism::DA, Mechanism::TTC}) {
      auto eq = solve(ex, m);
      o.require(std::abs(eq.p_over_r() - want[k]) <= 1e-9,
                std::string(to_string(m)) + " p/r=" + num(eq.p_over_r()));
      double s = 100.0 * neighborhood_profile(eq).n1.poor_share.value();
      o.require(round_half_away(s) == share[k], std::string(to_string(m)) + " n1 poor share " + num(s));
      ++k;
    }
    return o;
  });

  run(2, "square-root CDF solve", 1.0, [&] {
    Outcome o;
    auto p = ex;
    p.cdf = SignalCdf::power(0.5);
    const double es[] = {0.3614, 0.3682, 0.4237}, d[] = {0.3614, 0.8682, 2.4237};
    int k = 0;
    for (auto m : {Mechanism::N, Mechanism::DA, Mechanism::TTC}) {
      auto eq = solve(p, m);
      o.require(std::abs(eq.e_s - es[k]) <= 1e-3 && std::abs(eq.d - d[k]) <= 1e-3,
                std::string(to_string(m)) + " (E[s], d)=(" + num(eq.e_s) + ", " + num(eq.d) + ")");
      ++k;
    }
    return o;
  });

  run(3, "uniform-signal equalities", 5.0, [&] {
    Outcome o;
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      auto p = random_uniform_binary(rng);
      auto n = solve(p, Mechanism::N), da = solve(p, Mechanism::DA), ttc = solve(p, Mechanism::TTC);
      auto sn = school_profile(n), sd = school_profile(da);
      for (std::size_t j = 0; j < sn.masses.size(); ++j)
        worst = std::max(worst, std::abs(sn.masses[j].mass - sd.masses[j].mass));
      o.require(std::abs(n.p - da.p) <= 1e-10 && da.p < ttc.p,
                "draw " + std::to_string(i) + " prices " + num(n.p) + ", " + num(da.p) + ", " + num(ttc.p));
    }
    o.require(worst <= 1e-10, "school mass gap " + num(worst));
    o.detail = o.pass ? "max school mass gap " + num(worst) : o.detail;
    return o;
  });

  const auto sample = theorem_sample();
  std::vector<TheoremReport> reports;

  run(4, "dispersion and neighborhood ordering", 30.0, [&] {
    Outcome o;
    for (auto& p : sample) reports.push_back(check_theorems(p));
    for (std::size_t i = 0; i < reports.size(); ++i)
      for (auto& c : reports[i].checks) {
        bool core = c.name == "dispersion ordering" || c.name.rfind("neighborhood:", 0) == 0 ||
                    c.name.rfind("solve ", 0) == 0;
        if (core) o.require(c.passed, "draw " + std::to_string(i) + " " + c.name + ": " + c.detail);
      }
    if (o.pass) o.detail = std::to_string(sample.size()) + " draws";
    return o;
  });

  run(5, "conditional ordering results", 30.0, [&] {
    Outcome o;
    std::size_t evaluated = 0, applicable = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      bool any = false;
      for (auto& c : reports[i].checks) {
        if (!is_conditional(c.name) && c.name.rfind("uniform:", 0) != 0) continue;
        any = true;
        ++evaluated;
        applicable += c.applicable;
        if (c.applicable) o.require(c.passed, "draw " + std::to_string(i) + " " + c.name + ": " + c.detail);
      }
      o.require(any, "draw " + std::to_string(i) + " evaluated no conditions");
    }
    o.require(reports.size() == sample.size(), "theorem reports missing");
    if (o.pass)
      o.detail = std::to_string(evaluated) + " conditions evaluated, " + std::to_string(applicable) + " applicable";
    return o;
  });

  run(6, "match quality table", 5.0, [&] {
    Outcome o;
    for (auto& c : compare_table1(table1()))
      o.require(c.match, c.row + " / " + c.column + " = " + num(c.computed) + " vs " + std::to_string(c.reference));
    return o;
  });

  run(7, "policy table", 10.0, [&] {
    Outcome o;
    for (auto& c : compare_table2(policy_table()))
      o.require(c.match, c.row + " / " + c.column + " = " + num(c.computed) + " vs " + std::to_string(c.reference));
    return o;
  });

  run(8, "single-kink sweep structure", 10.0, [&] {
    Outcome o;
    auto sw = kink_sweep(ex, 0.1, 0);
    std::vector<double> ys;
    for (auto& r : sw.records) {
      if (!r.feasible) continue;
      if (std::abs(r.x - r.y) < 1e-12) o.require(std::abs(r.diff) <= 1e-12, "diagonal diff " + num(r.diff));
      if (r.da_less_segregated) ys.push_back(r.y);
    }
    if (ys.empty()) {
      // where the band sits on a finer grid
      double lo = 2.0, hi = -1.0;
      for (auto& r : kink_sweep(ex, 0.01, 0).records)
        if (r.feasible && r.da_less_segregated) lo = std::min(lo, r.y), hi = std::max(hi, r.y);
      std::string where = hi < 0 ? "none at step 0.01 either" : "at step 0.01 they lie in y=[" + num(lo) + ", " + num(hi) + "]";
      o.require(false, "no DA-less-segregated kink among " + std::to_string(sw.feasible_count()) +
                           " feasible kinks at step 0.1; " + where);
    }
    if (!ys.empty()) {
      std::sort(ys.begin(), ys.end());
      ys.erase(std::unique(ys.begin(), ys.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               ys.end());
      for (std::size_t i = 1; i < ys.size(); ++i)
        o.require(ys[i] - ys[i - 1] <= 0.1 + 1e-9, "band not contiguous in y");
    }
    return o;
  });

  run(9, "parameter cube structure", 600.0, [&] {
    Outcome o;
    std::vector<double> grid{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    auto res = cube_sweep(grid, grid, {0.1, 0.2, 0.3, 0.4}, 0.1, 0);
    double max_pct = 0.0, low_rho = 0, high_rho = 0, low_q = 0, high_q = 0;
    for (auto& c : res.cells) {
      if (c.rho_p > 1.0 - c.q + 1e-12)
        o.require(c.pct == 0.0, "nonzero cell at rho=" + num(c.rho_p) + " q=" + num(c.q) + " pi=" + num(c.pi));
      max_pct = std::max(max_pct, c.pct);
      if (c.rho_p < 0.45) low_rho += c.pct;
      if (c.rho_p > 0.55) high_rho += c.pct;
      if (c.q < 0.45) low_q += c.pct;
      if (c.q > 0.55) high_q += c.pct;
    }
    o.require(max_pct <= 35.0, "max cell " + num(max_pct));
    o.require(low_rho > high_rho, "mass not concentrated at low rho");
    o.require(low_q > high_q, "mass not concentrated at low q");
    if (o.pass) o.detail = "max cell " + num(max_pct) + "%, wealth " + res.wealth.describe();
    return o;
  });

  run(10, "Monte Carlo agreement", 300.0, [&] {
    Outcome o;
    SimConfig c;
    c.params = ex;
    c.mech = Mechanism::DA;
    auto eq = solve(ex, Mechanism::DA);
    c.cutoffs = eq.cutoffs;
    c.n_agents = 200000;
    c.replications = 20;
    c.seed = 2024;
    auto res = estimate(c);
    score(res, targets_from(eq));
    double worst = 0.0;
    auto check = [&](const Estimate& e, const std::string& what) {
      if (!e.z) {
        o.require(false, what + " has no target");
        return;
      }
      worst = std::max(worst, std::abs(*e.z));
      o.require(std::abs(*e.z) <= 3.0, what + " z=" + num(*e.z));
    };
    check(res.rejection, "r");
    for (auto& m : res.masses)
      if (m.location == Location::N1 || m.location == Location::C1)
        check(m.value, std::string(to_string(m.location)) + "@" + num(m.omega));
    for (std::size_t i = 0; i < res.quality.size(); ++i) check(res.quality[i], "quality type " + std::to_string(i));
    check(res.quality_total, "quality total");

    std::mt19937_64 rng(c.seed);
    auto agents = sample_agents(ex, c.n_agents, rng);
    auto zone = housing_stage(agents, c.cutoffs, ex, HousingRule::Clearing, rng);
    auto inst = build_instance(agents, zone, ex, Mechanism::DA, c.seed);
    auto da = deferred_acceptance(inst);
    o.require(!find_blocking_pair(inst, da).has_value(), "DA assignment has a blocking pair");

    auto ttc_cut = solve(ex, Mechanism::TTC).cutoffs;
    for (std::uint64_t s = 0; s < 50; ++s) {
      std::mt19937_64 r2(1000 + s);
      auto small = sample_agents(ex, 200, r2);
      auto z = housing_stage(small, ttc_cut, ex, HousingRule::Clearing, r2);
      auto ti = build_instance(small, z, ex, Mechanism::TTC, s);
      o.require(!has_pareto_improvement(ti, top_trading_cycles(ti)), "TTC improving cycle at seed " + std::to_string(s));
    }
    if (o.pass) o.detail = "max |z| " + num(worst);
    return o;
  });

  run(11, "flow invariance", 5.0, [&] {
    Outcome o;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<EconomyParams> econ{ex};
    while (econ.size() < 20) econ.push_back(gen::random_economy(rng));
    double worst = 0.0, worst_const = 0.0;
    for (auto& p : econ) {
      auto agg = aggregate_flows(p);
      const auto& atoms = p.wealth.atoms();
      int profiles = 0;
      while (profiles < 50) {
        std::vector<double> s(atoms.size());
        double used = 0.0;
        for (std::size_t i = 0; i + 1 < atoms.size(); ++i) used += atoms[i].rho * p.cdf(s[i] = u(rng));
        double last = (1.0 - p.q - used) / atoms.back().rho;
        if (last < 0.0 || last > 1.0) continue;
        s.back() = p.cdf.inverse(last);
        AggregateFlows sum;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          auto f = type_flows(p, s[i]);
          sum.demand += atoms[i].rho * f.demand;
          sum.supply += atoms[i].rho * f.supply;
          sum.exchange += atoms[i].rho * f.exchange;
        }
        worst = std::max({worst, std::abs(sum.demand - agg.demand), std::abs(sum.supply - agg.supply),
                          std::abs(sum.exchange - agg.exchange)});
        ++profiles;
      }
      auto f0 = type_flows(p, 0.0);
      double c0 = f0.demand - f0.supply - p.cdf(0.0);
      for (int k = 1; k <= 100; ++k) {
        double s = k / 100.0;
        auto f = type_flows(p, s);
        worst_const = std::max(worst_const, std::abs(f.demand - f.supply - p.cdf(s) - c0));
      }
    }
    o.require(worst <= 1e-12, "aggregate flow gap " + num(worst));
    o.require(worst_const <= 1e-12, "D-S-F drift " + num(worst_const));
    if (o.pass) o.detail = "max gap " + num(worst) + ", drift " + num(worst_const);
    return o;
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures ? 1 : 0;
}
