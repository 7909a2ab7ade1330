#include "segsolve/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "segsolve/equilibrium.hpp"
#include "segsolve/parallel.hpp"
#include "segsolve/segregation.hpp"

namespace segsolve {
namespace {

KinkRecord evaluate_kink(const EconomyParams& base, const SignalCdf& cdf, Feasibility feasibility) {
  KinkRecord rec;
  const auto& k = std::get<SingleKink>(cdf.spec());
  rec.x = k.x;
  rec.y = k.y;
  rec.expansion_rate = std::numeric_limits<double>::quiet_NaN();
  EconomyParams p = base;
  p.cdf = cdf;
  try {
    auto a1 = check_assumption1(p);
    if (!a1.passed()) {
      rec.reason = "assumption 1: " + a1.summary();
      return rec;
    }
    for (auto m : {Mechanism::N, Mechanism::DA}) {
      if (feasibility != Feasibility::Assumptions) break;
      auto a2 = check_assumption2(p, m);
      if (!a2.passed()) {
        rec.reason = "assumption 2: " + a2.summary();
        return rec;
      }
    }
    auto n = solve(p, Mechanism::N);
    auto da = solve(p, Mechanism::DA);
    auto sn = school_profile(n), sd = school_profile(da);
    rec.feasible = true;
    rec.share_n = sn.poor_share.value_or(0.0);
    rec.share_da = sd.poor_share.value_or(0.0);
    rec.diff = rec.share_da - rec.share_n;
    rec.da_less_segregated = compare(sd, sn) == Ordering::Smaller;
    rec.threshold = 1.0 / (da.r * (1.0 - p.pi));
    try {
      rec.expansion_rate = expansion_rate(n, da, n.cutoffs.front().omega);
    } catch (const SignMismatch&) {
    }
  } catch (const std::exception& ex) {
    rec.feasible = false;
    rec.reason = ex.what();
  }
  return rec;
}

}  // namespace

std::string_view to_string(Feasibility f) { return f == Feasibility::Interior ? "interior" : "assumptions"; }

Feasibility parse_feasibility(std::string_view s) {
  if (s == "interior") return Feasibility::Interior;
  if (s == "assumptions") return Feasibility::Assumptions;
  throw std::invalid_argument("unknown feasibility rule '" + std::string(s) + "'");
}

std::string CubeWealth::describe() const {
  return (kind == Kind::FixedPoor ? "fixed-poor:" : "fixed-spread:") + format_number(value);
}

std::size_t KinkSweepResult::feasible_count() const {
  std::size_t k = 0;
  for (auto& r : records) k += r.feasible;
  return k;
}

std::size_t KinkSweepResult::da_less_count() const {
  std::size_t k = 0;
  for (auto& r : records) k += r.feasible && r.da_less_segregated;
  return k;
}

KinkSweepResult kink_sweep(const EconomyParams& base, double step, unsigned threads, Feasibility feasibility) {
  if (base.wealth.size() != 2) throw std::invalid_argument("kink sweep needs two wealth types");
  auto cdfs = enumerate_single_kink(step);
  KinkSweepResult res;
  res.step = step;
  res.feasibility = feasibility;
  res.records.resize(cdfs.size());
  parallel_for(cdfs.size(), threads, [&](std::size_t i) { res.records[i] = evaluate_kink(base, cdfs[i], feasibility); });
  return res;
}

EconomyParams cube_economy(double rho_p, double q, double pi, CubeWealth wealth) {
  if (!(rho_p > 0.0 && rho_p < 1.0)) throw std::invalid_argument("poor share must lie in (0,1)");
  double w_p = 0.0, w_r = 0.0;
  if (wealth.kind == CubeWealth::Kind::FixedPoor) {
    w_p = wealth.value;
    w_r = (1.0 - rho_p * w_p) / (1.0 - rho_p);
  } else {
    w_p = 1.0 + (1.0 - rho_p) * wealth.value;
    w_r = 1.0 - rho_p * wealth.value;
  }
  if (!(w_r > 0.0) || !(w_p > w_r))
    throw std::invalid_argument("wealth rule " + wealth.describe() + " gives invalid indices at poor share " +
                                format_number(rho_p));
  EconomyParams p;
  p.m = 2;
  p.q = q;
  p.delta_q = 0.0;
  p.g = 0.0;
  p.e = 1.0;
  p.pi = pi;
  p.wealth = WealthDist({{w_p, rho_p}, {w_r, 1.0 - rho_p}});
  p.cdf = SignalCdf::uniform();
  p.validate_structure();
  return p;
}

CubeSweepResult cube_sweep(const std::vector<double>& rho_list, const std::vector<double>& q_list,
                           const std::vector<double>& pi_list, double step, unsigned threads, CubeWealth wealth,
                           Feasibility feasibility) {
  CubeSweepResult res;
  res.rho_list = rho_list;
  res.q_list = q_list;
  res.pi_list = pi_list;
  res.step = step;
  res.wealth = wealth;
  res.feasibility = feasibility;
  for (double r : rho_list)
    for (double q : q_list)
      for (double pi : pi_list) res.cells.push_back({r, q, pi, 0, 0, 0.0});
  std::vector<EconomyParams> economies;
  for (auto& c : res.cells) economies.push_back(cube_economy(c.rho_p, c.q, c.pi, wealth));
  parallel_for(res.cells.size(), threads, [&](std::size_t i) {
    auto& c = res.cells[i];
    auto sw = kink_sweep(economies[i], step, 1, feasibility);
    c.n_feasible = sw.feasible_count();
    c.n_da_less = sw.da_less_count();
    c.pct = c.n_feasible ? 100.0 * double(c.n_da_less) / double(c.n_feasible) : 0.0;
  });
  return res;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_kink_csv(std::ostream& os, const KinkSweepResult& r) {
  os << "x,y,share_N,share_DA,diff,feasible\n";
  for (auto& k : r.records) {
    os << format_number(k.x) << ',' << format_number(k.y) << ',';
    if (k.feasible)
      os << format_number(k.share_n) << ',' << format_number(k.share_da) << ',' << format_number(k.diff);
    else
      os << ",,";
    os << ',' << (k.feasible ? 1 : 0) << '\n';
  }
}

void write_cube_csv(std::ostream& os, const CubeSweepResult& r) {
  os << "rho_p,q,pi,n_feasible,n_da_less,pct\n";
  for (auto& c : r.cells)
    os << format_number(c.rho_p) << ',' << format_number(c.q) << ',' << format_number(c.pi) << ',' << c.n_feasible
       << ',' << c.n_da_less << ',' << format_number(c.pct) << '\n';
}

}  // namespace segsolve
