#include "segsolve/segregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace segsolve {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double deviation_from_mean(const EconomyParams& p, double s) { return p.cdf(s) - (1.0 - p.q); }

// Eligible n0-resident demand for one oversubscribed school (per unit of type).
double n0_demand(const EconomyParams& p, double s) {
  const auto& F = p.cdf;
  return (1.0 - 2.0 * p.pi) * (F(s) - F(p.g)) + p.pi * F(s) + p.pi * F(std::min(s, p.e - p.g));
}

}  // namespace

std::string_view to_string(Location loc) {
  switch (loc) {
    case Location::N0: return "n0";
    case Location::N1: return "n1";
    case Location::C0: return "c0";
    case Location::C1: return "c1";
  }
  return "?";
}

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::Greater: return "greater";
    case Ordering::Smaller: return "smaller";
    case Ordering::Equal: return "equal";
    case Ordering::Ambiguous: return "ambiguous";
  }
  return "?";
}

double SegregationProfile::total() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0, [](double a, auto& m) { return a + m.mass; });
}

SegregationProfile SegregationProfile::from_masses(Location loc, std::vector<TypeMass> masses) {
  SegregationProfile sp;
  sp.location = loc;
  sp.masses = std::move(masses);
  for (auto& m : sp.masses)
    if (m.mass < 0.0) throw NegativeMass("negative mass for omega=" + fmt(m.omega));
  double tot = sp.total(), w = 0.0;
  for (auto& m : sp.masses) w += m.mass * m.omega;
  sp.avg_wealth = tot > 0.0 ? w / tot : 1.0;
  sp.deviation = std::abs(sp.avg_wealth - 1.0);
  if (sp.masses.size() == 2 && tot > 0.0) sp.poor_share = sp.masses.front().mass / tot;
  return sp;
}

NeighborhoodProfiles neighborhood_profile(const Equilibrium& eq) {
  const auto& p = eq.params;
  std::vector<TypeMass> n1, n0;
  for (std::size_t i = 0; i < eq.cutoffs.size(); ++i) {
    double rho = p.wealth.atoms()[i].rho, f = p.cdf(eq.cutoffs[i].s);
    n1.push_back({eq.cutoffs[i].omega, rho * (1.0 - f)});
    n0.push_back({eq.cutoffs[i].omega, rho * f});
  }
  return {SegregationProfile::from_masses(Location::N1, std::move(n1)),
          SegregationProfile::from_masses(Location::N0, std::move(n0))};
}

SegregationProfile policy_school_profile(const EconomyParams& p, const std::vector<Cutoff>& cutoffs,
                                         const std::vector<double>& type_rejection, EligiblePool pool) {
  const auto& F = p.cdf;
  double fepg = F(std::min(1.0, p.e + p.g));
  std::vector<TypeMass> ms;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    double rho = p.wealth.atoms()[i].rho, s = cutoffs[i].s, fs = F(s);
    double stay = 1.0 - fs - p.pi * (fepg - fs);
    double elig = 0.0;
    if (pool == EligiblePool::AllOutOfZone) elig = type_flows(p, s).demand;
    else if (pool == EligiblePool::NeighborhoodZero || i == 0) elig = n0_demand(p, s);
    ms.push_back({cutoffs[i].omega, rho * (stay + (1.0 - type_rejection[i]) * elig)});
  }
  return SegregationProfile::from_masses(Location::C1, std::move(ms));
}

SegregationProfile school_profile(const Equilibrium& eq) {
  const auto& p = eq.params;
  if (eq.mech == Mechanism::DA_L || eq.mech == Mechanism::DA_WL) {
    auto pool = eq.mech == Mechanism::DA_L ? EligiblePool::NeighborhoodZero : EligiblePool::PoorNeighborhoodZero;
    return policy_school_profile(p, eq.cutoffs, eq.type_rejection, pool);
  }
  if (!is_core(eq.mech)) throw std::invalid_argument("school profile needs an equilibrium mechanism");
  std::vector<TypeMass> ms;
  for (std::size_t i = 0; i < eq.cutoffs.size(); ++i) {
    double rho = p.wealth.atoms()[i].rho, f = p.cdf(eq.cutoffs[i].s);
    double unit = 0.0;
    switch (eq.mech) {
      case Mechanism::N: unit = 1.0 - f; break;
      case Mechanism::DA: unit = p.q - eq.r * (1.0 - p.pi) * (f - (1.0 - p.q)); break;
      default: unit = p.q - eq.r * (f - (1.0 - p.q)); break;
    }
    if (unit < -1e-9)
      throw NegativeMass("negative school mass " + fmt(unit) + " for omega=" + fmt(eq.cutoffs[i].omega));
    ms.push_back({eq.cutoffs[i].omega, rho * std::max(unit, 0.0)});
  }
  return SegregationProfile::from_masses(Location::C1, std::move(ms));
}

std::vector<double> common_sign_types(const Equilibrium& from, const Equilibrium& to) {
  std::vector<double> out;
  for (std::size_t i = 0; i < from.cutoffs.size(); ++i) {
    double a = deviation_from_mean(from.params, from.cutoffs[i].s);
    double b = deviation_from_mean(to.params, to.cutoffs[i].s);
    if (std::abs(a) <= 1e-12) continue;
    if ((a > 0) == (b > 0) && std::abs(b) > 0.0) out.push_back(from.cutoffs[i].omega);
  }
  return out;
}

double expansion_rate(const Equilibrium& from, const Equilibrium& to, double omega) {
  double a = deviation_from_mean(from.params, from.cutoff_for(omega));
  double b = deviation_from_mean(to.params, to.cutoff_for(omega));
  if (std::abs(a) <= 1e-12 || b == 0.0 || (a > 0) != (b > 0))
    throw SignMismatch("omega=" + fmt(omega) + " is represented differently under the two mechanisms");
  return std::abs(b) / std::abs(a);
}

Ordering compare(const SegregationProfile& a, const SegregationProfile& b, double tol) {
  if (a.deviation > b.deviation + tol) return Ordering::Greater;
  if (b.deviation > a.deviation + tol) return Ordering::Smaller;
  return Ordering::Equal;
}

Ordering compare(std::span<const SegregationProfile> a, std::span<const SegregationProfile> b, double tol) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("profile lists must match");
  Ordering first = compare(a[0], b[0], tol);
  for (std::size_t i = 1; i < a.size(); ++i)
    if (compare(a[i], b[i], tol) != first) return Ordering::Ambiguous;
  return first;
}

bool TheoremReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](auto& c) { return !c.applicable || c.passed; });
}

std::size_t TheoremReport::applicable_count() const {
  return std::count_if(checks.begin(), checks.end(), [](auto& c) { return c.applicable; });
}

std::string TheoremReport::failures() const {
  std::string out;
  for (auto& c : checks) {
    if (!c.applicable || c.passed) continue;
    if (!out.empty()) out += "\n";
    out += c.name + ": " + c.detail;
  }
  return out;
}

TheoremReport check_theorems(const EconomyParams& params) {
  TheoremReport rep;
  auto add = [&](std::string name, bool applicable, bool passed, std::string detail) {
    rep.checks.push_back({std::move(name), applicable, passed, std::move(detail)});
  };
  std::vector<Equilibrium> eqs;
  for (auto m : {Mechanism::N, Mechanism::DA, Mechanism::TTC}) {
    try {
      eqs.push_back(solve(params, m));
    } catch (const std::exception& ex) {
      add(std::string("solve ") + std::string(to_string(m)), true, false, ex.what());
      return rep;
    }
  }
  const auto &n = eqs[0], &da = eqs[1], &ttc = eqs[2];
  const double t = 1.0 - params.q;
  const bool no_extra = params.delta_q == 0.0;

  add("dispersion ordering", true, n.d < da.d && da.d < ttc.d,
      "d=" + fmt(n.d) + ", " + fmt(da.d) + ", " + fmt(ttc.d));
  double s_star = params.cdf.inverse(t);
  constexpr double kTol = 1e-12;
  add("mean cutoff ordering", true,
      s_star <= n.e_s + kTol && n.e_s <= da.e_s + kTol && da.e_s <= ttc.e_s + kTol && ttc.e_s <= t + kTol,
      "E[s]=" + fmt(n.e_s) + ", " + fmt(da.e_s) + ", " + fmt(ttc.e_s));

  auto nb_n = neighborhood_profile(n).n1, nb_da = neighborhood_profile(da).n1, nb_ttc = neighborhood_profile(ttc).n1;
  add("neighborhood: DA above N", true, nb_da.deviation > nb_n.deviation,
      "deviation " + fmt(nb_n.deviation) + " -> " + fmt(nb_da.deviation));
  add("neighborhood: TTC above DA", true, nb_ttc.deviation > nb_da.deviation,
      "deviation " + fmt(nb_da.deviation) + " -> " + fmt(nb_ttc.deviation));

  std::vector<SegregationProfile> sc;
  for (auto& eq : eqs) {
    try {
      sc.push_back(school_profile(eq));
    } catch (const std::exception& ex) {
      add(std::string("school profile ") + std::string(to_string(eq.mech)), true, false, ex.what());
      return rep;
    }
  }

  // Expansion-rate conditions for school ordering.
  struct Pair {
    int from, to;
    double threshold;
    bool two_sided;
    const char* name;
  };
  const Pair pairs[] = {
      {0, 1, 1.0 / (da.r * (1.0 - params.pi)), true, "school N->DA"},
      {0, 2, 1.0 / ttc.r, true, "school N->TTC"},
      {1, 2, da.r * (1.0 - params.pi) / ttc.r, false, "school DA->TTC"},
  };
  constexpr double kMargin = 1e-6;
  for (auto& pr : pairs) {
    auto types = common_sign_types(eqs[pr.from], eqs[pr.to]);
    if (types.empty()) {
      add(pr.name, false, true, "no common-sign wealth types");
      continue;
    }
    bool all_above = true, all_below = true;
    std::string rates;
    for (double w : types) {
      double rate = expansion_rate(eqs[pr.from], eqs[pr.to], w);
      all_above &= rate > pr.threshold * (1.0 + kMargin);
      all_below &= rate < pr.threshold * (1.0 - kMargin);
      rates += (rates.empty() ? "" : ",") + fmt(rate);
    }
    auto got = compare(sc[pr.to], sc[pr.from], kTol);
    std::string detail = "rates " + rates + " vs threshold " + fmt(pr.threshold) + ", school ordering " +
                         std::string(to_string(got));
    if (all_above) add(std::string(pr.name) + " greater", true, got == Ordering::Greater, detail);
    else if (all_below && pr.two_sided) add(std::string(pr.name) + " smaller", true, got == Ordering::Smaller, detail);
    else add(pr.name, false, true, "condition not met: " + detail);
  }

  // Price ordering.
  {
    EconomyParams uni = params;
    uni.cdf = SignalCdf::uniform();
    double r_uni = rejection_unchecked(uni, Mechanism::DA);
    bool cond = da.r >= r_uni;
    add("price: p^N <= p^DA", cond, n.p <= da.p + kTol,
        "r^DA=" + fmt(da.r) + " vs uniform " + fmt(r_uni) + "; p=" + fmt(n.p) + ", " + fmt(da.p));
    bool cond2 = params.e - params.g > t;
    add("price: p^DA < p^TTC", cond2, da.p < ttc.p, "p=" + fmt(da.p) + ", " + fmt(ttc.p));
  }

  // Uniform signals.
  if (params.cdf.is_uniform() && no_extra) {
    double gap = 0.0;
    for (std::size_t i = 0; i < sc[0].masses.size(); ++i)
      gap = std::max(gap, std::abs(sc[0].masses[i].mass - sc[1].masses[i].mass));
    add("uniform: N and DA school profiles equal", true, gap <= 1e-10, "max gap " + fmt(gap));
    add("uniform: TTC school above N and DA", true,
        compare(sc[2], sc[0], kTol) == Ordering::Greater && compare(sc[2], sc[1], kTol) == Ordering::Greater,
        "deviation " + fmt(sc[0].deviation) + ", " + fmt(sc[1].deviation) + ", " + fmt(sc[2].deviation));
    add("uniform: p^N = p^DA < p^TTC", true, std::abs(n.p - da.p) <= 1e-10 && da.p < ttc.p,
        "p=" + fmt(n.p) + ", " + fmt(da.p) + ", " + fmt(ttc.p));
  }

  // Two wealth types with g = 0, e = 1.
  if (params.wealth.size() == 2 && params.g == 0.0 && params.e == 1.0 && no_extra) {
    double rho_p = params.wealth.poorest().rho;
    add("binary: DA school above N when 1-q < rho_P", t < rho_p, compare(sc[1], sc[0], kTol) == Ordering::Greater,
        "1-q=" + fmt(t) + ", rho_P=" + fmt(rho_p) + ", ordering " + std::string(to_string(compare(sc[1], sc[0], kTol))));
    add("binary: TTC school above N", true, compare(sc[2], sc[0], kTol) == Ordering::Greater,
        "deviation " + fmt(sc[0].deviation) + " -> " + fmt(sc[2].deviation));
    add("binary: TTC school above DA", true, compare(sc[2], sc[1], kTol) == Ordering::Greater,
        "deviation " + fmt(sc[1].deviation) + " -> " + fmt(sc[2].deviation));
  }
  return rep;
}

}  // namespace segsolve
