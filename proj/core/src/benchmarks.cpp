#include "segsolve/benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "segsolve/equilibrium.hpp"

namespace segsolve {
namespace {

// Uniform signals on [0,1]: mass and integral of s over [a,b] clamped.
double len(double a, double b) {
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  return std::max(0.0, b - a);
}
double integral(double a, double b) {
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  return b > a ? 0.5 * (b * b - a * a) : 0.0;
}

struct MassQuality {
  double mass = 0.0;
  double quality = 0.0;
};

// One unit of a wealth type whose cutoff is c, at one oversubscribed school.
MassQuality type_at_school(Mechanism mech, double c, double r, double pi) {
  MassQuality out;
  const double stay_mass = (1.0 - 2.0 * pi) * len(c, 1) + pi * len(c, 1);
  const double stay_fit = (1.0 - 2.0 * pi) * integral(c, 1) + pi * (integral(c, 1) + len(c, 1));
  const double n0_mass = (1.0 - 2.0 * pi) * len(0, c) + pi * len(0, c);
  const double n0_fit = (1.0 - 2.0 * pi) * integral(0, c) + pi * (integral(0, c) + len(0, c));
  auto second_fit = [](double a, double b) { return len(a, b) - integral(a, b); };  // fit 1 - s
  switch (mech) {
    case Mechanism::N:
      out = {len(c, 1), integral(c, 1)};
      break;
    case Mechanism::DA:
      // Every applicant whose secondary school is this one holds a lottery number.
      out.mass = stay_mass + (1.0 - r) * (n0_mass + pi * len(0, 1));
      out.quality = stay_fit + (1.0 - r) * (n0_fit + pi * second_fit(0, 1));
      break;
    case Mechanism::TTC:
      // Residents of the twin zone trade in; only n0 applicants face the lottery.
      out.mass = stay_mass + pi * len(c, 1) + (1.0 - r) * (n0_mass + pi * len(0, c));
      out.quality = stay_fit + pi * second_fit(c, 1) + (1.0 - r) * (n0_fit + pi * second_fit(0, c));
      break;
    default:
      throw std::invalid_argument("unsupported school stage");
  }
  return out;
}

// Agents whose larger-fit specialized school is this one and whose fit there
// exceeds t (uniform s, shocks {-1, 0, 1} with probabilities (pi, 1-2pi, pi)).
MassQuality seat_takers(double t, double pi) {
  MassQuality out;
  const double probs[] = {pi, 1.0 - 2.0 * pi, pi};
  const double shift[] = {-1.0, 0.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    double c = shift[k];
    // primary school: s + c > t
    double lo = t - c;
    out.mass += probs[k] * len(lo, 1);
    out.quality += probs[k] * (integral(lo, 1) + c * len(lo, 1));
    // secondary school: -(s + c) > t
    double hi = -t - c;
    out.mass += probs[k] * len(0, hi);
    out.quality += probs[k] * (-integral(0, hi) - c * len(0, hi));
  }
  return out;
}

MatchQualityRow make_row(Scenario sc, const std::vector<MassQuality>& per_type) {
  MatchQualityRow row;
  row.scenario = sc;
  row.label = std::string(to_string(sc));
  double mass = 0.0;
  for (auto& t : per_type) mass += t.mass;
  row.poor_quality = 100.0 * per_type.front().quality;
  row.rich_quality = 100.0 * per_type.back().quality;
  row.total_quality = row.poor_quality + row.rich_quality;
  row.poor_share_c1 = 100.0 * per_type.front().mass / mass;
  row.poor_share_of_quality = 100.0 * row.poor_quality / row.total_quality;
  return row;
}

SegregationProfile school_of(const EconomyParams& p, const std::vector<MassQuality>& per_type) {
  std::vector<TypeMass> ms;
  for (std::size_t i = 0; i < per_type.size(); ++i) ms.push_back({p.wealth.atoms()[i].omega, per_type[i].mass});
  return SegregationProfile::from_masses(Location::C1, std::move(ms));
}

}  // namespace

ExampleEconomy::ExampleEconomy(const EconomyParams& params) : params_(params) {
  auto ref = example_params();
  const auto& a = params.wealth.atoms();
  const auto& b = ref.wealth.atoms();
  bool same = params.m == ref.m && params.q == ref.q && params.delta_q == 0.0 && params.g == 0.0 &&
              params.e == 1.0 && std::abs(params.pi - ref.pi) < 1e-9 && params.cdf.is_uniform() &&
              a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].omega == b[i].omega && a[i].rho == b[i].rho;
  if (!same) throw std::invalid_argument("benchmarks are defined on the example economy only");
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::N: return "N";
    case Scenario::DAShortTerm: return "DA short-term";
    case Scenario::TTCShortTerm: return "TTC short-term";
    case Scenario::DALongTerm: return "DA long-term";
    case Scenario::TTCLongTerm: return "TTC long-term";
    case Scenario::NoPriority: return "DA/TTC no priority";
    case Scenario::Auction: return "Auction";
  }
  return "?";
}

double clear_seat_auction(std::span<const WealthAtom> atoms, double q, double pi) {
  auto demand = [&](double tau) {
    double d = 0.0;
    for (auto& a : atoms) d += a.rho * seat_takers(a.omega * tau, pi).mass;
    return d;
  };
  if (demand(0.0) < q) throw NoClearing("seat demand at zero price is below capacity");
  double w_min = INFINITY;
  for (auto& a : atoms) w_min = std::min(w_min, a.omega);
  double lo = 0.0, hi = 2.0 / w_min;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (demand(mid) > q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BenchmarkOutcome auction_outcome_at(double tau, const ExampleEconomy& ex) {
  const auto& p = ex.params();
  std::vector<MassQuality> per;
  for (auto& a : p.wealth.atoms()) {
    auto t = seat_takers(a.omega * tau, p.pi);
    per.push_back({a.rho * t.mass, a.rho * t.quality});
  }
  BenchmarkOutcome out;
  out.row = make_row(Scenario::Auction, per);
  out.school = school_of(p, per);
  out.price = tau;
  return out;
}

BenchmarkOutcome auction_outcome(const ExampleEconomy& ex) {
  const auto& p = ex.params();
  return auction_outcome_at(clear_seat_auction(p.wealth.atoms(), p.q, p.pi), ex);
}

BenchmarkOutcome no_priority_outcome(const ExampleEconomy& ex) {
  const auto& p = ex.params();
  // Every agent applies to the specialized school with the larger positive fit.
  double demand = 0.0;
  for (auto& a : p.wealth.atoms()) demand += a.rho * seat_takers(p.g, p.pi).mass;
  double admit = std::min(1.0, p.q / demand);
  std::vector<MassQuality> per;
  for (auto& a : p.wealth.atoms()) {
    auto t = seat_takers(p.g, p.pi);
    per.push_back({admit * a.rho * t.mass, admit * a.rho * t.quality});
  }
  BenchmarkOutcome out;
  out.row = make_row(Scenario::NoPriority, per);
  out.school = school_of(p, per);
  out.admit_probability = admit;
  return out;
}

MatchQualityRow match_quality(Scenario sc, const ExampleEconomy& ex) {
  const auto& p = ex.params();
  if (sc == Scenario::NoPriority) return no_priority_outcome(ex).row;
  if (sc == Scenario::Auction) return auction_outcome(ex).row;
  Mechanism stage = sc == Scenario::N ? Mechanism::N
                    : (sc == Scenario::DAShortTerm || sc == Scenario::DALongTerm) ? Mechanism::DA
                                                                                  : Mechanism::TTC;
  bool short_term = sc == Scenario::DAShortTerm || sc == Scenario::TTCShortTerm;
  auto eq = solve(p, short_term ? Mechanism::N : stage);
  // Flows do not depend on the cutoff profile, so the rejection probability
  // at fixed N locations equals the equilibrium one.
  double r = rejection(p, stage);
  std::vector<MassQuality> per;
  for (std::size_t i = 0; i < eq.cutoffs.size(); ++i) {
    auto t = type_at_school(stage, eq.cutoffs[i].s, r, p.pi);
    double rho = p.wealth.atoms()[i].rho;
    per.push_back({rho * t.mass, rho * t.quality});
  }
  return make_row(sc, per);
}

std::vector<MatchQualityRow> table1(const ExampleEconomy& ex) {
  std::vector<MatchQualityRow> rows;
  for (auto sc : kAllScenarios) rows.push_back(match_quality(sc, ex));
  return rows;
}

std::vector<PolicyRow> policy_table(const ExampleEconomy& ex) {
  const auto& p = ex.params();
  std::vector<PolicyRow> rows;
  auto share = [](const SegregationProfile& sp) { return 100.0 * sp.poor_share.value_or(0.0); };

  auto da = solve(p, Mechanism::DA);
  double n1_da = share(neighborhood_profile(da).n1);
  rows.push_back({"DA, no policy", n1_da, share(school_profile(da))});

  for (auto [label, pool] : {std::pair{"L short-term", EligiblePool::NeighborhoodZero},
                             std::pair{"WL short-term", EligiblePool::PoorNeighborhoodZero}}) {
    double r = policy_rejection(p, da.cutoffs, pool);
    std::vector<double> type_r;
    for (std::size_t i = 0; i < da.cutoffs.size(); ++i)
      type_r.push_back(pool == EligiblePool::PoorNeighborhoodZero && i != 0 ? 1.0 : r);
    rows.push_back({label, n1_da, share(policy_school_profile(p, da.cutoffs, type_r, pool))});
  }
  for (auto [label, mech] : {std::pair{"L long-term", Mechanism::DA_L}, std::pair{"WL long-term", Mechanism::DA_WL}}) {
    auto eq = solve_policy(p, mech);
    rows.push_back({label, share(neighborhood_profile(eq).n1), share(school_profile(eq))});
  }
  return rows;
}

long round_half_away(double x) { return std::lround(x); }

std::vector<TableCell> compare_table1(const std::vector<MatchQualityRow>& rows) {
  static const char* cols[] = {"poor share c1 (%)", "poor quality", "rich quality", "total quality",
                               "poor share of quality (%)"};
  std::vector<TableCell> out;
  for (std::size_t i = 0; i < rows.size() && i < kTable1Reference.size(); ++i) {
    const auto& r = rows[i];
    double vals[] = {r.poor_share_c1, r.poor_quality, r.rich_quality, r.total_quality, r.poor_share_of_quality};
    for (int c = 0; c < 5; ++c) {
      TableCell cell{r.label, cols[c], vals[c], round_half_away(vals[c]), kTable1Reference[i][c], false};
      cell.match = std::abs(cell.rounded - cell.reference) <= 1;
      out.push_back(cell);
    }
  }
  return out;
}

std::vector<TableCell> compare_table2(const std::vector<PolicyRow>& rows) {
  std::vector<TableCell> out;
  for (std::size_t i = 0; i < rows.size() && i < kTable2Reference.size(); ++i) {
    double vals[] = {rows[i].poor_share_n1, rows[i].poor_share_c1};
    const char* cols[] = {"poor share n1 (%)", "poor share c1 (%)"};
    for (int c = 0; c < 2; ++c) {
      TableCell cell{rows[i].label, cols[c], vals[c], round_half_away(vals[c]), kTable2Reference[i][c], false};
      cell.match = std::abs(cell.rounded - cell.reference) <= 1;
      out.push_back(cell);
    }
  }
  return out;
}

}  // namespace segsolve
