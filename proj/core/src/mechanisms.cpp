#include "segsolve/mechanisms.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace segsolve {
namespace {

constexpr std::array<std::pair<Mechanism, std::string_view>, 7> kNames{{
    {Mechanism::N, "n"},
    {Mechanism::DA, "da"},
    {Mechanism::TTC, "ttc"},
    {Mechanism::DA_L, "da_l"},
    {Mechanism::DA_WL, "da_wl"},
    {Mechanism::NoPriority, "no_priority"},
    {Mechanism::Auction, "auction"},
}};

void require_core(Mechanism m) {
  if (!is_core(m)) throw std::invalid_argument("mechanism " + std::string(to_string(m)) + " is not N, DA or TTC");
}

}  // namespace

std::string_view to_string(Mechanism m) {
  for (auto& [k, v] : kNames)
    if (k == m) return v;
  return "?";
}

Mechanism parse_mechanism(std::string_view name) {
  for (auto& [k, v] : kNames)
    if (v == name) return k;
  throw std::invalid_argument("unknown mechanism '" + std::string(name) + "'");
}

bool is_core(Mechanism m) { return m == Mechanism::N || m == Mechanism::DA || m == Mechanism::TTC; }

AggregateFlows type_flows(const EconomyParams& p, double s) {
  const auto& F = p.cdf;
  double fs = F(s), fg = F(p.g), feg = F(p.e - p.g), fepg = F(std::min(1.0, p.e + p.g));
  return {(1.0 - p.pi) * (fs - fg) + p.pi * (fg + feg), p.pi * (fepg - fs), p.pi * (feg - fs)};
}

AggregateFlows aggregate_flows(const EconomyParams& p) {
  const auto& F = p.cdf;
  double t = 1.0 - p.q, fg = F(p.g), feg = F(p.e - p.g), fepg = F(std::min(1.0, p.e + p.g));
  return {(1.0 - p.pi) * (t - fg) + p.pi * (fg + feg), p.pi * (fepg - t), p.pi * (feg - t)};
}

double rejection_unchecked(const EconomyParams& p, Mechanism mech) {
  require_core(mech);
  if (mech == Mechanism::N) return 1.0;
  auto f = aggregate_flows(p);
  double num = f.demand - f.supply - p.delta_q;
  double den = mech == Mechanism::DA ? f.demand : f.demand - f.exchange;
  return std::clamp(num / den, 0.0, 1.0);
}

double rejection(const EconomyParams& p, Mechanism mech) {
  double r = rejection_unchecked(p, mech);
  if (r <= 0.0) throw DegenerateRejection("rejection probability is zero for " + std::string(to_string(mech)));
  return r;
}

double gamma(Mechanism mech, double s, const EconomyParams& p) {
  switch (mech) {
    case Mechanism::N: return s - p.g;
    case Mechanism::DA: return (1.0 - p.pi) * (s - p.g) + p.pi * p.e;
    case Mechanism::TTC: return (1.0 - 2.0 * p.pi) * s + 2.0 * p.pi * p.e - p.g;
    default: require_core(mech);
  }
  return 0.0;
}

double gamma_slope(Mechanism mech, const EconomyParams& p) {
  switch (mech) {
    case Mechanism::N: return 1.0;
    case Mechanism::DA: return 1.0 - p.pi;
    case Mechanism::TTC: return 1.0 - 2.0 * p.pi;
    default: require_core(mech);
  }
  return 0.0;
}

double delta_u(Mechanism mech, double r, double p, double s, double omega, const EconomyParams& e) {
  const double g = e.g, eps = e.e, pi = e.pi;
  double gain = 0.0;
  switch (mech) {
    case Mechanism::N:
      gain = s - g;
      break;
    case Mechanism::DA:
      if (s <= g) gain = pi * (s + eps - g);
      else if (s <= eps + g) gain = pi * (s + eps - g) + (1.0 - 2.0 * pi) * (s - g);
      else gain = s - g;
      break;
    case Mechanism::TTC:
      if (s <= g) gain = 2.0 * pi * (eps - g);
      else if (s <= eps - g) gain = (1.0 - 2.0 * pi) * s + 2.0 * pi * eps - g;
      else if (s <= eps + g) gain = pi * (s + eps - g) + (1.0 - 2.0 * pi) * (s - g);
      else gain = s - g;
      break;
    default:
      require_core(mech);
  }
  return r * gain - omega * p;
}

double policy_delta_u(Mechanism mech, double r, double p, double s, double omega,
                      const EconomyParams& e, bool exclusion_term) {
  if (mech != Mechanism::DA_L && mech != Mechanism::DA_WL)
    throw std::invalid_argument("policy utility gain needs da_l or da_wl");
  if (!is_policy_profile(e)) throw std::invalid_argument("policy mechanisms need the example economy profile");
  if (mech == Mechanism::DA_WL && !e.wealth.is_poorest(omega)) r = 1.0;
  double gain = r * ((s + 1.0) / 3.0 + s / 3.0);
  if (exclusion_term) gain -= (1.0 - r) * (1.0 - s) / 3.0;
  return gain - omega * p;
}

}  // namespace segsolve
