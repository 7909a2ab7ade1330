#include "segsolve/economy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "segsolve/mechanisms.hpp"

namespace segsolve {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

WealthDist::WealthDist() : atoms_{{1.0, 1.0}} {}

WealthDist::WealthDist(std::vector<WealthAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("wealth distribution is empty");
  double mass = 0.0, mean = 0.0;
  for (auto& a : atoms_) {
    if (!(std::isfinite(a.omega) && a.omega > 0.0))
      throw std::invalid_argument("wealth index must be positive: " + fmt(a.omega));
    if (!(std::isfinite(a.rho) && a.rho > 0.0 && a.rho <= 1.0))
      throw std::invalid_argument("wealth share must lie in (0,1]: " + fmt(a.rho));
    mass += a.rho;
    mean += a.rho * a.omega;
  }
  if (std::abs(mass - 1.0) > 1e-12) throw std::invalid_argument("wealth shares sum to " + fmt(mass));
  if (std::abs(mean - 1.0) > 1e-12) throw std::invalid_argument("mean wealth index is " + fmt(mean) + ", not 1");
  std::sort(atoms_.begin(), atoms_.end(), [](auto& a, auto& b) { return a.omega > b.omega; });
  for (std::size_t i = 1; i < atoms_.size(); ++i)
    if (atoms_[i].omega == atoms_[i - 1].omega)
      throw std::invalid_argument("duplicate wealth index " + fmt(atoms_[i].omega));
}

WealthDist WealthDist::binary(double rho_p, double delta) {
  return WealthDist({{1.0 + (1.0 - rho_p) * delta, rho_p}, {1.0 - rho_p * delta, 1.0 - rho_p}});
}

void EconomyParams::validate_structure() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
  };
  need(m >= 2, "m must be at least 2");
  need(std::isfinite(q) && q > 0.0 && q < 1.0, "q must lie in (0,1)");
  need(std::isfinite(delta_q) && delta_q >= 0.0, "delta_q must be nonnegative");
  need(std::isfinite(g) && g >= 0.0, "g must be nonnegative");
  need(std::isfinite(e) && e > 0.0, "e must be positive");
  need(std::isfinite(pi) && pi > 0.0 && pi < 0.5, "pi must lie in (0,1/2)");
  need(e + g <= 1.0 + 1e-12, "e + g must not exceed 1");
}

EconomyParams example_params() {
  EconomyParams p;
  p.m = 2;
  p.q = 0.4;
  p.delta_q = 0.0;
  p.g = 0.0;
  p.e = 1.0;
  p.pi = 1.0 / 3.0;
  p.wealth = WealthDist({{9.0 / 8.0, 0.5}, {7.0 / 8.0, 0.5}});
  p.cdf = SignalCdf::uniform();
  return p;
}

bool is_policy_profile(const EconomyParams& p) {
  return p.m == 2 && p.delta_q == 0.0 && std::abs(p.g) < 1e-12 && std::abs(p.e - 1.0) < 1e-12 &&
         std::abs(p.pi - 1.0 / 3.0) < 1e-9 && p.cdf.is_uniform() && p.wealth.size() == 2;
}

ValidationReport check_assumption1(const EconomyParams& p) {
  ValidationReport rep;
  double target = 1.0 - p.q;
  double fg = p.cdf.eval(std::clamp(p.g, 0.0, 1.0));
  double x = p.e - p.g;
  double feg = x < 0.0 ? 0.0 : p.cdf.eval(std::min(x, 1.0));
  rep.items.push_back({"F(g) < 1-q", fg < target, false, "F(g)=" + fmt(fg) + ", 1-q=" + fmt(target)});
  rep.items.push_back({"1-q < F(e-g)", target < feg, false, "F(e-g)=" + fmt(feg) + ", 1-q=" + fmt(target)});
  CheckItem last{"F(e-g) < 1", feg < 1.0, false, "F(e-g)=" + fmt(feg)};
  if (feg == 1.0) {
    last.passed = true;
    last.boundary = true;
    last.detail = "F(e-g)=1: accepted at the boundary";
  }
  rep.items.push_back(last);
  return rep;
}

PriceBounds price_bounds(const EconomyParams& p, Mechanism mech) {
  if (!is_core(mech)) throw std::invalid_argument("price bounds need N, DA or TTC");
  PriceBounds b;
  b.r_hat = rejection(p, mech);
  double s_star = p.cdf.inverse(1.0 - p.q);
  b.p_hat = b.r_hat * gamma(mech, s_star, p);
  double t = 1.0 - p.q;
  switch (mech) {
    case Mechanism::N: b.p_bar = b.r_hat * (t - p.g); break;
    case Mechanism::DA: b.p_bar = b.r_hat * ((1.0 - p.pi) * (t - p.g) + p.pi * p.e); break;
    default: b.p_bar = b.r_hat * ((1.0 - 2.0 * p.pi) * t + 2.0 * p.pi * p.e - p.g); break;
  }
  if (b.p_hat > b.p_bar + 1e-12)
    throw std::domain_error("price bounds inverted: p_hat=" + fmt(b.p_hat) + " > p_bar=" + fmt(b.p_bar));
  return b;
}

ValidationReport check_assumption2(const EconomyParams& p, Mechanism mech) {
  ValidationReport rep;
  std::string name(to_string(mech));
  PriceBounds b;
  try {
    b = price_bounds(p, mech);
  } catch (const std::exception& ex) {
    rep.items.push_back({name + ": price bounds", false, false, ex.what()});
    return rep;
  }
  for (auto& a : p.wealth.atoms()) {
    double lo = delta_u(mech, b.r_hat, b.p_hat, p.g, a.omega, p);
    double hi = delta_u(mech, b.r_hat, b.p_bar, p.e - p.g, a.omega, p);
    std::string tag = name + " omega=" + fmt(a.omega);
    rep.items.push_back({tag + ": du(g) < 0 at p_hat", lo < 0.0, false, "du=" + fmt(lo)});
    rep.items.push_back({tag + ": du(e-g) > 0 at p_bar", hi > 0.0, false, "du=" + fmt(hi)});
  }
  return rep;
}

ValidationReport check_assumption2(const EconomyParams& p) {
  ValidationReport rep;
  for (auto m : {Mechanism::N, Mechanism::DA, Mechanism::TTC}) {
    auto r = check_assumption2(p, m);
    rep.items.insert(rep.items.end(), r.items.begin(), r.items.end());
  }
  return rep;
}

}  // namespace segsolve
