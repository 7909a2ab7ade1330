#include "segsolve/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace segsolve {
namespace {

constexpr int kMaxIter = 200;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double capacity_residual(const EconomyParams& p, double a, double d) {
  double sum = 0.0;
  for (auto& w : p.wealth.atoms()) sum += w.rho * p.cdf(clamp01(a + d * w.omega));
  return sum - (1.0 - p.q);
}

// Bisection on a nondecreasing function; returns x with f(x) ~ 0.
template <class Fn>
double bisect(Fn f, double lo, double hi, int* iterations) {
  int it = 0;
  for (; it < kMaxIter; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double v = f(mid);
    if (v == 0.0) {
      lo = hi = mid;
      break;
    }
    (v < 0.0 ? lo : hi) = mid;
  }
  if (iterations) *iterations = it;
  return 0.5 * (lo + hi);
}

void check_interior(const Equilibrium& eq) {
  const auto& p = eq.params;
  for (auto& c : eq.cutoffs) {
    if (!(c.s > p.g && c.s < p.e - p.g) || !(p.cdf(c.s) < 1.0))
      throw SolveError(SolveError::Kind::InteriorViolation,
                       std::string(to_string(eq.mech)) + ": cutoff " + fmt(c.s) + " for omega=" +
                           fmt(c.omega) + " outside (g, e-g)");
  }
}

Equilibrium finish(const EconomyParams& params, Mechanism mech, double r, double a, double d) {
  Equilibrium eq;
  eq.mech = mech;
  eq.params = params;
  eq.r = r;
  eq.d = d;
  eq.intercept = a;
  eq.p = r * price_factor(mech, params) * d;
  for (auto& w : params.wealth.atoms()) {
    double s = a + d * w.omega;
    eq.cutoffs.push_back({w.omega, s});
    eq.e_s += w.rho * s;
  }
  eq.diag.residual = capacity_residual(params, a, d);
  check_interior(eq);
  return eq;
}

double checked_rejection(const EconomyParams& params, Mechanism mech) {
  try {
    return rejection(params, mech);
  } catch (const DegenerateRejection& ex) {
    throw SolveError(SolveError::Kind::DegenerateRejection, ex.what());
  }
}

double mean_cutoff(const EconomyParams& p, const std::vector<Cutoff>& cs) {
  double m = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) m += p.wealth.atoms()[i].rho * cs[i].s;
  return m;
}

}  // namespace

double Equilibrium::cutoff_for(double omega) const {
  for (auto& c : cutoffs)
    if (c.omega == omega) return c.s;
  throw std::out_of_range("no cutoff for omega=" + fmt(omega));
}

double cutoff_intercept(Mechanism mech, const EconomyParams& p) {
  switch (mech) {
    case Mechanism::N: return p.g;
    case Mechanism::DA: return p.g - p.pi * p.e / (1.0 - p.pi);
    case Mechanism::TTC: return (p.g - 2.0 * p.pi * p.e) / (1.0 - 2.0 * p.pi);
    default: throw std::invalid_argument("cutoff line needs N, DA or TTC");
  }
}

double price_factor(Mechanism mech, const EconomyParams& p) { return gamma_slope(mech, p); }

Equilibrium solve_bracketed(const EconomyParams& params, Mechanism mech, double d_lo, double d_hi) {
  double r = checked_rejection(params, mech);
  double a = cutoff_intercept(mech, params);
  auto f = [&](double d) { return capacity_residual(params, a, d); };
  if (!(f(d_lo) <= 0.0 && f(d_hi) >= 0.0))
    throw SolveError(SolveError::Kind::BracketFailure, std::string(to_string(mech)) +
                                                           ": capacity root not bracketed in [" + fmt(d_lo) +
                                                           ", " + fmt(d_hi) + "]");
  int it = 0;
  double d = bisect(f, d_lo, d_hi, &it);
  auto eq = finish(params, mech, r, a, d);
  eq.diag.iterations = it;
  return eq;
}

Equilibrium solve(const EconomyParams& params, Mechanism mech) {
  double a = cutoff_intercept(mech, params);
  double d_max = (params.e - params.g - a) / params.wealth.max_omega();
  return solve_bracketed(params, mech, 0.0, d_max);
}

Equilibrium solve_closed_form_uniform(const EconomyParams& params, Mechanism mech) {
  if (!params.cdf.is_uniform()) throw std::invalid_argument("closed form needs uniform signals");
  double r = checked_rejection(params, mech);
  double a = cutoff_intercept(mech, params);
  auto eq = finish(params, mech, r, a, 1.0 - params.q - a);
  eq.diag.closed_form = true;
  return eq;
}

double mean_cutoff_for_dispersion(const EconomyParams& params, double d) {
  double lo = -d * params.wealth.max_omega(), hi = 1.0;
  double a = bisect([&](double x) { return capacity_residual(params, x, d); }, lo, hi, nullptr);
  double m = 0.0;
  for (auto& w : params.wealth.atoms()) m += w.rho * clamp01(a + d * w.omega);
  return m;
}

double policy_rejection(const EconomyParams& p, const std::vector<Cutoff>& cutoffs, EligiblePool pool) {
  const auto& F = p.cdf;
  double supply = 0.0, demand = 0.0;
  double fg = F(p.g), fepg = F(std::min(1.0, p.e + p.g));
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    const auto& w = p.wealth.atoms()[i];
    double s = cutoffs[i].s, fs = F(s);
    supply += w.rho * p.pi * (fepg - fs);
    switch (pool) {
      case EligiblePool::AllOutOfZone:
        demand += w.rho * type_flows(p, s).demand;
        break;
      case EligiblePool::PoorNeighborhoodZero:
        if (i != 0) break;
        [[fallthrough]];
      case EligiblePool::NeighborhoodZero:
        demand += w.rho * ((1.0 - 2.0 * p.pi) * (fs - fg) + p.pi * fs + p.pi * F(std::min(s, p.e - p.g)));
        break;
    }
  }
  if (demand <= 0.0) return 0.0;
  return std::max(0.0, 1.0 - supply / demand);
}

Equilibrium solve_policy(const EconomyParams& params, Mechanism mech, PolicyOptions opts) {
  if (mech != Mechanism::DA_L && mech != Mechanism::DA_WL)
    throw std::invalid_argument("solve_policy needs da_l or da_wl");
  if (!is_policy_profile(params)) throw std::invalid_argument("policy mechanisms need the example economy profile");
  EligiblePool pool = opts.pool.value_or(mech == Mechanism::DA_L ? EligiblePool::NeighborhoodZero
                                                                 : EligiblePool::PoorNeighborhoodZero);
  const auto& atoms = params.wealth.atoms();

  auto cutoffs_at = [&](double r, double p) {
    std::vector<Cutoff> cs;
    for (auto& w : atoms) {
      // delta u is affine in s
      double u0 = policy_delta_u(mech, r, p, 0.0, w.omega, params, opts.exclusion_term);
      double u1 = policy_delta_u(mech, r, p, 1.0, w.omega, params, opts.exclusion_term);
      double s = u0 >= 0.0 ? 0.0 : (u1 <= 0.0 ? 1.0 : -u0 / (u1 - u0));
      cs.push_back({w.omega, s});
    }
    return cs;
  };
  auto housing = [&](const std::vector<Cutoff>& cs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cs.size(); ++i) sum += atoms[i].rho * params.cdf(cs[i].s);
    return sum - (1.0 - params.q);
  };
  int inner_iters = 0;
  auto price_for = [&](double r) {
    double hi = 1.0;
    while (housing(cutoffs_at(r, hi)) < 0.0) {
      hi *= 2.0;
      if (hi > 1e6) throw SolveError(SolveError::Kind::BracketFailure, "policy price not bracketed");
    }
    return bisect([&](double p) { return housing(cutoffs_at(r, p)); }, 0.0, hi, &inner_iters);
  };
  auto gap = [&](double r) {
    double p = price_for(r);
    return r - policy_rejection(params, cutoffs_at(r, p), pool);
  };

  double lo = 1e-9, hi = 1.0;
  if (!(gap(lo) <= 0.0 && gap(hi) >= 0.0))
    throw SolveError(SolveError::Kind::NoFixedPoint, "policy rejection fixed point not bracketed");
  int outer = 0;
  double r = bisect(gap, lo, hi, &outer);
  double p = price_for(r);

  Equilibrium eq;
  eq.mech = mech;
  eq.params = params;
  eq.r = r;
  eq.p = p;
  eq.cutoffs = cutoffs_at(r, p);
  for (auto& w : atoms)
    eq.type_rejection.push_back(mech == Mechanism::DA_WL && !params.wealth.is_poorest(w.omega) ? 1.0 : r);
  eq.d = (eq.cutoffs.front().s - eq.cutoffs.back().s) / (atoms.front().omega - atoms.back().omega);
  eq.intercept = eq.cutoffs.front().s - eq.d * atoms.front().omega;
  eq.e_s = mean_cutoff(params, eq.cutoffs);
  eq.diag.iterations = outer;
  eq.diag.residual = housing(eq.cutoffs);
  check_interior(eq);
  return eq;
}

Lemma1Report verify_lemma1(const EconomyParams& params, Mechanism mech, const DeltaU& du) {
  Lemma1Report out;
  auto& items = out.report.items;
  std::string name(to_string(mech));
  PriceBounds b;
  try {
    b = price_bounds(params, mech);
  } catch (const std::exception& ex) {
    items.push_back({name + ": price bounds", false, false, ex.what()});
    return out;
  }
  constexpr int kSteps = 1000;
  const double g = params.g;
  for (auto& w : params.wealth.atoms()) {
    for (double r : {b.r_hat, 1.0}) {
      for (double p : {0.0, b.p_hat, b.p_bar}) {
        std::string tag = name + " omega=" + fmt(w.omega) + " r=" + fmt(r) + " p=" + fmt(p);
        bool weak = true, strict = true;
        double prev = du(mech, r, p, 0.0, w.omega, params);
        for (int k = 1; k <= kSteps; ++k) {
          double s0 = double(k - 1) / kSteps, s1 = double(k) / kSteps;
          double cur = du(mech, r, p, s1, w.omega, params);
          if (cur < prev - 1e-12) weak = false;
          if (s0 >= g && !(cur > prev)) strict = false;
          if (s1 <= g && cur == prev) ++out.flat_points;
          prev = cur;
        }
        items.push_back({tag + ": weakly increasing", weak, false, ""});
        items.push_back({tag + ": strictly increasing on [g,1]", strict, false, ""});
      }
      double at_g = du(mech, r, 0.0, g, w.omega, params);
      items.push_back({name + " omega=" + fmt(w.omega) + " r=" + fmt(r) + ": du(g) >= 0 at p=0", at_g >= 0.0,
                       false, "du=" + fmt(at_g)});
    }
  }
  return out;
}

}  // namespace segsolve
