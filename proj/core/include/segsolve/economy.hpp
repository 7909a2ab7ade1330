#pragma once

#include <vector>

#include "segsolve/cdf.hpp"
#include "segsolve/mechanism.hpp"

namespace segsolve {

struct WealthAtom {
  double omega = 1.0;  // wealth index: larger means poorer
  double rho = 1.0;    // population share
};

// Finite wealth distribution, normalized to E[omega] = 1, stored poorest first.
// Throws std::invalid_argument on invalid atoms.
class WealthDist {
 public:
  WealthDist();  // single type omega = 1
  explicit WealthDist(std::vector<WealthAtom> atoms);

  // Binary distribution with spread delta: omega_P = 1 + (1 - rho_p) delta,
  // omega_R = 1 - rho_p delta.
  static WealthDist binary(double rho_p, double delta);

  const std::vector<WealthAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const WealthAtom& poorest() const { return atoms_.front(); }
  const WealthAtom& richest() const { return atoms_.back(); }
  double max_omega() const { return atoms_.front().omega; }
  bool is_poorest(double omega) const { return omega == atoms_.front().omega; }

 private:
  std::vector<WealthAtom> atoms_;
};

struct EconomyParams {
  int m = 2;
  double q = 0.4;
  double delta_q = 0.0;
  double g = 0.0;
  double e = 1.0;
  double pi = 1.0 / 3.0;
  WealthDist wealth;
  SignalCdf cdf;

  // Structural checks (ranges, e + g <= 1); throws std::invalid_argument.
  void validate_structure() const;
};

// The two-type economy used throughout the worked example: m=2, q=0.4,
// g=0, e=1, pi=1/3, uniform signals, omega in {9/8, 7/8} with equal shares.
EconomyParams example_params();

// m=2, g=0, e=1, pi=1/3, uniform F and two wealth types: the profile on which
// the policy and benchmark mechanisms are defined.
bool is_policy_profile(const EconomyParams& params);

// F(g) < 1-q < F(e-g) < 1. Equality F(e-g) = 1 passes flagged as boundary.
ValidationReport check_assumption1(const EconomyParams& params);

struct PriceBounds {
  double p_hat = 0.0;
  double p_bar = 0.0;
  double r_hat = 1.0;
};

// Price range of the mechanism (N, DA or TTC). Throws std::domain_error when
// p_hat > p_bar.
PriceBounds price_bounds(const EconomyParams& params, Mechanism mech);

// For every omega: delta_u(g) < 0 at p_hat and delta_u(e - g) > 0 at p_bar.
ValidationReport check_assumption2(const EconomyParams& params, Mechanism mech);
ValidationReport check_assumption2(const EconomyParams& params);  // N, DA and TTC

}  // namespace segsolve
