#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "segsolve/economy.hpp"
#include "segsolve/mechanisms.hpp"

namespace segsolve {

struct Cutoff {
  double omega = 1.0;
  double s = 0.0;
};

struct SolverDiagnostics {
  int iterations = 0;
  double residual = 0.0;  // capacity residual sum rho F(s) - (1 - q)
  bool closed_form = false;
};

struct Equilibrium {
  Mechanism mech = Mechanism::N;
  EconomyParams params;
  double r = 1.0;          // rejection probability (eligible pool for policies)
  double d = 0.0;          // dispersion: s_omega = intercept + d omega
  double p = 0.0;          // housing price premium
  double e_s = 0.0;        // mean cutoff
  double intercept = 0.0;
  std::vector<Cutoff> cutoffs;  // poorest first, matching params.wealth
  std::vector<double> type_rejection;  // per type; policies only
  SolverDiagnostics diag;

  double cutoff_for(double omega) const;  // throws std::out_of_range
  double p_over_r() const { return p / r; }
};

class SolveError : public std::runtime_error {
 public:
  enum class Kind { InteriorViolation, BracketFailure, NoFixedPoint, DegenerateRejection };
  SolveError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Intercept a of the cutoff line s = a + d omega.
double cutoff_intercept(Mechanism mech, const EconomyParams& params);
// Price per unit of r and d: p = r kappa d.
double price_factor(Mechanism mech, const EconomyParams& params);

// Unique symmetric cutoff equilibrium of N, DA or TTC by bisection on d.
Equilibrium solve(const EconomyParams& params, Mechanism mech);
// Bisection with an explicit initial bracket [d_lo, d_hi] (uniqueness checks).
Equilibrium solve_bracketed(const EconomyParams& params, Mechanism mech, double d_lo, double d_hi);
// Uniform F: E[s] = 1 - q exactly.
Equilibrium solve_closed_form_uniform(const EconomyParams& params, Mechanism mech);

// Mean cutoff implied by dispersion d under capacity-clearing (the intercept
// adjusts so that sum rho F(a + d omega) = 1 - q).
double mean_cutoff_for_dispersion(const EconomyParams& params, double d);

enum class EligiblePool { NeighborhoodZero, PoorNeighborhoodZero, AllOutOfZone };

struct PolicyOptions {
  bool exclusion_term = true;
  std::optional<EligiblePool> pool;  // default: by mechanism
};

// Fixed point in (r, p) for DA_L / DA_WL on the policy profile.
Equilibrium solve_policy(const EconomyParams& params, Mechanism mech, PolicyOptions opts = {});

// Eligible out-of-zone demand and vacated supply at fixed cutoffs; returns the
// pool's rejection probability max(0, 1 - S / D_eligible).
double policy_rejection(const EconomyParams& params, const std::vector<Cutoff>& cutoffs, EligiblePool pool);

struct Lemma1Report {
  ValidationReport report;
  bool passed() const { return report.passed(); }
  int flat_points = 0;  // grid steps on [0,g] with zero change
};

Lemma1Report verify_lemma1(const EconomyParams& params, Mechanism mech, const DeltaU& du = delta_u);

}  // namespace segsolve
