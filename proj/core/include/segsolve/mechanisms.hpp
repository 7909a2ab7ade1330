#pragma once

#include <functional>
#include <stdexcept>

#include "segsolve/economy.hpp"
#include "segsolve/mechanism.hpp"

namespace segsolve {

// Ex-post flows at one oversubscribed school, per unit class.
struct AggregateFlows {
  double demand = 0.0;    // out-of-zone demand D
  double supply = 0.0;    // seats vacated by residents S
  double exchange = 0.0;  // residents pointing to other oversubscribed schools X
};

// Flows of one wealth type whose cutoff is s (D(s), S(s), X(s)).
AggregateFlows type_flows(const EconomyParams& params, double s);
// Aggregate flows under market clearing; independent of the cutoff profile.
AggregateFlows aggregate_flows(const EconomyParams& params);

// Thrown when school choice is degenerate (r = 0).
struct DegenerateRejection : std::domain_error {
  using std::domain_error::domain_error;
};

// Rejection probability of an out-of-zone lottery applicant (N, DA, TTC).
double rejection(const EconomyParams& params, Mechanism mech);
// Same without the r > 0 requirement.
double rejection_unchecked(const EconomyParams& params, Mechanism mech);

// Linear cutoff functional: gamma(s_omega) = omega p / r.
double gamma(Mechanism mech, double s, const EconomyParams& params);
// Slope of gamma in s.
double gamma_slope(Mechanism mech, const EconomyParams& params);

// Expected utility gain from living in the own-zone neighborhood rather than n0.
double delta_u(Mechanism mech, double r, double p, double s, double omega, const EconomyParams& params);

using DeltaU = std::function<double(Mechanism, double r, double p, double s, double omega,
                                    const EconomyParams&)>;

// Utility gain under the n0-priority policies DA_L and DA_WL. For DA_WL, r is
// the poor type's rejection probability; the richer type is never admitted out
// of zone. Throws std::invalid_argument off the policy profile.
double policy_delta_u(Mechanism mech, double r, double p, double s, double omega,
                      const EconomyParams& params, bool exclusion_term = true);

}  // namespace segsolve
