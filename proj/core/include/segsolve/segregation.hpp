#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "segsolve/equilibrium.hpp"

namespace segsolve {

enum class Location { N0, N1, C0, C1 };
std::string_view to_string(Location loc);

struct TypeMass {
  double omega = 1.0;
  double mass = 0.0;
};

struct SegregationProfile {
  Location location = Location::N1;
  std::vector<TypeMass> masses;  // poorest first
  double avg_wealth = 1.0;
  std::optional<double> poor_share;  // binary wealth only
  double deviation = 0.0;            // |avg_wealth - 1|

  double total() const;
  // Builds a profile and its derived fields from per-type masses.
  static SegregationProfile from_masses(Location loc, std::vector<TypeMass> masses);
};

struct NeighborhoodProfiles {
  SegregationProfile n1;
  SegregationProfile n0;
};

struct NegativeMass : std::domain_error {
  using std::domain_error::domain_error;
};
struct SignMismatch : std::domain_error {
  using std::domain_error::domain_error;
};

NeighborhoodProfiles neighborhood_profile(const Equilibrium& eq);
// Wealth profile of one oversubscribed school. Policy equilibria use their
// per-type rejection probabilities and default eligible pools.
SegregationProfile school_profile(const Equilibrium& eq);
// Seat accounting under n0-priority policies at fixed cutoffs (g=0, e=1).
SegregationProfile policy_school_profile(const EconomyParams& params, const std::vector<Cutoff>& cutoffs,
                                         const std::vector<double>& type_rejection, EligiblePool pool);

// |F(s_to) - (1-q)| / |F(s_from) - (1-q)|; throws SignMismatch outside the
// common-sign set.
double expansion_rate(const Equilibrium& from, const Equilibrium& to, double omega);
// Wealth types whose representation in n1 has the same sign under both
// equilibria; types with a zero deviation under `from` are excluded.
std::vector<double> common_sign_types(const Equilibrium& from, const Equilibrium& to);

enum class Ordering { Greater, Smaller, Equal, Ambiguous };
std::string_view to_string(Ordering o);

// Greater when a deviates from the mean wealth more than b by more than tol.
Ordering compare(const SegregationProfile& a, const SegregationProfile& b, double tol = 1e-9);
// Location-wise comparison; Ambiguous when locations disagree.
Ordering compare(std::span<const SegregationProfile> a, std::span<const SegregationProfile> b,
                 double tol = 1e-9);

struct TheoremCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  std::string detail;
};

struct TheoremReport {
  std::vector<TheoremCheck> checks;
  bool passed() const;
  std::size_t applicable_count() const;
  std::string failures() const;
};

// Solves N, DA and TTC and evaluates the ordering results: dispersion and
// neighborhood ordering, the expansion-rate conditions for school ordering,
// price ordering, the uniform-signal equalities and the binary-wealth claims.
TheoremReport check_theorems(const EconomyParams& params);

}  // namespace segsolve
