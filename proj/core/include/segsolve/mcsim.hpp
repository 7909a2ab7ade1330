#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "segsolve/equilibrium.hpp"
#include "segsolve/matching.hpp"
#include "segsolve/segregation.hpp"

namespace segsolve {

struct Agent {
  int t1 = 1;            // primary-fit school / zone, 1..m
  int t2 = 2;            // secondary-fit school, != t1
  double s = 0.0;        // signal
  int eps = 0;           // shock sign: -1, 0, +1 (shock = eps * e)
  int wealth = 0;        // index into params.wealth.atoms()
};

// Housing allocation rule when in-zone demand differs from the seat count.
enum class HousingRule {
  Lottery,   // demanders above their cutoff; oversubscription rationed by lottery
  Clearing,  // cutoffs shift by omega * delta until each zone exactly fills
};

struct SimConfig {
  std::size_t n_agents = 200000;
  std::uint64_t seed = 1;
  EconomyParams params;
  Mechanism mech = Mechanism::DA;
  std::vector<Cutoff> cutoffs;  // poorest first
  std::size_t replications = 20;
  unsigned threads = 0;  // 0: hardware concurrency
  HousingRule housing = HousingRule::Clearing;

  // Throws std::invalid_argument when n_agents < 1000, n q < 100 or the
  // cutoffs do not match the wealth types.
  void validate() const;
};

// Agents drawn from the economy; deterministic in the generator state.
std::vector<Agent> sample_agents(const EconomyParams& params, std::size_t n, std::mt19937_64& rng);
std::vector<Agent> sample_agents(const SimConfig& config);  // uses config.seed

// Zone per agent: 0 for n0, t1 when housed in the own zone.
std::vector<int> housing_stage(const std::vector<Agent>& agents, const std::vector<Cutoff>& cutoffs,
                               const EconomyParams& params, HousingRule rule, std::mt19937_64& rng);

// Finite instance for the school stage (one lottery number per student).
MatchingInstance build_instance(const std::vector<Agent>& agents, const std::vector<int>& residency,
                                const EconomyParams& params, Mechanism mech, std::uint64_t seed);
// Ex-post utility of an agent at a school (0 = default school).
double school_utility(const Agent& a, int school, const EconomyParams& params);

Assignment run_da_finite(const std::vector<Agent>& agents, const std::vector<int>& residency,
                         const EconomyParams& params, std::uint64_t seed);
Assignment run_ttc_finite(const std::vector<Agent>& agents, const std::vector<int>& residency,
                          const EconomyParams& params, std::uint64_t seed);
// School stage for any mechanism: N, DA, TTC, DA_L, DA_WL, NoPriority, Auction.
Assignment run_school_stage(const std::vector<Agent>& agents, const std::vector<int>& residency,
                            const EconomyParams& params, Mechanism mech, std::uint64_t seed);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::optional<double> target;
  std::optional<double> z;
};

// Per-replication statistics, normalized per unit class (counts / n).
struct ReplicationDraw {
  std::uint64_t seed = 0;
  double rejection = 0.0;  // NaN when no out-of-zone applicants
  std::vector<double> n1, n0, c1, c0;  // per wealth type
  std::vector<double> quality;         // per wealth type, fit mass at specialized schools
  double quality_total = 0.0;
  std::size_t n0_admitted = 0;         // n0 residents placed at specialized schools
};

struct MassEstimate {
  Location location = Location::N1;
  double omega = 1.0;
  Estimate value;
};

struct SimResult {
  Mechanism mech = Mechanism::DA;
  std::size_t n_agents = 0;
  std::uint64_t seed = 0;
  Estimate rejection;
  std::vector<MassEstimate> masses;
  std::vector<Estimate> quality;  // per wealth type
  Estimate quality_total;
  Estimate poor_share_n1;
  Estimate poor_share_c1;
  std::vector<ReplicationDraw> draws;

  const MassEstimate& mass(Location loc, double omega) const;
};

ReplicationDraw run_replication(const SimConfig& config, std::uint64_t rep_seed);
std::uint64_t replication_seed(std::uint64_t seed, std::size_t index);
SimResult estimate(const SimConfig& config);

// Analytic values to score the estimates against.
struct AnalyticTargets {
  std::optional<double> rejection;
  std::vector<MassEstimate> masses;  // value.mean holds the target
  std::vector<double> quality;       // per wealth type (per unit class)
  std::optional<double> quality_total;
};
// Fills targets and z-scores ((mean - target) / se; 0 when both the gap and
// the standard error vanish).
void score(SimResult& result, const AnalyticTargets& targets);
// Targets from an equilibrium and the school-stage closed forms.
AnalyticTargets targets_from(const Equilibrium& eq);

}  // namespace segsolve
