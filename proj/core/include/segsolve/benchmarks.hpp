#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "segsolve/economy.hpp"
#include "segsolve/segregation.hpp"

namespace segsolve {

// The fixed two-type example economy (see example_params()).
class ExampleEconomy {
 public:
  ExampleEconomy() : params_(example_params()) {}
  // Throws std::invalid_argument unless params equal the example profile.
  explicit ExampleEconomy(const EconomyParams& params);
  const EconomyParams& params() const { return params_; }

 private:
  EconomyParams params_;
};

enum class Scenario { N, DAShortTerm, TTCShortTerm, DALongTerm, TTCLongTerm, NoPriority, Auction };
std::string_view to_string(Scenario s);
inline constexpr std::array<Scenario, 7> kAllScenarios{Scenario::N,           Scenario::DAShortTerm,
                                                      Scenario::TTCShortTerm, Scenario::DALongTerm,
                                                      Scenario::TTCLongTerm,  Scenario::NoPriority,
                                                      Scenario::Auction};

// Quality figures are ex-post fit mass at one oversubscribed school x 100;
// shares are percentages.
struct MatchQualityRow {
  Scenario scenario = Scenario::N;
  std::string label;
  double poor_share_c1 = 0.0;
  double poor_quality = 0.0;
  double rich_quality = 0.0;
  double total_quality = 0.0;
  double poor_share_of_quality = 0.0;
};

struct BenchmarkOutcome {
  MatchQualityRow row;
  SegregationProfile school;  // c1 profile (masses per unit class)
  double price = 0.0;         // auction seat price (auction only)
  double admit_probability = 0.0;  // lottery admit probability (no priority only)
};

MatchQualityRow match_quality(Scenario scenario, const ExampleEconomy& ex = {});
BenchmarkOutcome no_priority_outcome(const ExampleEconomy& ex = {});
BenchmarkOutcome auction_outcome(const ExampleEconomy& ex = {});
// Outcome when seats are sold at the given price (not necessarily clearing).
BenchmarkOutcome auction_outcome_at(double tau, const ExampleEconomy& ex = {});

struct NoClearing : std::domain_error {
  using std::domain_error::domain_error;
};

// Seat price clearing one oversubscribed school: an agent takes the seat at
// the preferred specialized school iff its fit exceeds omega * tau. Uniform
// signals, shocks {-1, 0, 1}; atoms need not be normalized.
double clear_seat_auction(std::span<const WealthAtom> atoms, double q, double pi);

std::vector<MatchQualityRow> table1(const ExampleEconomy& ex = {});

struct PolicyRow {
  std::string label;
  double poor_share_n1 = 0.0;  // percent
  double poor_share_c1 = 0.0;  // percent
};
std::vector<PolicyRow> policy_table(const ExampleEconomy& ex = {});

// Reference integer values, row-major.
inline constexpr std::array<std::array<int, 5>, 7> kTable1Reference{{
    {41, 14, 18, 32, 43},
    {45, 19, 24, 43, 45},
    {41, 15, 22, 37, 41},
    {41, 17, 26, 43, 40},
    {9, 4, 32, 36, 10},
    {50, 17, 17, 33, 50},
    {41, 25, 31, 56, 44},
}};
inline constexpr std::array<std::array<int, 2>, 5> kTable2Reference{{
    {33, 41},
    {33, 42},
    {33, 55},
    {36, 44},
    {10, 40},
}};

long round_half_away(double x);

struct TableCell {
  std::string row;
  std::string column;
  double computed = 0.0;
  long rounded = 0;
  int reference = 0;
  bool match = false;  // |rounded - reference| <= 1
};
std::vector<TableCell> compare_table1(const std::vector<MatchQualityRow>& rows);
std::vector<TableCell> compare_table2(const std::vector<PolicyRow>& rows);

}  // namespace segsolve
