#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "segsolve/economy.hpp"

namespace segsolve {

struct KinkRecord {
  double x = 0.0;
  double y = 0.0;
  bool feasible = false;
  double share_n = 0.0;   // poor share at c1 under N (fraction)
  double share_da = 0.0;  // poor share at c1 under DA (fraction)
  double diff = 0.0;      // share_da - share_n
  bool da_less_segregated = false;
  double expansion_rate = 0.0;  // N -> DA for the poor type (NaN if undefined)
  double threshold = 0.0;       // 1 / (r^DA (1 - pi))
  std::string reason;           // why infeasible
};

// Which kinks count toward a sweep's denominator.
enum class Feasibility {
  Interior,     // Assumption 1 holds and both solves return interior cutoffs
  Assumptions,  // additionally Assumption 2 for N and DA
};
std::string_view to_string(Feasibility f);
Feasibility parse_feasibility(std::string_view s);  // "interior" | "assumptions"

struct KinkSweepResult {
  double step = 0.1;
  Feasibility feasibility = Feasibility::Interior;
  std::vector<KinkRecord> records;  // ordered by (x, y)

  std::size_t feasible_count() const;
  std::size_t da_less_count() const;
};

KinkSweepResult kink_sweep(const EconomyParams& base, double step, unsigned threads = 1,
                           Feasibility feasibility = Feasibility::Interior);

struct CubeCell {
  double rho_p = 0.0;
  double q = 0.0;
  double pi = 0.0;
  std::size_t n_feasible = 0;
  std::size_t n_da_less = 0;
  double pct = 0.0;
};

// Wealth indices of a cube cell. Both keep the population mean at 1.
struct CubeWealth {
  enum class Kind {
    FixedPoor,    // omega^P = value, omega^R = (1 - rho omega^P) / (1 - rho)
    FixedSpread,  // omega^P - omega^R = value
  };
  Kind kind = Kind::FixedPoor;
  double value = 1.125;

  static CubeWealth fixed_poor(double omega_p) { return {Kind::FixedPoor, omega_p}; }
  static CubeWealth fixed_spread(double spread) { return {Kind::FixedSpread, spread}; }
  std::string describe() const;
};

struct CubeSweepResult {
  std::vector<double> rho_list, q_list, pi_list;
  double step = 0.1;
  CubeWealth wealth;
  Feasibility feasibility = Feasibility::Interior;
  std::vector<CubeCell> cells;  // rho-major, then q, then pi
};

// Binary economy for one cube cell: m=2, g=0, e=1, uniform F. Throws
// std::invalid_argument when the rule leaves a wealth index <= 0.
EconomyParams cube_economy(double rho_p, double q, double pi, CubeWealth wealth = {});

CubeSweepResult cube_sweep(const std::vector<double>& rho_list, const std::vector<double>& q_list,
                           const std::vector<double>& pi_list, double step, unsigned threads = 0,
                           CubeWealth wealth = {}, Feasibility feasibility = Feasibility::Interior);

// Locale-independent CSV with 12 significant digits.
void write_kink_csv(std::ostream& os, const KinkSweepResult& r);
void write_cube_csv(std::ostream& os, const CubeSweepResult& r);
std::string format_number(double v);

}  // namespace segsolve
