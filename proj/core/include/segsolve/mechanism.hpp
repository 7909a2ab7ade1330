#pragma once

#include <string>
#include <string_view>

namespace segsolve {

enum class Mechanism { N, DA, TTC, DA_L, DA_WL, NoPriority, Auction };

// CLI/config spelling: "n", "da", "ttc", "da_l", "da_wl", "no_priority", "auction".
std::string_view to_string(Mechanism m);
// Throws std::invalid_argument on unknown names.
Mechanism parse_mechanism(std::string_view name);
// N, DA and TTC: the mechanisms covered by the general equilibrium solver.
bool is_core(Mechanism m);

}  // namespace segsolve
