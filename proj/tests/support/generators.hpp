#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "segsolve/economy.hpp"

namespace gen {

inline segsolve::SignalCdf random_cdf(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (rng() % 4) {
    case 0: return segsolve::SignalCdf::uniform();
    case 1: {
      double x = 0.05 + 0.9 * u(rng);
      double y = x + (0.98 - x) * u(rng);
      return segsolve::SignalCdf::single_kink(x, std::max(x, y));
    }
    case 2: return segsolve::SignalCdf::power(0.3 + 0.7 * u(rng));
    default: {
      // concave piecewise: decreasing slopes built from sorted random increments
      int k = 2 + int(rng() % 3);
      std::vector<double> xs{0.0}, slopes;
      for (int i = 0; i < k; ++i) slopes.push_back(0.2 + 2.0 * u(rng));
      std::sort(slopes.rbegin(), slopes.rend());
      for (int i = 1; i < k; ++i) xs.push_back(u(rng));
      xs.push_back(1.0);
      std::sort(xs.begin(), xs.end());
      std::vector<std::pair<double, double>> knots{{0.0, 0.0}};
      double y = 0.0;
      for (int i = 0; i < k; ++i) {
        y += slopes[i] * (xs[i + 1] - xs[i]);
        knots.push_back({xs[i + 1], y});
      }
      for (auto& kn : knots) kn.second /= y;
      knots.back().second = 1.0;
      for (std::size_t i = 1; i + 1 < knots.size(); ++i)
        if (knots[i].first - knots[i - 1].first < 1e-3) return segsolve::SignalCdf::uniform();
      return segsolve::SignalCdf::piecewise(knots);
    }
  }
}

inline segsolve::WealthDist random_wealth(std::mt19937_64& rng, int types) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    std::vector<double> rho(types), w(types);
    double rs = 0.0;
    for (auto& r : rho) rs += (r = 0.2 + u(rng));
    for (auto& r : rho) r /= rs;
    double mean = 0.0;
    for (int i = 0; i < types; ++i) mean += rho[i] * (w[i] = 0.8 + 0.4 * u(rng));
    std::vector<segsolve::WealthAtom> atoms;
    for (int i = 0; i < types; ++i) atoms.push_back({w[i] / mean, rho[i]});
    try {
      return segsolve::WealthDist(atoms);
    } catch (const std::invalid_argument&) {
    }
  }
}

// Economy with 2-4 wealth types and a random concave F satisfying both
// assumptions for N, DA and TTC.
inline segsolve::EconomyParams random_economy(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    segsolve::EconomyParams p;
    p.m = 2 + int(rng() % 3);
    p.q = 0.2 + 0.5 * u(rng);
    p.pi = 0.05 + 0.35 * u(rng);
    p.g = rng() % 3 == 0 ? 0.0 : 0.15 * u(rng);
    p.e = rng() % 3 == 0 ? 1.0 - p.g : p.g + (1.0 - 2.0 * p.g) * (0.6 + 0.4 * u(rng));
    p.delta_q = 0.0;
    p.cdf = random_cdf(rng);
    p.wealth = random_wealth(rng, 2 + int(rng() % 3));
    try {
      p.validate_structure();
      if (!segsolve::check_assumption1(p).passed()) continue;
      if (!segsolve::check_assumption2(p).passed()) continue;
      return p;
    } catch (const std::exception&) {
    }
  }
}

}  // namespace gen
