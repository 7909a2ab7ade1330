#include "segsolve/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace segsolve {
namespace {

constexpr double kValidTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::vector<std::pair<double, double>> knots_of(const CdfSpec& spec) {
  if (std::holds_alternative<Uniform>(spec)) return {{0.0, 0.0}, {1.0, 1.0}};
  if (auto* k = std::get_if<SingleKink>(&spec)) return {{0.0, 0.0}, {k->x, k->y}, {1.0, 1.0}};
  if (auto* p = std::get_if<PiecewiseLinear>(&spec)) return p->knots;
  return {};
}

void check_knots(const std::vector<std::pair<double, double>>& kn, ValidationReport& rep) {
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    rep.items.push_back({std::move(name), ok, false, ok ? std::string{} : std::move(detail)});
  };
  if (kn.size() < 2) {
    add("knot count", false, "need at least two knots");
    return;
  }
  bool finite = std::all_of(kn.begin(), kn.end(), [](auto& k) {
    return std::isfinite(k.first) && std::isfinite(k.second);
  });
  add("finite knots", finite, "non-finite knot coordinate");
  if (!finite) return;
  add("F(0)=0", kn.front().first == 0.0 && std::abs(kn.front().second) <= kValidTol,
      "first knot must be (0,0)");
  add("F(1)=1", kn.back().first == 1.0 && std::abs(kn.back().second - 1.0) <= kValidTol,
      "last knot must be (1,1)");
  bool increasing_x = true, monotone = true, in_range = true, concave = true, above = true;
  double prev_slope = INFINITY;
  for (std::size_t i = 0; i < kn.size(); ++i) {
    auto [x, y] = kn[i];
    if (y < -kValidTol || y > 1.0 + kValidTol || x < 0.0 || x > 1.0) in_range = false;
    if (y < x - kValidTol) above = false;
    if (i == 0) continue;
    double dx = x - kn[i - 1].first, dy = y - kn[i - 1].second;
    if (dx <= 0.0) {
      increasing_x = false;
      continue;
    }
    if (dy < -kValidTol) monotone = false;
    double slope = dy / dx;
    if (slope > prev_slope + kValidTol) concave = false;
    prev_slope = slope;
  }
  add("knots strictly increasing in x", increasing_x, "knot signals must strictly increase");
  add("values in [0,1]", in_range, "knot outside the unit square");
  add("nondecreasing", monotone, "F decreases between knots");
  add("weakly concave", concave, "chord slopes increase");
  add("F(x) >= x", above, "F below the diagonal");
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](auto& c) { return c.passed; });
}

bool ValidationReport::boundary() const {
  return std::any_of(items.begin(), items.end(), [](auto& c) { return c.boundary; });
}

std::string ValidationReport::summary() const {
  std::string out;
  for (auto& c : items) {
    if (c.passed) continue;
    if (!out.empty()) out += "\n";
    out += c.name + (c.detail.empty() ? "" : ": " + c.detail);
  }
  return out;
}

ValidationReport validate(const CdfSpec& spec) {
  ValidationReport rep;
  if (auto* k = std::get_if<SingleKink>(&spec)) {
    bool inside = k->x > 0.0 && k->x < 1.0 && k->y > 0.0 && k->y < 1.0;
    rep.items.push_back({"kink inside unit square", inside, false,
                         inside ? "" : "kink must lie in (0,1)^2"});
    rep.items.push_back({"kink on or above diagonal", k->y >= k->x, false,
                         k->y >= k->x ? "" : "kink_y < kink_x makes F convex"});
    if (!inside) return rep;
  }
  if (auto* p = std::get_if<Power>(&spec)) {
    bool ok = std::isfinite(p->alpha) && p->alpha > 0.0 && p->alpha <= 1.0;
    rep.items.push_back({"exponent in (0,1]", ok, false, ok ? "" : "alpha=" + fmt(p->alpha)});
    return rep;
  }
  check_knots(knots_of(spec), rep);
  return rep;
}

SignalCdf::SignalCdf() : SignalCdf(CdfSpec{Uniform{}}) {}

SignalCdf::SignalCdf(CdfSpec spec) : spec_(std::move(spec)) {
  auto rep = validate(spec_);
  if (!rep.passed()) throw std::invalid_argument("invalid signal cdf " + describe() + ": " + rep.summary());
  if (auto* p = std::get_if<Power>(&spec_)) {
    alpha_ = p->alpha;
  } else {
    knots_ = knots_of(spec_);
    knots_.front().second = 0.0;
    knots_.back().second = 1.0;
  }
}

bool SignalCdf::is_uniform() const {
  if (std::holds_alternative<Uniform>(spec_)) return true;
  if (auto* k = std::get_if<SingleKink>(&spec_)) return k->x == k->y;
  if (auto* p = std::get_if<Power>(&spec_)) return p->alpha == 1.0;
  for (auto& [x, y] : knots_)
    if (x != y) return false;
  return true;
}

double SignalCdf::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("cdf evaluated outside [0,1]: " + fmt(x));
  if (knots_.empty()) return x == 0.0 ? 0.0 : std::pow(x, alpha_);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const auto& k) { return v < k.first; });
  if (it == knots_.end()) return 1.0;
  auto& hi = *it;
  auto& lo = *(it - 1);
  return lo.second + (hi.second - lo.second) * (x - lo.first) / (hi.first - lo.first);
}

double SignalCdf::eval_extended(double x) const {
  if (x < 0.0) return 0.0;
  if (x <= 1.0) return eval(x);
  double slope;
  if (knots_.empty()) {
    slope = alpha_;
  } else {
    auto& a = knots_[knots_.size() - 2];
    auto& b = knots_.back();
    slope = (b.second - a.second) / (b.first - a.first);
  }
  return 1.0 + slope * (x - 1.0);
}

double SignalCdf::inverse(double y) const {
  if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("cdf inverse outside [0,1]: " + fmt(y));
  if (knots_.empty()) return std::pow(y, 1.0 / alpha_);
  auto it = std::lower_bound(knots_.begin(), knots_.end(), y,
                             [](const auto& k, double v) { return k.second < v; });
  if (it->second == y) {
    if (y < 1.0 && it + 1 != knots_.end() && (it + 1)->second == y)
      throw std::domain_error("cdf inverse ambiguous on flat segment at " + fmt(y));
    return it->first;
  }
  auto& hi = *it;
  auto& lo = *(it - 1);
  return lo.first + (hi.first - lo.first) * (y - lo.second) / (hi.second - lo.second);
}

std::string SignalCdf::describe() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Uniform>) return "uniform";
        else if constexpr (std::is_same_v<T, SingleKink>) return "single_kink(" + fmt(s.x) + "," + fmt(s.y) + ")";
        else if constexpr (std::is_same_v<T, Power>) return "power(" + fmt(s.alpha) + ")";
        else return "piecewise(" + std::to_string(s.knots.size()) + " knots)";
      },
      spec_);
}

std::vector<SignalCdf> enumerate_single_kink(double step) {
  if (!(step > 0.0 && step < 1.0)) throw std::invalid_argument("grid step must lie in (0,1)");
  long n = std::lround(1.0 / step);
  if (n < 2 || std::abs(n * step - 1.0) > 1e-9) throw std::invalid_argument("grid step must divide 1");
  std::vector<SignalCdf> out;
  for (long i = 1; i < n; ++i)
    for (long j = i; j < n; ++j)
      out.push_back(SignalCdf::single_kink(double(i) / n, double(j) / n));
  return out;
}

}  // namespace segsolve
