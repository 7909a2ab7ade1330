#include "segsolve_cli/json_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace segsolve {
namespace {

Json num_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double num_or_nan(const Json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "'");
    }
    if (used != tok.size()) throw ConfigError("bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

void expect_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto* a : allowed) ok |= key == a;
    if (!ok) throw ConfigError("unknown field '" + key + "' in " + where);
  }
}

SignalCdf parse_cdf(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon), arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "uniform" && arg.empty()) return SignalCdf::uniform();
    if (kind == "power") {
      auto v = split_numbers(arg, ',');
      if (v.size() == 1) return SignalCdf::power(v[0]);
    }
    if (kind == "kink") {
      auto v = split_numbers(arg, ',');
      if (v.size() == 2) return SignalCdf::single_kink(v[0], v[1]);
    }
    if (kind == "piecewise") {
      std::vector<std::pair<double, double>> knots;
      std::stringstream ss(arg);
      std::string pt;
      while (std::getline(ss, pt, ';')) {
        auto v = split_numbers(pt, ',');
        if (v.size() != 2) throw ConfigError("piecewise knot needs x,y: '" + pt + "'");
        knots.push_back({v[0], v[1]});
      }
      return SignalCdf::piecewise(std::move(knots));
    }
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("invalid CDF '" + text + "': " + ex.what());
  }
  throw ConfigError("cannot parse CDF '" + text + "'");
}

void to_json(Json& j, const SignalCdf& f) {
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Uniform>) j = {{"kind", "uniform"}};
        else if constexpr (std::is_same_v<T, SingleKink>) j = {{"kind", "kink"}, {"x", s.x}, {"y", s.y}};
        else if constexpr (std::is_same_v<T, Power>) j = {{"kind", "power"}, {"alpha", s.alpha}};
        else {
          Json knots = Json::array();
          for (auto& [x, y] : s.knots) knots.push_back({x, y});
          j = {{"kind", "piecewise"}, {"knots", knots}};
        }
      },
      f.spec());
}

void from_json(const Json& j, SignalCdf& f) {
  if (j.is_string()) {
    f = parse_cdf(j.get<std::string>());
    return;
  }
  auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "uniform") {
      expect_keys(j, {"kind"}, "cdf");
      f = SignalCdf::uniform();
    } else if (kind == "kink") {
      expect_keys(j, {"kind", "x", "y"}, "cdf");
      f = SignalCdf::single_kink(j.at("x"), j.at("y"));
    } else if (kind == "power") {
      expect_keys(j, {"kind", "alpha"}, "cdf");
      f = SignalCdf::power(j.at("alpha"));
    } else if (kind == "piecewise") {
      expect_keys(j, {"kind", "knots"}, "cdf");
      std::vector<std::pair<double, double>> knots;
      for (auto& k : j.at("knots")) knots.push_back({k.at(0), k.at(1)});
      f = SignalCdf::piecewise(std::move(knots));
    } else {
      throw ConfigError("unknown cdf kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("invalid cdf: ") + ex.what());
  }
}

void to_json(Json& j, const WealthDist& w) {
  j = Json::array();
  for (auto& a : w.atoms()) j.push_back({{"omega", a.omega}, {"rho", a.rho}});
}

void from_json(const Json& j, WealthDist& w) {
  std::vector<WealthAtom> atoms;
  for (auto& a : j) {
    expect_keys(a, {"omega", "rho"}, "wealth atom");
    atoms.push_back({a.at("omega"), a.at("rho")});
  }
  try {
    w = WealthDist(std::move(atoms));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("invalid wealth distribution: ") + ex.what());
  }
}

void to_json(Json& j, const EconomyParams& p) {
  j = {{"m", p.m}, {"q", p.q}, {"delta_q", p.delta_q}, {"g", p.g}, {"e", p.e}, {"pi", p.pi},
       {"wealth", p.wealth}, {"cdf", p.cdf}};
}

void from_json(const Json& j, EconomyParams& p) {
  expect_keys(j, {"m", "q", "delta_q", "g", "e", "pi", "wealth", "cdf"}, "economy");
  EconomyParams out = example_params();
  if (j.contains("m")) out.m = j.at("m");
  if (j.contains("q")) out.q = j.at("q");
  if (j.contains("delta_q")) out.delta_q = j.at("delta_q");
  if (j.contains("g")) out.g = j.at("g");
  if (j.contains("e")) out.e = j.at("e");
  if (j.contains("pi")) out.pi = j.at("pi");
  if (j.contains("wealth")) out.wealth = j.at("wealth").get<WealthDist>();
  if (j.contains("cdf")) out.cdf = j.at("cdf").get<SignalCdf>();
  try {
    out.validate_structure();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("invalid economy: ") + ex.what());
  }
  p = out;
}

void to_json(Json& j, const Cutoff& c) { j = {{"omega", c.omega}, {"s", c.s}}; }
void from_json(const Json& j, Cutoff& c) {
  c.omega = j.at("omega");
  c.s = j.at("s");
}

void to_json(Json& j, const Equilibrium& e) {
  j = {{"mechanism", to_string(e.mech)},
       {"params", e.params},
       {"r", e.r},
       {"p", e.p},
       {"p_over_r", e.p_over_r()},
       {"d", e.d},
       {"e_s", e.e_s},
       {"intercept", e.intercept},
       {"cutoffs", e.cutoffs},
       {"type_rejection", e.type_rejection},
       {"diagnostics",
        {{"iterations", e.diag.iterations}, {"residual", e.diag.residual}, {"closed_form", e.diag.closed_form}}}};
}

void from_json(const Json& j, Equilibrium& e) {
  e.mech = parse_mechanism(j.at("mechanism").get<std::string>());
  e.params = j.at("params");
  e.r = j.at("r");
  e.p = j.at("p");
  e.d = j.at("d");
  e.e_s = j.at("e_s");
  e.intercept = j.at("intercept");
  e.cutoffs = j.at("cutoffs").get<std::vector<Cutoff>>();
  e.type_rejection = j.at("type_rejection").get<std::vector<double>>();
  auto& d = j.at("diagnostics");
  e.diag.iterations = d.at("iterations");
  e.diag.residual = d.at("residual");
  e.diag.closed_form = d.at("closed_form");
}

Location parse_location(const std::string& s) {
  for (auto l : {Location::N0, Location::N1, Location::C0, Location::C1})
    if (to_string(l) == s) return l;
  throw ConfigError("unknown location '" + s + "'");
}

void to_json(Json& j, const TypeMass& m) { j = {{"omega", m.omega}, {"mass", m.mass}}; }
void from_json(const Json& j, TypeMass& m) {
  m.omega = j.at("omega");
  m.mass = j.at("mass");
}

void to_json(Json& j, const SegregationProfile& s) {
  j = {{"location", to_string(s.location)}, {"masses", s.masses},     {"avg_wealth", s.avg_wealth},
       {"poor_share", opt(s.poor_share)},   {"deviation", s.deviation}};
}

void from_json(const Json& j, SegregationProfile& s) {
  s.location = parse_location(j.at("location"));
  s.masses = j.at("masses").get<std::vector<TypeMass>>();
  s.avg_wealth = j.at("avg_wealth");
  s.poor_share = opt_from(j, "poor_share");
  s.deviation = j.at("deviation");
}

void to_json(Json& j, const ValidationReport& r) {
  j = {{"passed", r.passed()}, {"items", Json::array()}};
  for (auto& i : r.items)
    j["items"].push_back({{"name", i.name}, {"passed", i.passed}, {"boundary", i.boundary}, {"detail", i.detail}});
}

void to_json(Json& j, const TheoremReport& r) {
  j = {{"passed", r.passed()}, {"applicable", r.applicable_count()}, {"checks", Json::array()}};
  for (auto& c : r.checks)
    j["checks"].push_back(
        {{"name", c.name}, {"applicable", c.applicable}, {"passed", c.passed}, {"detail", c.detail}});
}

void to_json(Json& j, const MatchQualityRow& r) {
  j = {{"scenario", r.label},
       {"poor_share_c1", r.poor_share_c1},
       {"poor_quality", r.poor_quality},
       {"rich_quality", r.rich_quality},
       {"total_quality", r.total_quality},
       {"poor_share_of_quality", r.poor_share_of_quality}};
}

void from_json(const Json& j, MatchQualityRow& r) {
  r.label = j.at("scenario");
  r.scenario = Scenario::N;
  for (auto s : kAllScenarios)
    if (to_string(s) == r.label) r.scenario = s;
  r.poor_share_c1 = j.at("poor_share_c1");
  r.poor_quality = j.at("poor_quality");
  r.rich_quality = j.at("rich_quality");
  r.total_quality = j.at("total_quality");
  r.poor_share_of_quality = j.at("poor_share_of_quality");
}

void to_json(Json& j, const PolicyRow& r) {
  j = {{"label", r.label}, {"poor_share_n1", r.poor_share_n1}, {"poor_share_c1", r.poor_share_c1}};
}
void from_json(const Json& j, PolicyRow& r) {
  r.label = j.at("label");
  r.poor_share_n1 = j.at("poor_share_n1");
  r.poor_share_c1 = j.at("poor_share_c1");
}

void to_json(Json& j, const TableCell& c) {
  j = {{"row", c.row},         {"column", c.column},       {"computed", c.computed},
       {"rounded", c.rounded}, {"reference", c.reference}, {"match", c.match}};
}
void from_json(const Json& j, TableCell& c) {
  c.row = j.at("row");
  c.column = j.at("column");
  c.computed = j.at("computed");
  c.rounded = j.at("rounded");
  c.reference = j.at("reference");
  c.match = j.at("match");
}

void to_json(Json& j, const KinkRecord& r) {
  j = {{"x", r.x},
       {"y", r.y},
       {"feasible", r.feasible},
       {"share_n", r.share_n},
       {"share_da", r.share_da},
       {"diff", r.diff},
       {"da_less_segregated", r.da_less_segregated},
       {"expansion_rate", num_or_null(r.expansion_rate)},
       {"threshold", r.threshold},
       {"reason", r.reason}};
}

void from_json(const Json& j, KinkRecord& r) {
  r.x = j.at("x");
  r.y = j.at("y");
  r.feasible = j.at("feasible");
  r.share_n = j.at("share_n");
  r.share_da = j.at("share_da");
  r.diff = j.at("diff");
  r.da_less_segregated = j.at("da_less_segregated");
  r.expansion_rate = num_or_nan(j.at("expansion_rate"));
  r.threshold = j.at("threshold");
  r.reason = j.at("reason");
}

void to_json(Json& j, const CubeCell& c) {
  j = {{"rho_p", c.rho_p},           {"q", c.q},   {"pi", c.pi}, {"n_feasible", c.n_feasible},
       {"n_da_less", c.n_da_less}, {"pct", c.pct}};
}
void from_json(const Json& j, CubeCell& c) {
  c.rho_p = j.at("rho_p");
  c.q = j.at("q");
  c.pi = j.at("pi");
  c.n_feasible = j.at("n_feasible");
  c.n_da_less = j.at("n_da_less");
  c.pct = j.at("pct");
}

void to_json(Json& j, const Estimate& e) {
  j = {{"mean", num_or_null(e.mean)}, {"se", num_or_null(e.se)}, {"target", opt(e.target)}, {"z", opt(e.z)}};
}
void from_json(const Json& j, Estimate& e) {
  e.mean = num_or_nan(j.at("mean"));
  e.se = num_or_nan(j.at("se"));
  e.target = opt_from(j, "target");
  e.z = opt_from(j, "z");
}

void to_json(Json& j, const MassEstimate& m) {
  j = {{"location", to_string(m.location)}, {"omega", m.omega}, {"estimate", m.value}};
}
void from_json(const Json& j, MassEstimate& m) {
  m.location = parse_location(j.at("location"));
  m.omega = j.at("omega");
  m.value = j.at("estimate");
}

void to_json(Json& j, const SimResult& r) {
  j = {{"mechanism", to_string(r.mech)},
       {"n_agents", r.n_agents},
       {"seed", r.seed},
       {"replications", r.draws.size()},
       {"rejection", r.rejection},
       {"masses", r.masses},
       {"quality", r.quality},
       {"quality_total", r.quality_total},
       {"poor_share_n1", r.poor_share_n1},
       {"poor_share_c1", r.poor_share_c1}};
}

void from_json(const Json& j, SimResult& r) {
  r.mech = parse_mechanism(j.at("mechanism").get<std::string>());
  r.n_agents = j.at("n_agents");
  r.seed = j.at("seed");
  r.rejection = j.at("rejection");
  r.masses = j.at("masses").get<std::vector<MassEstimate>>();
  r.quality = j.at("quality").get<std::vector<Estimate>>();
  r.quality_total = j.at("quality_total");
  r.poor_share_n1 = j.at("poor_share_n1");
  r.poor_share_c1 = j.at("poor_share_c1");
  r.draws.clear();
}

}  // namespace segsolve
