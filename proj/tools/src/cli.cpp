#include "segsolve_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "segsolve/parallel.hpp"

namespace segsolve::cli {
namespace {

namespace fs = std::filesystem;

struct AssumptionFailure : std::runtime_error {
  AssumptionFailure(const std::string& what, Json report) : std::runtime_error(what), report(std::move(report)) {}
  Json report;
};

struct Failure {
  int code;
  Json body;
};

std::string fmt(double v) { return format_number(v); }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "' in list '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

void require_assumptions(const EconomyParams& p, Mechanism m) {
  auto a1 = check_assumption1(p);
  if (!a1.passed()) throw AssumptionFailure("assumption 1 fails: " + a1.summary(), Json(a1));
  if (!is_core(m)) return;
  auto a2 = check_assumption2(p, m);
  if (!a2.passed())
    throw AssumptionFailure("assumption 2 fails for " + std::string(to_string(m)) + ": " + a2.summary(), Json(a2));
}

Equilibrium equilibrium_for(const EconomyParams& p, Mechanism m) {
  require_assumptions(p, m);
  if (is_core(m)) return solve(p, m);
  if (m == Mechanism::DA_L || m == Mechanism::DA_WL) {
    if (!is_policy_profile(p)) throw ConfigError(std::string(to_string(m)) + " needs the two-type policy profile");
    return solve_policy(p, m);
  }
  throw ConfigError(std::string(to_string(m)) + " has no equilibrium solve");
}

// ---- solve ---------------------------------------------------------------

struct SolveEntry {
  Mechanism mech;
  std::optional<Equilibrium> eq;
  std::optional<BenchmarkOutcome> bench;
};

std::vector<SolveEntry> solve_all(const RunConfig& cfg) {
  std::vector<SolveEntry> out;
  for (auto m : cfg.mechs) {
    SolveEntry e{m, std::nullopt, std::nullopt};
    if (m == Mechanism::NoPriority || m == Mechanism::Auction) {
      ExampleEconomy ex(cfg.economy);
      e.bench = m == Mechanism::NoPriority ? no_priority_outcome(ex) : auction_outcome(ex);
    } else {
      e.eq = equilibrium_for(cfg.economy, m);
    }
    out.push_back(std::move(e));
  }
  return out;
}

Json solve_json(const RunConfig& cfg, const std::vector<SolveEntry>& entries) {
  Json res = Json::array();
  for (auto& e : entries) {
    Json j = {{"mechanism", to_string(e.mech)}};
    if (e.eq) {
      auto nb = neighborhood_profile(*e.eq);
      j["equilibrium"] = *e.eq;
      j["neighborhood"] = {{"n1", nb.n1}, {"n0", nb.n0}};
      j["school"] = school_profile(*e.eq);
    } else {
      j["school"] = e.bench->school;
      j["match_quality"] = e.bench->row;
      if (e.mech == Mechanism::Auction) j["seat_price"] = e.bench->price;
      else j["admit_probability"] = e.bench->admit_probability;
    }
    res.push_back(j);
  }
  return {{"economy", cfg.economy}, {"results", res}};
}

void solve_csv(std::ostream& os, const std::vector<SolveEntry>& entries) {
  os << "mechanism,p,r,p_over_r,d,e_s,omega,s,n1_mass,c1_mass\n";
  for (auto& e : entries) {
    if (!e.eq) continue;
    auto nb = neighborhood_profile(*e.eq);
    auto sc = school_profile(*e.eq);
    for (std::size_t i = 0; i < e.eq->cutoffs.size(); ++i)
      os << to_string(e.mech) << ',' << fmt(e.eq->p) << ',' << fmt(e.eq->r) << ',' << fmt(e.eq->p_over_r()) << ','
         << fmt(e.eq->d) << ',' << fmt(e.eq->e_s) << ',' << fmt(e.eq->cutoffs[i].omega) << ','
         << fmt(e.eq->cutoffs[i].s) << ',' << fmt(nb.n1.masses[i].mass) << ',' << fmt(sc.masses[i].mass) << '\n';
  }
}

void solve_text(std::ostream& os, const std::vector<SolveEntry>& entries) {
  for (auto& e : entries) {
    os << to_string(e.mech) << '\n';
    if (e.eq) {
      auto nb = neighborhood_profile(*e.eq);
      auto sc = school_profile(*e.eq);
      os << "  p=" << fmt(e.eq->p) << "  r=" << fmt(e.eq->r) << "  p/r=" << fmt(e.eq->p_over_r())
         << "  d=" << fmt(e.eq->d) << "  E[s]=" << fmt(e.eq->e_s) << '\n';
      for (auto& c : e.eq->cutoffs) os << "  cutoff omega=" << fmt(c.omega) << "  s=" << fmt(c.s) << '\n';
      os << "  n1 avg wealth=" << fmt(nb.n1.avg_wealth) << "  c1 avg wealth=" << fmt(sc.avg_wealth) << '\n';
      if (nb.n1.poor_share)
        os << "  poor share n1=" << fmt(100 * *nb.n1.poor_share) << "%  c1=" << fmt(100 * *sc.poor_share) << "%\n";
    } else {
      os << "  c1 avg wealth=" << fmt(e.bench->school.avg_wealth) << '\n';
    }
  }
}

// ---- compare ---------------------------------------------------------------

Json compare_json(const RunConfig& cfg, const std::vector<SolveEntry>& entries) {
  Json pairs = Json::array();
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t k = i + 1; k < entries.size(); ++k) {
      auto& a = entries[i];
      auto& b = entries[k];
      Json j = {{"a", to_string(a.mech)}, {"b", to_string(b.mech)}};
      if (a.eq && b.eq) {
        auto na = neighborhood_profile(*a.eq), nbp = neighborhood_profile(*b.eq);
        SegregationProfile la[] = {na.n1, na.n0}, lb[] = {nbp.n1, nbp.n0};
        j["neighborhood"] = to_string(compare(std::span<const SegregationProfile>(la), std::span<const SegregationProfile>(lb)));
        j["dispersion"] = a.eq->d < b.eq->d ? "smaller" : a.eq->d > b.eq->d ? "greater" : "equal";
        j["price"] = a.eq->p < b.eq->p ? "smaller" : a.eq->p > b.eq->p ? "greater" : "equal";
        auto sa = school_profile(*a.eq), sb = school_profile(*b.eq);
        j["school"] = to_string(compare(sa, sb));
      } else {
        auto sa = a.eq ? school_profile(*a.eq) : a.bench->school;
        auto sb = b.eq ? school_profile(*b.eq) : b.bench->school;
        j["school"] = to_string(compare(sa, sb));
      }
      pairs.push_back(j);
    }
  return {{"economy", cfg.economy}, {"mechanisms", solve_json(cfg, entries)["results"]}, {"pairs", pairs}};
}

// ---- tables ----------------------------------------------------------------

struct Tables {
  std::vector<MatchQualityRow> t1;
  std::vector<PolicyRow> t2;
  std::vector<TableCell> c1, c2;
  bool all_match() const {
    for (auto* v : {&c1, &c2})
      for (auto& c : *v)
        if (!c.match) return false;
    return true;
  }
};

Tables build_tables(const RunConfig& cfg) {
  ExampleEconomy ex(cfg.economy);
  Tables t;
  t.t1 = table1(ex);
  if (cfg.auction_price) {
    for (auto& r : t.t1)
      if (r.scenario == Scenario::Auction) r = auction_outcome_at(*cfg.auction_price, ex).row;
  }
  t.t2 = policy_table(ex);
  t.c1 = compare_table1(t.t1);
  t.c2 = compare_table2(t.t2);
  return t;
}

void tables_csv(std::ostream& os, const Tables& t) {
  os << "table,row,column,computed,rounded,reference,match\n";
  for (auto [name, cells] : {std::pair{"match_quality", &t.c1}, std::pair{"policy", &t.c2}})
    for (auto& c : *cells)
      os << name << ",\"" << c.row << "\",\"" << c.column << "\"," << fmt(c.computed) << ',' << c.rounded << ','
         << c.reference << ',' << (c.match ? 1 : 0) << '\n';
}

void tables_text(std::ostream& os, const Tables& t) {
  for (auto [name, cells] : {std::pair{"match quality", &t.c1}, std::pair{"policies", &t.c2}}) {
    os << name << '\n';
    for (auto& c : *cells)
      os << "  " << std::left << std::setw(20) << c.row << std::setw(28) << c.column << std::right << std::setw(4)
         << c.rounded << " (ref " << std::setw(2) << c.reference << ")" << (c.match ? "" : "  MISMATCH") << '\n';
  }
}

// ---- sweeps ----------------------------------------------------------------

void kink_text(std::ostream& os, const KinkSweepResult& r) {
  os << "step=" << fmt(r.step) << " feasibility=" << to_string(r.feasibility) << " feasible=" << r.feasible_count()
     << " da_less_segregated=" << r.da_less_count() << '\n';
  for (auto& k : r.records)
    if (k.feasible && k.da_less_segregated)
      os << "  x=" << fmt(k.x) << " y=" << fmt(k.y) << " diff=" << fmt(k.diff) << '\n';
}

Json kink_json(const KinkSweepResult& r) {
  return {{"step", r.step},
          {"feasibility", to_string(r.feasibility)},
          {"feasible", r.feasible_count()},
          {"da_less_segregated", r.da_less_count()},
          {"records", r.records}};
}

Json cube_json(const CubeSweepResult& r) {
  return {{"step", r.step}, {"wealth", r.wealth.describe()}, {"feasibility", to_string(r.feasibility)},
          {"cells", r.cells}};
}

void cube_text(std::ostream& os, const CubeSweepResult& r) {
  os << "step=" << fmt(r.step) << " wealth=" << r.wealth.describe() << " feasibility=" << to_string(r.feasibility)
     << '\n';
  for (double pi : r.pi_list) {
    os << "pi=" << fmt(pi) << " (rows rho_p, columns q)\n      ";
    for (double q : r.q_list) os << std::setw(6) << fmt(q);
    os << '\n';
    for (double rho : r.rho_list) {
      os << std::setw(6) << fmt(rho);
      for (double q : r.q_list)
        for (auto& c : r.cells)
          if (c.rho_p == rho && c.q == q && c.pi == pi) os << std::setw(6) << std::lround(c.pct);
      os << '\n';
    }
  }
}

// ---- simulate --------------------------------------------------------------

SimResult simulate_one(const RunConfig& cfg, Mechanism m) {
  SimConfig sc;
  sc.params = cfg.economy;
  sc.mech = m;
  sc.n_agents = cfg.agents;
  sc.replications = cfg.reps;
  sc.seed = cfg.seed;
  sc.threads = cfg.threads;
  sc.housing = cfg.housing;
  std::optional<Equilibrium> eq;
  if (m == Mechanism::NoPriority || m == Mechanism::Auction) {
    ExampleEconomy ex(cfg.economy);
    sc.cutoffs = equilibrium_for(cfg.economy, Mechanism::N).cutoffs;
  } else {
    eq = equilibrium_for(cfg.economy, m);
    sc.cutoffs = eq->cutoffs;
  }
  sc.validate();
  auto res = estimate(sc);
  if (eq && is_core(m)) score(res, targets_from(*eq));
  return res;
}

void sim_csv(std::ostream& os, const std::vector<SimResult>& rs) {
  os << "mechanism,quantity,location,omega,mean,se,target,z\n";
  auto row = [&](const SimResult& r, const std::string& what, const std::string& loc, const std::string& omega,
                 const Estimate& e) {
    os << to_string(r.mech) << ',' << what << ',' << loc << ',' << omega << ',' << fmt(e.mean) << ',' << fmt(e.se)
       << ',' << (e.target ? fmt(*e.target) : "") << ',' << (e.z ? fmt(*e.z) : "") << '\n';
  };
  for (auto& r : rs) {
    row(r, "rejection", "", "", r.rejection);
    for (auto& m : r.masses) row(r, "mass", std::string(to_string(m.location)), fmt(m.omega), m.value);
    for (std::size_t i = 0; i < r.quality.size(); ++i)
      row(r, "quality", "C1", fmt(r.masses.empty() ? 0.0 : r.masses[i].omega), r.quality[i]);
    row(r, "quality_total", "C1", "", r.quality_total);
  }
}

void sim_text(std::ostream& os, const std::vector<SimResult>& rs) {
  auto line = [&](const std::string& what, const Estimate& e) {
    os << "  " << std::left << std::setw(16) << what << std::right << fmt(e.mean) << " +- " << fmt(e.se);
    if (e.target) os << "  target " << fmt(*e.target) << "  z " << fmt(*e.z);
    os << '\n';
  };
  for (auto& r : rs) {
    os << to_string(r.mech) << "  n=" << r.n_agents << "  replications=" << r.draws.size() << '\n';
    line("rejection", r.rejection);
    for (auto& m : r.masses) line(std::string(to_string(m.location)) + "@" + fmt(m.omega), m.value);
    line("quality total", r.quality_total);
  }
}

// ---- check -----------------------------------------------------------------

Json check_json(const RunConfig& cfg, bool& ok) {
  const auto& p = cfg.economy;
  auto a1 = check_assumption1(p);
  if (!a1.passed()) throw AssumptionFailure("assumption 1 fails: " + a1.summary(), Json(a1));
  Json a2 = Json::object();
  for (auto m : {Mechanism::N, Mechanism::DA, Mechanism::TTC}) {
    auto r = check_assumption2(p, m);
    if (!r.passed())
      throw AssumptionFailure("assumption 2 fails for " + std::string(to_string(m)) + ": " + r.summary(), Json(r));
    a2[std::string(to_string(m))] = r;
  }
  auto th = check_theorems(p);
  Json lemma = Json::object();
  ok = th.passed();
  for (auto m : {Mechanism::N, Mechanism::DA, Mechanism::TTC}) {
    auto l = verify_lemma1(p, m);
    ok = ok && l.passed();
    lemma[std::string(to_string(m))] = {{"passed", l.passed()}, {"flat_points", l.flat_points}, {"report", l.report}};
  }
  return {{"economy", p}, {"passed", ok}, {"assumption1", a1}, {"assumption2", a2}, {"theorems", th},
          {"lemma1", lemma}};
}

void check_text(std::ostream& os, const Json& j) {
  os << "assumption 1: " << (j["assumption1"]["passed"].get<bool>() ? "pass" : "FAIL") << '\n';
  for (auto& [m, r] : j["assumption2"].items())
    os << "assumption 2 (" << m << "): " << (r["passed"].get<bool>() ? "pass" : "FAIL") << '\n';
  for (auto& c : j["theorems"]["checks"]) {
    std::string state = !c["applicable"].get<bool>() ? "n/a " : c["passed"].get<bool>() ? "pass" : "FAIL";
    os << state << "  " << c["name"].get<std::string>() << "  " << c["detail"].get<std::string>() << '\n';
  }
  for (auto& [m, r] : j["lemma1"].items())
    os << "monotone gain (" << m << "): " << (r["passed"].get<bool>() ? "pass" : "FAIL") << '\n';
  os << (j["passed"].get<bool>() ? "all checks pass" : "some checks FAIL") << '\n';
}

// ---- output ----------------------------------------------------------------

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  fs::path dir = fs::path(path).parent_path();
  if (dir.empty()) dir = ".";
  if (!fs::is_directory(dir)) throw ConfigError("output directory '" + dir.string() + "' does not exist");
}

void emit_error(std::ostream& err, int code, const std::string& kind, const std::string& message,
                const Json& extra = nullptr) {
  Json j = {{"error", kind}, {"exit_code", code}, {"message", message}};
  if (!extra.is_null()) j["report"] = extra;
  err << j.dump() << '\n';
}

int dispatch(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const std::string& c = cfg.command;
  auto format = [&](Format def) { return cfg.format.value_or(def); };
  if (c == "solve" || c == "compare") {
    auto entries = solve_all(cfg);
    if (c == "compare") {
      if (format(Format::Json) == Format::Csv) throw ConfigError("compare has no csv output");
      auto j = compare_json(cfg, entries);
      if (format(Format::Json) == Format::Json) os << j.dump(2) << '\n';
      else
        for (auto& pr : j["pairs"]) {
          os << pr["a"].get<std::string>() << " vs " << pr["b"].get<std::string>();
          for (auto* k : {"dispersion", "price", "neighborhood", "school"})
            if (pr.contains(k)) os << "  " << k << "=" << pr[k].get<std::string>();
          os << '\n';
        }
      return kOk;
    }
    switch (format(Format::Json)) {
      case Format::Json: os << solve_json(cfg, entries).dump(2) << '\n'; break;
      case Format::Csv: solve_csv(os, entries); break;
      case Format::Text: solve_text(os, entries); break;
    }
    return kOk;
  }
  if (c == "tables") {
    auto t = build_tables(cfg);
    switch (format(Format::Json)) {
      case Format::Json: {
        Json j = {{"match_quality", {{"rows", t.t1}, {"cells", t.c1}}},
                  {"policies", {{"rows", t.t2}, {"cells", t.c2}}},
                  {"all_match", t.all_match()}};
        os << j.dump(2) << '\n';
        break;
      }
      case Format::Csv: tables_csv(os, t); break;
      case Format::Text: tables_text(os, t); break;
    }
    if (!t.all_match()) {
      emit_error(err, kTableMismatch, "table_mismatch", "computed tables differ from the reference values");
      return kTableMismatch;
    }
    return kOk;
  }
  if (c == "sweep-kink") {
    auto r = kink_sweep(cfg.economy, cfg.step, resolve_threads(cfg.threads), cfg.feasibility);
    switch (format(Format::Csv)) {
      case Format::Json: os << kink_json(r).dump(2) << '\n'; break;
      case Format::Csv: write_kink_csv(os, r); break;
      case Format::Text: kink_text(os, r); break;
    }
    return kOk;
  }
  if (c == "sweep-cube") {
    auto r = cube_sweep(cfg.rho_list, cfg.q_list, cfg.pi_list, cfg.step, cfg.threads, cfg.wealth, cfg.feasibility);
    switch (format(Format::Csv)) {
      case Format::Json: os << cube_json(r).dump(2) << '\n'; break;
      case Format::Csv: write_cube_csv(os, r); break;
      case Format::Text: cube_text(os, r); break;
    }
    return kOk;
  }
  if (c == "simulate") {
    std::vector<SimResult> rs;
    for (auto m : cfg.mechs) rs.push_back(simulate_one(cfg, m));
    switch (format(Format::Json)) {
      case Format::Json: os << Json{{"economy", cfg.economy}, {"results", rs}}.dump(2) << '\n'; break;
      case Format::Csv: sim_csv(os, rs); break;
      case Format::Text: sim_text(os, rs); break;
    }
    return kOk;
  }
  if (c == "check") {
    bool ok = false;
    auto j = check_json(cfg, ok);
    if (format(Format::Json) == Format::Csv) throw ConfigError("check has no csv output");
    if (format(Format::Json) == Format::Json) os << j.dump(2) << '\n';
    else check_text(os, j);
    if (!ok) {
      emit_error(err, kTheoremFailure, "theorem_failure", "some applicable checks failed");
      return kTheoremFailure;
    }
    return kOk;
  }
  throw ConfigError("unknown command '" + c + "'");
}

}  // namespace

CubeWealth parse_wealth_rule(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("wealth rule needs kind:value, got '" + text + "'");
  auto kind = text.substr(0, colon);
  auto v = parse_list(text.substr(colon + 1));
  if (v.size() != 1) throw ConfigError("wealth rule takes one value");
  if (kind == "fixed-poor") return CubeWealth::fixed_poor(v[0]);
  if (kind == "fixed-spread") return CubeWealth::fixed_spread(v[0]);
  throw ConfigError("unknown wealth rule '" + kind + "'");
}

Format parse_format(const std::string& text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  if (text == "text") return Format::Text;
  throw ConfigError("unknown format '" + text + "'");
}

std::vector<Mechanism> parse_mech_list(const std::string& text) {
  std::vector<Mechanism> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(parse_mechanism(tok));
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
  }
  if (out.empty()) throw ConfigError("empty mechanism list");
  return out;
}

Json load_json_source(const std::string& text) {
  try {
    auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '{') return Json::parse(text);
    std::ifstream in(text);
    if (!in) throw ConfigError("cannot open '" + text + "'");
    return Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw ConfigError(std::string("malformed JSON: ") + ex.what());
  }
}

void apply_config(const Json& j, RunConfig& cfg) {
  expect_keys(j, {"command", "economy", "mech", "output", "seed", "threads", "sweep", "simulate", "tables"},
              "run config");
  try {
    if (j.contains("command")) {
      auto c = j.at("command").get<std::string>();
      if (!cfg.command.empty() && c != cfg.command)
        throw ConfigError("config command '" + c + "' differs from '" + cfg.command + "'");
      cfg.command = c;
    }
    if (j.contains("economy")) {
      auto& e = j.at("economy");
      cfg.economy = (e.is_string() ? load_json_source(e.get<std::string>()) : e).get<EconomyParams>();
      cfg.example = false;
    }
    if (j.contains("mech")) {
      cfg.mechs.clear();
      for (auto& m : j.at("mech")) cfg.mechs.push_back(parse_mechanism(m.get<std::string>()));
    }
    if (j.contains("output")) {
      auto& o = j.at("output");
      expect_keys(o, {"path", "format"}, "output");
      if (o.contains("path")) cfg.output = o.at("path");
      if (o.contains("format")) cfg.format = parse_format(o.at("format"));
    }
    if (j.contains("seed")) cfg.seed = j.at("seed");
    if (j.contains("threads")) cfg.threads = j.at("threads");
    if (j.contains("sweep")) {
      auto& s = j.at("sweep");
      expect_keys(s, {"step", "feasibility", "rho", "q", "pi", "wealth"}, "sweep");
      if (s.contains("step")) cfg.step = s.at("step");
      if (s.contains("feasibility")) cfg.feasibility = parse_feasibility(s.at("feasibility").get<std::string>());
      if (s.contains("rho")) cfg.rho_list = s.at("rho").get<std::vector<double>>();
      if (s.contains("q")) cfg.q_list = s.at("q").get<std::vector<double>>();
      if (s.contains("pi")) cfg.pi_list = s.at("pi").get<std::vector<double>>();
      if (s.contains("wealth")) cfg.wealth = parse_wealth_rule(s.at("wealth"));
    }
    if (j.contains("simulate")) {
      auto& s = j.at("simulate");
      expect_keys(s, {"agents", "reps", "housing"}, "simulate");
      if (s.contains("agents")) cfg.agents = s.at("agents");
      if (s.contains("reps")) cfg.reps = s.at("reps");
      if (s.contains("housing")) {
        auto h = s.at("housing").get<std::string>();
        if (h != "clearing" && h != "lottery") throw ConfigError("unknown housing rule '" + h + "'");
        cfg.housing = h == "lottery" ? HousingRule::Lottery : HousingRule::Clearing;
      }
    }
    if (j.contains("tables")) {
      auto& t = j.at("tables");
      expect_keys(t, {"auction_price"}, "tables");
      if (t.contains("auction_price")) cfg.auction_price = t.at("auction_price").get<double>();
    }
  } catch (const Json::exception& ex) {
    throw ConfigError(std::string("bad run config: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_output_path(cfg.output);
    if (cfg.output.empty()) return dispatch(cfg, out, err);
    std::ostringstream buf;
    int code = dispatch(cfg, buf, err);
    std::ofstream file(cfg.output);
    if (!(file << buf.str())) throw ConfigError("cannot write '" + cfg.output + "'");
    return code;
  } catch (const ConfigError& ex) {
    emit_error(err, kConfigError, "config", ex.what());
    return kConfigError;
  } catch (const AssumptionFailure& ex) {
    emit_error(err, kAssumptionViolation, "assumption", ex.what(), ex.report);
    return kAssumptionViolation;
  } catch (const SolveError& ex) {
    emit_error(err, kSolverFailure, "solver", ex.what());
    return kSolverFailure;
  } catch (const std::domain_error& ex) {
    emit_error(err, kSolverFailure, "solver", ex.what());
    return kSolverFailure;
  } catch (const std::invalid_argument& ex) {
    emit_error(err, kConfigError, "config", ex.what());
    return kConfigError;
  } catch (const Json::exception& ex) {
    emit_error(err, kConfigError, "config", ex.what());
    return kConfigError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibrium solver for housing and school choice"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string economy, config, cdf, mech, format, output, wealth, feasibility, housing, rho, q, pi;
  bool example = false;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> step, auction_price;
  std::optional<std::size_t> agents, reps;

  app.add_flag("--example", example, "use the built-in two-type example economy (default)");
  app.add_option("--economy", economy, "economy as inline JSON or a file path");
  app.add_option("--config", config, "run config JSON file");
  app.add_option("--cdf", cdf, "signal CDF: uniform | power:A | kink:X,Y | piecewise:x,y;x,y;...");
  app.add_option("--format", format, "json | csv | text");
  app.add_option("--output,-o", output, "write data to this file instead of stdout");
  app.add_option("--threads", threads, "worker threads (0: SEGSOLVE_THREADS or hardware)");
  app.add_option("--seed", seed, "random seed");

  struct Sub {
    const char* name;
    const char* help;
  };
  std::vector<CLI::App*> subs;
  for (auto s : {Sub{"solve", "solve equilibria"}, Sub{"compare", "pairwise segregation and price orderings"},
                 Sub{"tables", "match-quality and policy tables against reference values"},
                 Sub{"sweep-kink", "single-kink CDF sweep"}, Sub{"sweep-cube", "parameter cube of kink sweeps"},
                 Sub{"simulate", "finite-market Monte Carlo"}, Sub{"check", "assumption and theorem report"}})
    subs.push_back(app.add_subcommand(s.name, s.help));
  for (auto* s : subs) {
    std::string n = s->get_name();
    if (n == "solve" || n == "compare" || n == "simulate") s->add_option("--mech", mech, "comma-separated mechanisms");
    if (n == "sweep-kink" || n == "sweep-cube") {
      s->add_option("--step", step, "kink grid step");
      s->add_option("--feasibility", feasibility, "interior | assumptions");
    }
    if (n == "sweep-cube") {
      s->add_option("--rho", rho, "poor shares, comma-separated");
      s->add_option("--q", q, "capacities, comma-separated");
      s->add_option("--pi", pi, "shock probabilities, comma-separated");
      s->add_option("--wealth", wealth, "fixed-poor:W | fixed-spread:S");
    }
    if (n == "simulate") {
      s->add_option("--agents", agents, "agents per replication");
      s->add_option("--reps", reps, "replications");
      s->add_option("--housing", housing, "clearing | lottery");
    }
    if (n == "tables") s->add_option("--auction-price", auction_price, "override the auction seat price");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  try {
    for (auto* s : subs)
      if (s->parsed()) cfg.command = s->get_name();
    if (!config.empty()) apply_config(load_json_source(config), cfg);
    if (example && !economy.empty()) throw ConfigError("--example and --economy are exclusive");
    if (example) {
      cfg.economy = example_params();
      cfg.example = true;
    }
    if (!economy.empty()) {
      cfg.economy = load_json_source(economy).get<EconomyParams>();
      cfg.example = false;
    }
    if (!cdf.empty()) {
      cfg.economy.cdf = parse_cdf(cdf);
      cfg.example = false;
    }
    if (!mech.empty()) cfg.mechs = parse_mech_list(mech);
    if (!format.empty()) cfg.format = parse_format(format);
    if (!output.empty()) cfg.output = output;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (step) cfg.step = *step;
    if (!feasibility.empty()) cfg.feasibility = parse_feasibility(feasibility);
    if (!rho.empty()) cfg.rho_list = parse_list(rho);
    if (!q.empty()) cfg.q_list = parse_list(q);
    if (!pi.empty()) cfg.pi_list = parse_list(pi);
    if (!wealth.empty()) cfg.wealth = parse_wealth_rule(wealth);
    if (agents) cfg.agents = *agents;
    if (reps) cfg.reps = *reps;
    if (!housing.empty()) {
      if (housing != "clearing" && housing != "lottery") throw ConfigError("unknown housing rule '" + housing + "'");
      cfg.housing = housing == "lottery" ? HousingRule::Lottery : HousingRule::Clearing;
    }
    if (auction_price) cfg.auction_price = auction_price;
  } catch (const ConfigError& ex) {
    emit_error(err, kConfigError, "config", ex.what());
    return kConfigError;
  } catch (const std::exception& ex) {
    emit_error(err, kConfigError, "config", ex.what());
    return kConfigError;
  }
  return execute(cfg, out, err);
}

}  // namespace segsolve::cli
