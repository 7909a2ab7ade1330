#pragma once

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "segsolve/benchmarks.hpp"
#include "segsolve/equilibrium.hpp"
#include "segsolve/mcsim.hpp"
#include "segsolve/segregation.hpp"
#include "segsolve/sweep.hpp"

namespace segsolve {

using Json = nlohmann::ordered_json;

// Thrown on malformed or unknown configuration content.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejects keys outside `allowed`; `where` names the object in messages.
void expect_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where);

// CDF strings: uniform | power:A | kink:X,Y | piecewise:x,y;x,y;...
SignalCdf parse_cdf(const std::string& text);

void to_json(Json& j, const SignalCdf& f);
void from_json(const Json& j, SignalCdf& f);
void to_json(Json& j, const WealthDist& w);
void from_json(const Json& j, WealthDist& w);
void to_json(Json& j, const EconomyParams& p);
void from_json(const Json& j, EconomyParams& p);

void to_json(Json& j, const Cutoff& c);
void from_json(const Json& j, Cutoff& c);
void to_json(Json& j, const Equilibrium& e);
void from_json(const Json& j, Equilibrium& e);

void to_json(Json& j, const TypeMass& m);
void from_json(const Json& j, TypeMass& m);
void to_json(Json& j, const SegregationProfile& s);
void from_json(const Json& j, SegregationProfile& s);

void to_json(Json& j, const ValidationReport& r);
void to_json(Json& j, const TheoremReport& r);

void to_json(Json& j, const MatchQualityRow& r);
void from_json(const Json& j, MatchQualityRow& r);
void to_json(Json& j, const PolicyRow& r);
void from_json(const Json& j, PolicyRow& r);
void to_json(Json& j, const TableCell& c);
void from_json(const Json& j, TableCell& c);

void to_json(Json& j, const KinkRecord& r);
void from_json(const Json& j, KinkRecord& r);
void to_json(Json& j, const CubeCell& c);
void from_json(const Json& j, CubeCell& c);

void to_json(Json& j, const Estimate& e);
void from_json(const Json& j, Estimate& e);
void to_json(Json& j, const MassEstimate& m);
void from_json(const Json& j, MassEstimate& m);
void to_json(Json& j, const SimResult& r);
void from_json(const Json& j, SimResult& r);

Location parse_location(const std::string& s);

}  // namespace segsolve
