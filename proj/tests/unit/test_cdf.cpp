#include <algorithm>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "segsolve/cdf.hpp"

using namespace segsolve;

TEST_SUITE("cdf") {

TEST_CASE("evaluation of each variant") {
  CHECK(SignalCdf::uniform().eval(0.5) == doctest::Approx(0.5));
  CHECK(SignalCdf::power(0.5).eval(0.36) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(SignalCdf::single_kink(0.3, 0.6).eval(0.15) == doctest::Approx(0.3).epsilon(1e-14));
  auto pw = SignalCdf::piecewise({{0, 0}, {0.2, 0.5}, {0.6, 0.9}, {1, 1}});
  CHECK(pw.eval(0.1) == doctest::Approx(0.25));
  CHECK(pw.eval(0.4) == doctest::Approx(0.7));
  CHECK(pw.eval(1.0) == 1.0);
}

TEST_CASE("evaluation outside the unit interval is a domain error") {
  auto f = SignalCdf::uniform();
  CHECK_THROWS_AS(f.eval(-0.01), std::domain_error);
  CHECK_THROWS_AS(f.eval(1.01), std::domain_error);
  CHECK_THROWS_AS(SignalCdf::power(0.5).eval(2.0), std::domain_error);
}

TEST_CASE("inverse") {
  CHECK(SignalCdf::uniform().inverse(0.6) == doctest::Approx(0.6));
  CHECK(SignalCdf::power(0.5).inverse(0.6) == doctest::Approx(0.36).epsilon(1e-14));
  // 0.6 + (x - 0.3) * 0.4 / 0.7 = 0.8
  CHECK(SignalCdf::single_kink(0.3, 0.6).inverse(0.8) == doctest::Approx(0.65).epsilon(1e-14));
  CHECK_THROWS_AS(SignalCdf::uniform().inverse(1.5), std::domain_error);
}

TEST_CASE("flat segment at one is allowed; preimage is the smallest point") {
  auto f = SignalCdf::piecewise({{0, 0}, {0.5, 1}, {1, 1}});
  CHECK(f.eval(0.75) == 1.0);
  CHECK(f.inverse(1.0) == doctest::Approx(0.5));
}

TEST_CASE("validation") {
  CHECK(validate(Uniform{}).passed());
  CHECK_FALSE(validate(SingleKink{0.6, 0.3}).passed());
  CHECK_FALSE(validate(SingleKink{0.0, 0.3}).passed());
  CHECK_FALSE(validate(Power{0.0}).passed());
  CHECK_FALSE(validate(Power{1.5}).passed());
  // slopes 1 then 2: convex
  CHECK_FALSE(validate(PiecewiseLinear{{{0, 0}, {1.0 / 3, 1.0 / 3}, {2.0 / 3, 1}, {1, 1}}}).passed());
  CHECK_FALSE(validate(PiecewiseLinear{{{0, 0}, {0.5, 0.4}, {1, 1}}}).passed());  // below diagonal
  CHECK_FALSE(validate(PiecewiseLinear{{{0.1, 0}, {1, 1}}}).passed());             // missing origin
  CHECK_FALSE(validate(PiecewiseLinear{{{0, 0}, {0.5, 0.7}, {0.5, 0.8}, {1, 1}}}).passed());
  CHECK_THROWS_AS(SignalCdf::single_kink(0.6, 0.3), std::invalid_argument);
  auto rep = validate(SingleKink{0.6, 0.3});
  CHECK_FALSE(rep.summary().empty());
}

TEST_CASE("single-kink enumeration") {
  auto half = enumerate_single_kink(0.5);
  REQUIRE(half.size() == 1);
  CHECK(half[0].is_uniform());

  auto tenth = enumerate_single_kink(0.1);
  CHECK(tenth.size() == 45);
  int diagonal = 0;
  for (auto& f : tenth) diagonal += f.is_uniform();
  CHECK(diagonal == 9);

  bool found = false;
  for (auto& f : enumerate_single_kink(0.25)) {
    auto& k = std::get<SingleKink>(f.spec());
    found |= std::abs(k.x - 0.25) < 1e-12 && std::abs(k.y - 0.75) < 1e-12;
  }
  CHECK(found);

  // ordered by (x, y)
  for (std::size_t i = 1; i < tenth.size(); ++i) {
    auto& a = std::get<SingleKink>(tenth[i - 1].spec());
    auto& b = std::get<SingleKink>(tenth[i].spec());
    CHECK((a.x < b.x || (a.x == b.x && a.y < b.y)));
  }
  CHECK_THROWS_AS(enumerate_single_kink(0.3), std::invalid_argument);
}

TEST_CASE("shape invariants hold for random members of every family") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SignalCdf> fs{SignalCdf::uniform(), SignalCdf::power(0.3), SignalCdf::power(1.0)};
  for (int i = 0; i < 20; ++i) {
    double x = 0.05 + 0.9 * u(rng);
    double y = x + (1 - x) * u(rng) * 0.99;
    fs.push_back(SignalCdf::single_kink(x, y));
  }
  fs.push_back(SignalCdf::piecewise({{0, 0}, {0.1, 0.3}, {0.4, 0.75}, {0.8, 0.95}, {1, 1}}));
  for (auto& f : fs) {
    CAPTURE(f.describe());
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      double x = i / 1000.0, fx = f.eval(x);
      CHECK(fx >= prev);
      CHECK(fx >= x - 1e-12);
      prev = fx;
    }
    for (int i = 0; i < 200; ++i) {
      double a = u(rng), b = u(rng), c = u(rng);
      if (a > b) std::swap(a, b);
      if (b > c) std::swap(b, c);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-6 || c - b < 1e-6) continue;
      CHECK((f.eval(b) - f.eval(a)) / (b - a) >= (f.eval(c) - f.eval(b)) / (c - b) - 1e-12);
    }
    for (int i = 1; i < 100; ++i) {
      double x = i / 100.0;
      if (f.eval(x) < 1.0) CHECK(f.inverse(f.eval(x)) == doctest::Approx(x).epsilon(1e-10));
    }
  }
}

TEST_CASE("extended evaluation continues the last slope") {
  auto f = SignalCdf::single_kink(0.3, 0.6);
  double slope = 0.4 / 0.7;
  CHECK(f.eval_extended(1.2) == doctest::Approx(1.0 + 0.2 * slope));
  CHECK(f.eval_extended(-0.5) == 0.0);
  CHECK(f.eval_extended(0.5) == doctest::Approx(f.eval(0.5)));
}

}
