#include "doctest.h"
#include "segsolve/benchmarks.hpp"
#include "segsolve/equilibrium.hpp"

using namespace segsolve;

TEST_SUITE("benchmarks") {

TEST_CASE("example economy only") {
  CHECK_NOTHROW(ExampleEconomy(example_params()));
  auto p = example_params();
  p.q = 0.5;
  CHECK_THROWS_AS(ExampleEconomy{p}, std::invalid_argument);
  p = example_params();
  p.cdf = SignalCdf::power(0.5);
  CHECK_THROWS_AS(ExampleEconomy{p}, std::invalid_argument);
}

TEST_CASE("match quality integrals under N") {
  auto row = match_quality(Scenario::N);
  // half the poor type, fits above the 0.675 cutoff
  CHECK(row.poor_quality == doctest::Approx(100 * 0.5 * 0.5 * (1 - 0.675 * 0.675)));
  CHECK(row.rich_quality == doctest::Approx(100 * 0.5 * 0.5 * (1 - 0.525 * 0.525)));
  CHECK(round_half_away(row.poor_quality) == 14);
  CHECK(round_half_away(row.rich_quality) == 18);
  CHECK(round_half_away(row.total_quality) == 32);
}

TEST_CASE("match-quality cells within one unit") {
  auto rows = table1();
  REQUIRE(rows.size() == 7);
  for (auto& c : compare_table1(rows)) {
    CAPTURE(c.row);
    CAPTURE(c.column);
    CHECK(c.match);
  }
  CHECK(round_half_away(rows[1].poor_share_c1) == 45);
  CHECK(round_half_away(rows[1].total_quality) == 43);
  // relocation leaves DA total quality unchanged within one unit
  CHECK(std::abs(rows[1].total_quality - rows[3].total_quality) <= 1.0);
  for (auto& r : rows) {
    CHECK(r.total_quality == doctest::Approx(r.poor_quality + r.rich_quality));
    CHECK(r.poor_quality >= 0);
    if (r.scenario != Scenario::Auction) CHECK(rows[6].total_quality >= r.total_quality);
  }
}

TEST_CASE("no-priority lottery") {
  auto out = no_priority_outcome();
  CHECK(out.admit_probability == doctest::Approx(0.4));
  CHECK(out.school.total() == doctest::Approx(0.4));
  CHECK(*out.school.poor_share == doctest::Approx(0.5));
  CHECK(round_half_away(out.row.total_quality) == 33);
}

TEST_CASE("seat auction") {
  auto out = auction_outcome();
  CHECK(out.school.total() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(round_half_away(out.row.total_quality) == 56);
  CHECK(round_half_away(out.row.poor_share_c1) == 41);
  CHECK(round_half_away(out.row.poor_share_of_quality) == 44);

  // only omega * tau matters: scaling omega by lambda scales tau by 1/lambda
  auto atoms = example_params().wealth.atoms();
  double tau = clear_seat_auction(atoms, 0.4, 1.0 / 3);
  for (auto& a : atoms) a.omega *= 2.0;
  CHECK(clear_seat_auction(atoms, 0.4, 1.0 / 3) == doctest::Approx(tau / 2).epsilon(1e-12));
  CHECK_THROWS_AS(clear_seat_auction(atoms, 5.0, 1.0 / 3), NoClearing);

  // a price away from the clearing one moves the seat count and the table
  auto off = auction_outcome_at(0.5 * out.price);
  CHECK(off.school.total() > 0.41);
}

TEST_CASE("policy cells within one point") {
  auto rows = policy_table();
  REQUIRE(rows.size() == 5);
  for (auto& c : compare_table2(rows)) {
    CAPTURE(c.row);
    CAPTURE(c.column);
    CHECK(c.match);
  }
  CHECK(round_half_away(rows[2].poor_share_c1) == 55);
  CHECK(round_half_away(rows[1].poor_share_c1) == 42);
}

TEST_CASE("rounding") {
  CHECK(round_half_away(2.5) == 3);
  CHECK(round_half_away(-2.5) == -3);
  CHECK(round_half_away(2.49) == 2);
}

}
