#include "doctest.h"

#include <random>

#include "fair/errors.hpp"
#include "fair/pricing.hpp"
#include "oracles.hpp"

using namespace fair;

namespace {

Money cu(const char* s) { return Money::parse(s); }

PriceCurve staples() {
  return make_tabular_curve({{1, cu("4.69")}, {10, cu("4.19")}, {30, cu("3.69")}, {60, cu("3.09")}});
}

}  // namespace

TEST_CASE("linear plateau curve") {
  const auto c = make_linear_curve(cu("100"), cu("2"), cu("60"));
  CHECK(c(1) == cu("100"));
  CHECK(c(30) == cu("60"));
  CHECK(c(11) == cu("80"));
  CHECK(c(21) == cu("60"));
  CHECK(c(20) == cu("62"));
  CHECK(make_linear_curve(cu("10"), cu("1"), cu("8"))(2) == cu("9"));
  CHECK(c(std::numeric_limits<Quantity>::max()) == cu("60"));
  CHECK(make_linear_curve(cu("5"), cu("0"), cu("5"))(1000) == cu("5"));
}

TEST_CASE("linear curve rejects bad parameters") {
  CHECK_THROWS_AS(make_linear_curve(cu("100"), cu("2"), cu("101")), DomainError);
  CHECK_THROWS_AS(make_linear_curve(cu("0"), cu("2"), cu("0")), DomainError);
  CHECK_THROWS_AS(make_linear_curve(cu("100"), cu("2"), cu("-1")), DomainError);
  CHECK_THROWS_AS(make_linear_curve(cu("100"), cu("-2"), cu("60")), DomainError);
}

TEST_CASE("tabular stack-of-paper curve") {
  const auto c = staples();
  CHECK(c(5) == cu("4.69"));
  CHECK(c(9) == cu("4.69"));
  CHECK(c(10) == cu("4.19"));
  CHECK(c(29) == cu("4.19"));
  CHECK(c(30) == cu("3.69"));
  CHECK(c(59) == cu("3.69"));
  CHECK(c(60) == cu("3.09"));
  CHECK(c(100000) == cu("3.09"));
}

TEST_CASE("tabular curve rejects bad bands") {
  CHECK_THROWS_AS(make_tabular_curve({}), DomainError);
  CHECK_THROWS_AS(make_tabular_curve({{2, cu("4")}}), DomainError);
  CHECK_THROWS_AS(make_tabular_curve({{1, cu("4")}, {1, cu("3")}}), DomainError);
  CHECK_THROWS_AS(make_tabular_curve({{1, cu("4")}, {5, cu("4")}}), DomainError);
  CHECK_THROWS_AS(make_tabular_curve({{1, cu("4")}, {5, cu("0")}}), DomainError);
}

TEST_CASE("evaluation outside the domain") {
  CHECK_THROWS_AS(staples()(0), DomainError);
  CHECK_THROWS_AS(make_linear_curve(cu("1"), cu("0"), cu("1"))(-3), DomainError);
}

TEST_CASE("lower envelope of a single seller is its curve") {
  const std::vector<NamedCurve> one{{"A", staples()}};
  const auto env = lower_envelope(one, 80);
  REQUIRE(env.segments.size() == 1);
  CHECK(env.segments[0].from == 1);
  CHECK(env.segments[0].to == 80);
  for (Quantity q = 1; q <= 80; ++q) CHECK(env.at(q) == staples()(q));
}

TEST_CASE("two-seller crossover") {
  const std::vector<NamedCurve> ab{{"A", make_linear_curve(cu("100"), cu("5"), cu("70"))},
                                   {"B", make_linear_curve(cu("110"), cu("8"), cu("60"))}};
  const auto env = lower_envelope(ab, 10);
  REQUIRE(env.segments.size() == 2);
  CHECK(env.segments[0].seller == "A");
  CHECK(env.segments[0].to == 4);
  CHECK(env.segments[1].seller == "B");
  CHECK(env.segments[1].from == 5);
  CHECK(env.segments[1].to == 10);
  CHECK(env.at(4) == cu("85"));
  CHECK(env.at(5) == cu("78"));
  // brute-force labels
  for (Quantity q = 1; q <= 10; ++q) {
    const Money a = ab[0].second(q), b = ab[1].second(q);
    CHECK(env.points[q - 1].best_seller == (a <= b ? "A" : "B"));
  }
}

TEST_CASE("envelope ties go to the lowest id") {
  const std::vector<NamedCurve> tied{{"B", make_linear_curve(cu("10"), cu("1"), cu("5"))},
                                     {"A", make_linear_curve(cu("10"), cu("1"), cu("5"))}};
  const auto env = lower_envelope(tied, 20);
  REQUIRE(env.segments.size() == 1);
  CHECK(env.segments[0].seller == "A");
}

TEST_CASE("envelope errors") {
  CHECK_THROWS_AS(lower_envelope({}, 5), DomainError);
  const std::vector<NamedCurve> one{{"A", staples()}};
  CHECK_THROWS_AS(lower_envelope(one, 0), DomainError);
}

TEST_CASE("property: curves are non-increasing and linear form matches its formula") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const PriceCurve c = trial % 2 ? oracle::random_linear(rng) : oracle::random_tabular(rng);
    for (Quantity q = 1; q < 400; ++q) REQUIRE(c(q + 1) <= c(q));
    if (const auto* lin = std::get_if<LinearPlateau>(&c.form())) {
      for (Quantity q = 1; q < 400; ++q) {
        const std::int64_t slope = lin->single_product_price.micros() - lin->discount_rate.micros() * (q - 1);
        REQUIRE(c(q).micros() == std::max(slope, lin->saturation_price.micros()));
      }
    }
  }
}

TEST_CASE("property: envelope is the pointwise minimum and adding a seller never raises it") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 50);
    std::vector<NamedCurve> curves;
    for (int i = 0; i < n; ++i)
      curves.emplace_back("s" + std::to_string(1000 + i), i % 3 ? oracle::random_linear(rng) : oracle::random_tabular(rng));
    const Quantity q_max = 1000;
    const auto env = lower_envelope(curves, q_max);
    for (Quantity q = 1; q <= q_max; ++q) {
      Money best = curves[0].second(q);
      for (const auto& [id, c] : curves) best = std::min(best, c(q));
      REQUIRE(env.at(q) == best);
    }
    for (std::size_t i = 1; i < env.segments.size(); ++i) {
      REQUIRE(env.segments[i].seller != env.segments[i - 1].seller);
      REQUIRE(env.segments[i].from == env.segments[i - 1].to + 1);
    }

    auto more = curves;
    more.emplace_back("zz", oracle::random_linear(rng));
    const auto env2 = lower_envelope(more, q_max);
    for (Quantity q = 1; q <= q_max; ++q) REQUIRE(env2.at(q) <= env.at(q));
  }
}
