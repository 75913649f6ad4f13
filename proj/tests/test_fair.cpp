#include "doctest.h"

#include <random>
#include <thread>

#include "fair/errors.hpp"
#include "fair/fair.hpp"

using namespace fair;

namespace {

Money cu(const char* s) { return Money::parse(s); }

Seller linear(const char* id, const char* p1, const char* rate, const char* sat,
              Availability a = Availability::unlimited()) {
  return {id, make_linear_curve(cu(p1), cu(rate), cu(sat)), a, {}};
}

std::vector<Seller> crossover() {
  return {linear("A", "100", "5", "70"), linear("B", "110", "8", "60")};
}

constexpr Duration kDay = 24 * 3600;

BuyerOrder order(const char* id, Quantity q, Timestamp at, Duration wait = 30 * kDay, double fidelity = 0) {
  BuyerOrder o;
  o.buyer_id = id;
  o.quantity = q;
  o.join_time = at;
  o.max_wait = wait;
  o.fidelity = fidelity;
  return o;
}

FairConfig week() {
  FairConfig c;
  c.max_duration = 7 * kDay;
  return c;
}

}  // namespace

TEST_CASE("fidelity score") {
  CHECK(fidelity_score({}) == 0.0);
  CHECK(fidelity_score({0, payment_earliness(PaymentTiming::After), 0, 0}) == 0.0);
  CHECK(fidelity_score({20, 1.0, 50, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity_score({500, 3.0, 900, 2.0}) == doctest::Approx(1.0).epsilon(1e-12));
  // 0.4*10/20 + 0.2*0.5 + 0.2*25/50 + 0.2*0.5
  CHECK(fidelity_score({10, 0.5, 25, 0.5}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(payment_earliness(PaymentTiming::Before) == 1.0);
  CHECK(payment_earliness(PaymentTiming::OnDelivery) == 0.5);
}

TEST_CASE("opening a fair") {
  auto f = open_fair("F1", "ream", {linear("A", "1", "0", "1"), linear("B", "2", "0", "2"), linear("C", "3", "0", "3")},
                     week(), 1000);
  CHECK(f.status() == FairStatus::Running);
  CHECK(f.demand() == 0);
  CHECK(f.deadline() == 1000 + 7 * kDay);
  CHECK_THROWS_AS(open_fair("F2", "paper", {}, week(), 0), DomainError);
  CHECK_THROWS_AS(open_fair("F3", "paper", {linear("A", "1", "0", "1", Availability::limited(0))}, week(), 0),
                  DomainError);
  FairConfig bad = week();
  bad.max_duration = 0;
  CHECK_THROWS_AS(open_fair("F4", "paper", crossover(), bad, 0), DomainError);
}

TEST_CASE("joins aggregate demand and can only shorten the deadline") {
  auto f = open_fair("F1", "ream", crossover(), week(), 0);
  f.join(order("b1", 2, 10));
  CHECK(f.demand() == 2);
  CHECK(f.deadline() == 7 * kDay);

  f.join(order("b2", 1, 100, 2 * kDay));
  CHECK(f.deadline() == 100 + 2 * kDay);
  f.join(order("b3", 1, 200, 5 * kDay));
  CHECK(f.deadline() == 100 + 2 * kDay);

  CHECK_THROWS_AS(f.join(order("late", 1, 100 + 2 * kDay)), StateError);
  CHECK_THROWS_AS(f.join(order("zero", 0, 300)), DomainError);
  CHECK(f.demand() == 4);
}

TEST_CASE("joins beyond available supply are rejected") {
  const std::vector<Seller> sellers{linear("A", "10", "1", "8", Availability::limited(2)),
                                    linear("B", "12", "1", "9", Availability::limited(2))};
  auto f = open_fair("F1", "p", sellers, week(), 0);
  f.join(order("b1", 3, 1));
  try {
    f.join(order("b2", 2, 2));
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.shortfall() == 1);
  }
  CHECK(f.demand() == 3);

  SellerLedger ledger(sellers);
  Allocation other;
  other.entries = {{"A", 2, cu("9")}};
  other.total_quantity = 2;
  REQUIRE(ledger.try_commit(other));
  auto g = open_fair("F2", "p", sellers, week(), 0);
  CHECK_THROWS_AS(g.join(order("b1", 3, 1), &ledger), InfeasibleError);
  g.join(order("b1", 2, 1), &ledger);
}

TEST_CASE("price prediction") {
  auto f = open_fair("F1", "p", crossover(), week(), 0);
  const auto empty = f.predict();
  CHECK_FALSE(empty.current.has_value());
  CHECK(empty.optimum.q_star >= 1);

  const auto p = f.join(order("b1", 3, 1));
  REQUIRE(p.current.has_value());
  CHECK(*p.current == UnitPrice(cu("90")));
  const std::vector<Quantity> what_if{5};
  const auto q = f.predict(nullptr, what_if);
  REQUIRE(q.what_if.size() == 1);
  CHECK(q.what_if[0].second == UnitPrice(cu("78")));

  const std::vector<Quantity> range{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50};
  const auto r = f.predict(nullptr, range);
  for (std::size_t i = 1; i < r.what_if.size(); ++i) CHECK(r.what_if[i].second <= r.what_if[i - 1].second);
}

TEST_CASE("end conditions") {
  SUBCASE("deadline is inclusive") {
    auto f = open_fair("F1", "p", crossover(), week(), 0);
    CHECK(f.check_end(7 * kDay - 1) == FairStatus::Running);
    CHECK(f.check_end(7 * kDay) == FairStatus::EndedByTime);
  }
  SUBCASE("reaching the optimal price ends the fair") {
    // B plateaus at 60 from q = 8 on; q* = 8.
    auto f = open_fair("F1", "p", crossover(), week(), 0);
    f.join(order("b1", 5, 1));
    CHECK(f.check_end(2) == FairStatus::Running);
    const auto p = f.predict();
    CHECK(p.optimum.q_star == 8);
    CHECK(p.optimum.z_star == UnitPrice(cu("60")));
    f.join(order("b2", 3, 3));
    CHECK(f.check_end(4) == FairStatus::EndedByOptimalPrice);
    CHECK_THROWS_AS(f.join(order("b3", 1, 5)), StateError);
    CHECK(f.check_end(8 * kDay) == FairStatus::EndedByOptimalPrice);
  }
}

TEST_CASE("settlement with uniform fidelity") {
  const std::vector<Seller> sellers{linear("A", "10", "0", "10", Availability::limited(5))};
  FairConfig cfg = week();
  cfg.margin = 0.05;
  auto f = open_fair("F1", "p", sellers, cfg, 0);
  f.join(order("b1", 2, 1));
  f.join(order("b2", 1, 2));
  SellerLedger ledger(sellers);
  CHECK_THROWS_AS(f.settle(ledger), StateError);
  f.check_end(f.deadline());
  const auto s = f.settle(ledger);
  CHECK(s.seller_total == cu("30"));
  REQUIRE(s.buyers.size() == 2);
  CHECK(s.buyers[0].unit_price == UnitPrice(cu("10.5")));
  CHECK(s.buyers[1].unit_price == UnitPrice(cu("10.5")));
  CHECK(s.buyers[0].total == cu("21"));
  CHECK(s.buyers[1].total == cu("10.5"));
  CHECK(s.manager_revenue == cu("1.5"));
  CHECK(f.status() == FairStatus::Settled);
  CHECK(ledger.committed("A") == 3);
  CHECK_THROWS_AS(f.settle(ledger), StateError);
}

TEST_CASE("zero margin and equal fidelity: buyers pay the fair price") {
  const std::vector<Seller> sellers{linear("A", "10", "1", "8", Availability::limited(2)),
                                    linear("B", "12", "1", "9", Availability::limited(2))};
  FairConfig cfg = week();
  cfg.margin = 0;
  auto f = open_fair("F1", "p", sellers, cfg, 0);
  f.join(order("b1", 1, 1, kDay, 0.3));
  f.join(order("b2", 2, 1, kDay, 0.3));
  f.check_end(f.deadline());
  SellerLedger ledger(sellers);
  const auto s = f.settle(ledger);
  CHECK(s.allocation.fair_unit_price() == UnitPrice(cu("10")));
  for (const auto& b : s.buyers) CHECK(b.unit_price == UnitPrice(cu("10")));
  CHECK(s.manager_revenue == Money{});
}

TEST_CASE("higher fidelity pays less, totals unchanged") {
  const std::vector<BuyerOrder> orders{order("loyal", 2, 0, kDay, 1.0), order("new", 2, 0, kDay, 0.0)};
  const auto charges = price_buyers(orders, cu("40"), 0.05, 0.04);
  CHECK(charges[0].unit_price < charges[1].unit_price);
  CHECK(charges[0].total + charges[1].total == cu("42"));

  // Common shift of all fidelities leaves the buyer total unchanged.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> phi(0.0, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<BuyerOrder> base, shifted;
    const double shift = phi(rng);
    for (int i = 0; i < 1 + trial % 6; ++i) {
      const double p = phi(rng);
      base.push_back(order("b", 1 + static_cast<Quantity>(rng() % 5), 0, kDay, p));
      shifted.push_back(base.back());
      shifted.back().fidelity = p + shift;
    }
    const Money cost = Money::from_micros(static_cast<std::int64_t>(rng() % 1'000'000'000));
    Money a, b;
    for (const auto& c : price_buyers(base, cost, 0.05, 0.04)) a += c.total;
    for (const auto& c : price_buyers(shifted, cost, 0.05, 0.04)) b += c.total;
    REQUIRE(a == b);
    REQUIRE(a >= cost);
  }
}

TEST_CASE("empty fair settles to an empty settlement") {
  auto f = open_fair("F1", "p", crossover(), week(), 0);
  CHECK(f.check_end(f.deadline()) == FairStatus::EndedByTime);
  SellerLedger ledger(crossover());
  const auto s = f.settle(ledger);
  CHECK(s.buyers.empty());
  CHECK(s.allocation.entries.empty());
  CHECK(f.status() == FairStatus::Settled);
}

TEST_CASE("settlement re-allocates around capacity taken by another fair") {
  const std::vector<Seller> sellers{linear("A", "10", "1", "8", Availability::limited(3)),
                                    linear("B", "12", "1", "9", Availability::limited(3))};
  SellerLedger ledger(sellers);
  auto f1 = open_fair("F1", "p", sellers, week(), 0);
  auto f2 = open_fair("F2", "p", sellers, week(), 0);
  f1.join(order("b1", 3, 1), &ledger);
  f2.join(order("b2", 3, 1), &ledger);
  f1.check_end(f1.deadline());
  f2.check_end(f2.deadline());
  const auto s1 = f1.settle(ledger);
  CHECK(s1.allocation.summary() == "A:3");
  const auto s2 = f2.settle(ledger);
  CHECK(s2.allocation.summary() == "B:3");

  auto f3 = open_fair("F3", "p", sellers, week(), 0);
  f3.join(order("b3", 1, 1));
  f3.check_end(f3.deadline());
  try {
    f3.settle(ledger);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.shortfall() == 1);
  }
}

TEST_CASE("ledger stays within availability under concurrent settlements") {
  const std::vector<Seller> sellers{linear("A", "10", "1", "8", Availability::limited(40)),
                                    linear("B", "12", "1", "9", Availability::limited(35)),
                                    linear("C", "11", "0", "11", Availability::limited(25))};
  SellerLedger ledger(sellers);
  std::vector<Fair> fairs;
  for (int i = 0; i < 32; ++i) {
    auto f = open_fair("F" + std::to_string(i), "p", sellers, week(), 0);
    f.join(order("b", 1 + i % 7, 1));
    f.check_end(f.deadline());
    fairs.push_back(std::move(f));
  }
  std::atomic<int> settled{0}, failed{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < fairs.size(); i += 4) {
        try {
          fairs[i].settle(ledger);
          ++settled;
        } catch (const InfeasibleError&) {
          ++failed;
        }
      }
    });
  for (auto& th : threads) th.join();
  CHECK(settled + failed == 32);
  Quantity committed = 0;
  for (const auto& s : sellers) {
    CHECK(ledger.committed(s.id) <= s.availability.limit());
    committed += ledger.committed(s.id);
  }
  Quantity expected = 0;
  for (const auto& f : fairs)
    if (f.status() == FairStatus::Settled) expected += f.demand();
  CHECK(committed == expected);
}
