#pragma once

// Brute-force reference computations used only by tests. None of these call
// into the solver code paths they are compared against.

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "fair/allocation.hpp"

namespace fair::oracle {

/// Minimum of sum k_i * z_i(k_i) over every integer composition of q with
/// 0 <= k_i <= availability_i, by exhaustive enumeration.
inline std::int64_t min_total_cost(const std::vector<Seller>& sellers, Quantity q) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<Quantity> k(sellers.size(), 0);
  std::function<void(std::size_t, Quantity, std::int64_t)> rec = [&](std::size_t i, Quantity left, std::int64_t cost) {
    if (i == sellers.size()) {
      if (left == 0) best = std::min(best, cost);
      return;
    }
    const Quantity cap = sellers[i].availability.is_unlimited() ? left : std::min(left, sellers[i].availability.limit());
    for (Quantity x = 0; x <= cap; ++x) {
      const std::int64_t c = x == 0 ? 0 : x * sellers[i].curve(x).micros();
      rec(i + 1, left - x, cost + c);
    }
  };
  rec(0, q, 0);
  return best;
}

/// Pointwise minimum of the curves at q, computed directly.
inline Money min_price_at(const std::vector<Seller>& sellers, Quantity q) {
  Money best = sellers.front().curve(q);
  for (const auto& s : sellers) best = std::min(best, s.curve(q));
  return best;
}

/// Random linear-plateau curve with integer-cent parameters.
inline PriceCurve random_linear(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> p1(500, 20000), rate(0, 500), frac(10, 100);
  const std::int64_t top = p1(rng);
  const std::int64_t sat = std::max<std::int64_t>(1, top * frac(rng) / 100);
  return make_linear_curve(Money::from_micros(top * 10'000), Money::from_micros(rate(rng) * 10'000),
                           Money::from_micros(sat * 10'000));
}

/// Random tabular curve with 1..5 bands.
inline PriceCurve random_tabular(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bands(1, 5), gap(1, 15), drop(1, 300);
  std::vector<PriceBand> out;
  Quantity t = 1;
  std::int64_t price = 5000 + drop(rng) * 20;
  for (int b = bands(rng); b > 0 && price > 0; --b) {
    out.push_back({t, Money::from_micros(price * 10'000)});
    t += gap(rng);
    price -= drop(rng);
  }
  return make_tabular_curve(std::move(out));
}

inline std::vector<Seller> random_sellers(std::mt19937_64& rng, int n, Quantity max_availability) {
  std::uniform_int_distribution<Quantity> avail(0, max_availability);
  std::bernoulli_distribution tabular(0.3);
  std::vector<Seller> out;
  for (int i = 0; i < n; ++i) {
    Seller s{std::string(1, static_cast<char>('A' + i)), tabular(rng) ? random_tabular(rng) : random_linear(rng),
             Availability::limited(avail(rng)), {}};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace fair::oracle
