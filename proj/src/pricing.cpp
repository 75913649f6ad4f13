#include "fair/pricing.hpp"

#include <algorithm>
#include <limits>

#include "fair/errors.hpp"

namespace fair {

namespace {

Money eval_linear(const LinearPlateau& c, Quantity q) {
  const std::int64_t rate = c.discount_rate.micros();
  const std::int64_t headroom = c.single_product_price.micros() - c.saturation_price.micros();
  // Beyond this many steps the slope is below the plateau; also keeps rate*(q-1) from overflowing.
  if (rate == 0) return c.single_product_price;
  if (q - 1 >= headroom / rate + 1) return c.saturation_price;
  return std::max(c.single_product_price - c.discount_rate * (q - 1), c.saturation_price);
}

Money eval_tabular(const Tabular& c, Quantity q) {
  auto it = std::upper_bound(c.bands.begin(), c.bands.end(), q,
                             [](Quantity v, const PriceBand& b) { return v < b.threshold; });
  return std::prev(it)->price;
}

}  // namespace

Money PriceCurve::operator()(Quantity q) const {
  if (q < 1) throw DomainError("price curve evaluated at q = " + std::to_string(q) + " (< 1)");
  return std::visit(
      [q](const auto& c) -> Money {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, LinearPlateau>)
          return eval_linear(c, q);
        else
          return eval_tabular(c, q);
      },
      form_);
}

PriceCurve make_linear_curve(Money single_product_price, Money discount_rate, Money saturation_price) {
  if (single_product_price <= Money{}) throw DomainError("single-product price must be positive");
  if (saturation_price <= Money{}) throw DomainError("saturation price must be positive");
  if (discount_rate < Money{}) throw DomainError("discount rate must be non-negative");
  if (saturation_price > single_product_price)
    throw DomainError("saturation price " + saturation_price.str() + " exceeds single-product price " +
                      single_product_price.str());
  return PriceCurve(LinearPlateau{single_product_price, discount_rate, saturation_price});
}

PriceCurve make_tabular_curve(std::vector<PriceBand> bands) {
  if (bands.empty()) throw DomainError("tabular curve needs at least one band");
  if (bands.front().threshold != 1) throw DomainError("first band must start at quantity 1");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (bands[i].price <= Money{}) throw DomainError("band prices must be positive");
    if (i == 0) continue;
    if (bands[i].threshold <= bands[i - 1].threshold)
      throw DomainError("band thresholds must be strictly increasing");
    if (bands[i].price >= bands[i - 1].price)
      throw DomainError("band prices must be strictly decreasing");
  }
  return PriceCurve(Tabular{std::move(bands)});
}

Envelope lower_envelope(std::span<const NamedCurve> sellers, Quantity q_max) {
  if (sellers.empty()) throw DomainError("lower envelope of an empty seller set");
  if (q_max < 1) throw DomainError("q_max must be at least 1");

  Envelope env;
  env.points.reserve(static_cast<std::size_t>(q_max));
  for (Quantity q = 1; q <= q_max; ++q) {
    const NamedCurve* best = nullptr;
    Money best_price;
    for (const auto& s : sellers) {
      const Money p = s.second(q);
      if (!best || p < best_price || (p == best_price && s.first < best->first)) {
        best = &s;
        best_price = p;
      }
    }
    env.points.push_back({q, best->first, best_price});
    if (!env.segments.empty() && env.segments.back().seller == best->first)
      env.segments.back().to = q;
    else
      env.segments.push_back({q, q, best->first});
  }
  return env;
}

}  // namespace fair
