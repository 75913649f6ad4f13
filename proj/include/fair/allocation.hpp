#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fair/geo.hpp"
#include "fair/pricing.hpp"

namespace fair {

/// Stock a seller can commit; either a finite count or unlimited.
class Availability {
 public:
  static Availability unlimited() { return Availability(); }
  static Availability limited(Quantity q);

  bool is_unlimited() const { return !limit_; }
  Quantity limit() const;
  /// min(availability, q)
  Quantity cap(Quantity q) const { return limit_ ? std::min(*limit_, q) : q; }
  bool covers(Quantity q) const { return !limit_ || q <= *limit_; }

  std::string str() const { return limit_ ? std::to_string(*limit_) : "unlimited"; }
  friend bool operator==(const Availability&, const Availability&) = default;

 private:
  Availability() = default;
  std::optional<Quantity> limit_;
};

struct Seller {
  SellerId id;
  PriceCurve curve;
  Availability availability = Availability::unlimited();
  Position position;
};

struct AllocationEntry {
  SellerId seller;
  Quantity quantity;
  Money unit_price;  // the seller's curve at `quantity`
};

/// Split of one demand across sellers. Entries are ordered by seller id.
struct Allocation {
  std::vector<AllocationEntry> entries;
  Quantity total_quantity = 0;
  Money total_cost;

  UnitPrice fair_unit_price() const { return UnitPrice(total_cost, total_quantity); }
  /// "A:2;B:1"
  std::string summary() const;
};

enum class AllocationMethod { Greedy, Exact };

/// Monotone transform applied to the quantity-weighted mean price. Identity by default.
using PriceTransform = std::function<UnitPrice(const UnitPrice&)>;

/// Quantity-weighted mean of per-seller prices, each seller's curve evaluated at
/// its own allocated quantity, passed through `transform`.
UnitPrice fair_unit_price(const Allocation& allocation, std::span<const Seller> sellers,
                          const PriceTransform& transform = {});

/// Sum of availabilities; nullopt when any seller is unlimited.
std::optional<Quantity> total_availability(std::span<const Seller> sellers);

/// Fill sellers in quality order, z(min(q, Q)) ascending then id, each up to capacity.
Allocation greedy_allocation(std::span<const Seller> sellers, Quantity q);

/// Minimum total cost split. Ties: fewest sellers, then lowest seller ids, then
/// more units to the lower id.
Allocation optimal_allocation(std::span<const Seller> sellers, Quantity q);

struct FairPricePoint {
  Quantity quantity;
  UnitPrice price;
  Allocation allocation;
};

/// Fair-level price z(q) for q = 1..min(q_max, total availability).
struct FairPriceCurve {
  std::vector<FairPricePoint> points;
  /// nullopt when supply is unlimited.
  std::optional<Quantity> q_feasible_max;

  bool empty() const { return points.empty(); }
  Quantity q_end() const { return static_cast<Quantity>(points.size()); }
  const FairPricePoint& at(Quantity q) const { return points.at(static_cast<std::size_t>(q - 1)); }
};

FairPriceCurve fair_price_curve(std::span<const Seller> sellers, Quantity q_max,
                                AllocationMethod method = AllocationMethod::Exact);

struct OptimalPoint {
  Quantity q_star;
  UnitPrice z_star;
};

/// Global minimum of the curve; the smallest minimizing quantity on ties.
OptimalPoint optimal_demand(const FairPriceCurve& curve);
OptimalPoint optimal_demand(std::span<const UnitPrice> prices);

}  // namespace fair
