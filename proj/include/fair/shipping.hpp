#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fair/allocation.hpp"
#include "fair/geo.hpp"

namespace fair {

/// One route per (seller, destination): fixed + per_km * distance.
struct ShippingCostModel {
  double fixed = 5.0;   // CU per route
  double per_km = 0.1;  // CU per km
};

/// Units a buyer takes home, in join order.
struct ParcelDemand {
  std::string buyer_id;
  Quantity quantity;
};

struct Route {
  SellerId seller;
  Position destination;
  Quantity parcels;
  double km;
  double cost;
  std::vector<std::string> buyer_ids;
};

struct ShippingPlan {
  std::vector<Route> routes;
  double total_cost = 0;

  Quantity parcels() const;
};

/// Maps allocated units to buyers in join order (first buyer takes the first
/// units of the first allocation entry, and so on), then groups parcels by
/// seller and destination. A buyer's destination is its accepted pickup if any,
/// otherwise its home position.
ShippingPlan shipping_plan(const Allocation& allocation, std::span<const Seller> sellers,
                           std::span<const ParcelDemand> buyers,
                           const std::map<std::string, Position>& destinations,
                           const std::map<std::string, Position>& pickups = {},
                           const ShippingCostModel& model = {});

}  // namespace fair
