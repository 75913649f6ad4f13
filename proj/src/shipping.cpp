#include "fair/shipping.hpp"

#include <algorithm>

#include "fair/errors.hpp"

namespace fair {

Quantity ShippingPlan::parcels() const {
  Quantity n = 0;
  for (const auto& r : routes) n += r.parcels;
  return n;
}

ShippingPlan shipping_plan(const Allocation& allocation, std::span<const Seller> sellers,
                           std::span<const ParcelDemand> buyers,
                           const std::map<std::string, Position>& destinations,
                           const std::map<std::string, Position>& pickups, const ShippingCostModel& model) {
  Quantity demanded = 0;
  for (const auto& b : buyers) demanded += b.quantity;
  if (demanded != allocation.total_quantity)
    throw ConstraintError("buyers demand " + std::to_string(demanded) + " units but the allocation covers " +
                          std::to_string(allocation.total_quantity));

  auto destination_of = [&](const std::string& buyer) -> Position {
    if (auto it = pickups.find(buyer); it != pickups.end()) return it->second;
    if (auto it = destinations.find(buyer); it != destinations.end()) return it->second;
    throw InputError("no destination for buyer '" + buyer + "'");
  };
  auto seller_position = [&](const SellerId& id) -> Position {
    auto it = std::find_if(sellers.begin(), sellers.end(), [&](const Seller& s) { return s.id == id; });
    if (it == sellers.end()) throw DomainError("allocation names unknown seller '" + id + "'");
    return it->position;
  };

  ShippingPlan plan;
  auto add = [&](const SellerId& seller, const std::string& buyer, Quantity parcels) {
    const Position dest = destination_of(buyer);
    auto it = std::find_if(plan.routes.begin(), plan.routes.end(),
                           [&](const Route& r) { return r.seller == seller && r.destination == dest; });
    if (it == plan.routes.end()) {
      const double km = distance(seller_position(seller), dest);
      plan.routes.push_back({seller, dest, parcels, km, model.fixed + model.per_km * km, {buyer}});
    } else {
      it->parcels += parcels;
      if (std::find(it->buyer_ids.begin(), it->buyer_ids.end(), buyer) == it->buyer_ids.end())
        it->buyer_ids.push_back(buyer);
    }
  };

  std::size_t entry = 0;
  Quantity left_in_entry = allocation.entries.empty() ? 0 : allocation.entries[0].quantity;
  for (const auto& b : buyers) {
    Quantity need = b.quantity;
    while (need > 0) {
      while (left_in_entry == 0) left_in_entry = allocation.entries.at(++entry).quantity;
      const Quantity take = std::min(need, left_in_entry);
      add(allocation.entries[entry].seller, b.buyer_id, take);
      need -= take;
      left_in_entry -= take;
    }
  }

  for (const auto& r : plan.routes) plan.total_cost += r.cost;
  return plan;
}

}  // namespace fair
