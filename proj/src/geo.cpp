#include "fair/geo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fair/errors.hpp"

namespace fair {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<PickupSuggestion> suggest_pickups(std::span<const PositionHistory> histories, double radius,
                                              int min_visits, int min_buyers) {
  if (!(radius > 0)) throw DomainError("pickup radius must be positive");
  if (min_visits < 1) throw DomainError("min_visits must be at least 1");
  if (min_buyers < 2) throw DomainError("min_buyers must be at least 2");

  struct Flat {
    std::size_t buyer;
    Position where;
    bool claimed = false;
  };
  std::vector<Flat> visits;
  for (std::size_t b = 0; b < histories.size(); ++b)
    for (const auto& v : histories[b].visits) visits.push_back({b, v.where});

  std::vector<PickupSuggestion> out;
  for (std::size_t seed = 0; seed < visits.size(); ++seed) {
    if (visits[seed].claimed) continue;

    Position centroid{};
    int n = 0;
    for (const auto& v : visits) {
      if (v.claimed || distance(v.where, visits[seed].where) > radius) continue;
      centroid.x += v.where.x;
      centroid.y += v.where.y;
      ++n;
    }
    centroid.x /= n;
    centroid.y /= n;

    std::vector<std::size_t> members;
    std::map<std::size_t, int> per_buyer;
    for (std::size_t i = 0; i < visits.size(); ++i) {
      if (visits[i].claimed || distance(visits[i].where, centroid) > radius) continue;
      members.push_back(i);
      ++per_buyer[visits[i].buyer];
    }

    PickupSuggestion s{centroid, {}};
    for (auto [buyer, count] : per_buyer)
      if (count >= min_visits) s.buyer_ids.push_back(histories[buyer].buyer_id);

    if (static_cast<int>(s.buyer_ids.size()) >= min_buyers) {
      for (auto i : members) visits[i].claimed = true;
      out.push_back(std::move(s));
    } else {
      visits[seed].claimed = true;
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.buyer_ids.size() > b.buyer_ids.size(); });
  return out;
}

}  // namespace fair
