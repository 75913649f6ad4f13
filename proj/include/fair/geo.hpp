#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fair {

using Timestamp = std::int64_t;

/// Planar coordinates in km.
struct Position {
  double x = 0;
  double y = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

struct Visit {
  Position where;
  Timestamp at = 0;
};

struct PositionHistory {
  std::string buyer_id;
  std::vector<Visit> visits;  // non-decreasing timestamps
};

struct PickupSuggestion {
  Position centroid;
  std::vector<std::string> buyer_ids;
};

/// Places attended by several buyers. Seeds a cell at each unclaimed visit, takes the
/// centroid of the unclaimed visits within `radius`, and counts a buyer as attending
/// when at least `min_visits` of its visits lie within `radius` of that centroid.
/// Cells with at least `min_buyers` attendees are emitted, largest first.
std::vector<PickupSuggestion> suggest_pickups(std::span<const PositionHistory> histories, double radius,
                                              int min_visits, int min_buyers);

}  // namespace fair
