#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fair/fair.hpp"
#include "fair/shipping.hpp"

namespace fair {

struct ScenarioEvent {
  enum class Kind { Join, Advance };
  Kind kind = Kind::Advance;
  Timestamp time = 0;
  BuyerOrder order;  // Join only
};

/// A replayable fair: sellers, configuration and a timestamped list of joins
/// and clock advances.
struct Scenario {
  std::string fair_id = "fair-1";
  std::string product_id = "product";
  Timestamp opened_at = 0;
  FairConfig config;
  std::vector<Seller> sellers;
  std::vector<ScenarioEvent> events;
  std::map<std::string, Position> pickups;
  ShippingCostModel shipping;
};

/// Parses the JSON scenario document. `base_dir` resolves a relative "curve_file".
/// Throws InputError on schema violations.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

struct ReplayResult {
  std::vector<nlohmann::json> log;  // one record per open/join/reject/end/settle
  FairStatus final_status = FairStatus::Running;
  FairStatus end_status = FairStatus::Running;
  Settlement settlement;
  std::optional<ShippingPlan> plan;  // when every buyer has a destination
};

/// Replays the scenario against a fresh ledger: joins in time order, end checks at
/// every event, then settlement at the end time.
ReplayResult replay(const Scenario& scenario);
ReplayResult replay(const Scenario& scenario, SellerLedger& ledger);

}  // namespace fair
