#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "fair/allocation.hpp"
#include "fair/fair.hpp"
#include "fair/shipping.hpp"
#include "fair/synth.hpp"

namespace fair {

enum class OutputFormat { Csv, Json };

struct Cell {
  std::string text;
  bool numeric = false;
};

inline Cell text(std::string s) { return {std::move(s), false}; }
inline Cell number(std::string s) { return {std::move(s), true}; }
Cell number(std::int64_t v);

/// Row-oriented output. CSV puts `notes` on leading "# " lines; JSON emits
/// {"notes": [...], "rows": [{column: value}]}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
};

void write_table(std::ostream& os, const Table& table, OutputFormat format);

/// Curve file, one seller per line:
///   seller_id,linear,p1,rate,sat[,availability[,x,y]]
///   seller_id,tabular,t1|t2|...,p1|p2|...[,availability[,x,y]]
/// Blank lines, '#' comments and a leading header row starting "seller_id" are skipped.
/// Availability is a non-negative integer, "unlimited" or empty.
std::vector<Seller> parse_curve_file(std::istream& in);

/// Positions file: buyer_id,x,y,timestamp (header optional).
std::vector<PositionHistory> parse_positions_file(std::istream& in);

struct ExperimentConfig {
  PopulationSpec spec;
  std::vector<Availability> availabilities;
  Quantity q_max = kDefaultQuantitySweep;
  AllocationMethod method = AllocationMethod::Exact;
};

/// key = value lines: n_sellers, seed, availabilities (comma list, "unlimited"
/// allowed), q_max, method (exact|greedy). '#' starts a comment.
ExperimentConfig parse_experiment_config(std::istream& in);

AllocationMethod parse_method(const std::string& text);
std::string_view to_string(AllocationMethod m);

Table envelope_table(const Envelope& env);
Table allocation_table(const Allocation& allocation);
Table fair_curve_table(const FairPriceCurve& curve);
Table experiment_curve_table(const ExperimentResult& result, const ExperimentRun& run);
Table experiment_summary_table(const ExperimentResult& result);
Table buyer_settlement_table(const Settlement& s);
Table seller_settlement_table(const Settlement& s);
Table shipping_plan_table(const ShippingPlan& plan);
Table pickup_table(const std::vector<PickupSuggestion>& pickups);

nlohmann::json to_json(const Allocation& a);
nlohmann::json to_json(const PricePrediction& p);
nlohmann::json to_json(const Settlement& s);

}  // namespace fair
