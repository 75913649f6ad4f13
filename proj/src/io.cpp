#include "fair/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "fair/errors.hpp"

namespace fair {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::int64_t parse_int(const std::string& s, const char* what, std::size_t line = 0) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw InputError(std::string("bad ") + what + " '" + s + "'", line);
  return v;
}

double parse_double(const std::string& s, const char* what, std::size_t line = 0) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw InputError(std::string("bad ") + what + " '" + s + "'", line);
  }
}

Availability parse_availability(const std::string& s, std::size_t line = 0) {
  if (s.empty() || s == "unlimited" || s == "inf") return Availability::unlimited();
  const auto q = parse_int(s, "availability", line);
  if (q < 0) throw InputError("availability must be non-negative", line);
  return Availability::limited(q);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class Fn>
void for_each_line(std::istream& in, Fn fn) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    fn(s, line);
  }
}

}  // namespace

Cell number(std::int64_t v) { return {std::to_string(v), true}; }

void write_table(std::ostream& os, const Table& table, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    for (const auto& n : table.notes) os << "# " << n << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i].text);
      os << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["notes"] = table.notes;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      if (row[i].numeric)
        obj[table.columns[i]] = nlohmann::ordered_json::parse(row[i].text);
      else
        obj[table.columns[i]] = row[i].text;
    }
    doc["rows"].push_back(std::move(obj));
  }
  os << doc.dump(2) << '\n';
}

std::vector<Seller> parse_curve_file(std::istream& in) {
  std::vector<Seller> sellers;
  bool first = true;
  for_each_line(in, [&](const std::string& s, std::size_t line) {
    const auto f = split(s, ',');
    if (first && f[0] == "seller_id") {
      first = false;
      return;
    }
    first = false;
    if (f.size() < 2 || f[0].empty()) throw InputError("missing seller id or curve form", line);

    std::size_t next = 0;
    std::optional<PriceCurve> curve;
    try {
      if (f[1] == "linear") {
        if (f.size() < 5) throw InputError("linear row needs p1,rate,sat", line);
        curve = make_linear_curve(Money::parse(f[2]), Money::parse(f[3]), Money::parse(f[4]));
        next = 5;
      } else if (f[1] == "tabular") {
        if (f.size() < 4) throw InputError("tabular row needs thresholds and prices", line);
        const auto thresholds = split(f[2], '|');
        const auto prices = split(f[3], '|');
        if (thresholds.size() != prices.size())
          throw InputError("tabular row has " + std::to_string(thresholds.size()) + " thresholds but " +
                               std::to_string(prices.size()) + " prices",
                           line);
        std::vector<PriceBand> bands;
        for (std::size_t i = 0; i < thresholds.size(); ++i)
          bands.push_back({parse_int(thresholds[i], "threshold", line), Money::parse(prices[i])});
        curve = make_tabular_curve(std::move(bands));
        next = 4;
      } else {
        throw InputError("unknown curve form '" + f[1] + "'", line);
      }
    } catch (const InputError& e) {
      if (e.line()) throw;
      throw InputError(e.what(), line);
    } catch (const DomainError& e) {
      throw InputError(e.what(), line);
    }

    Seller seller{f[0], std::move(*curve), Availability::unlimited(), {}};
    if (f.size() > next) seller.availability = parse_availability(f[next], line);
    if (f.size() > next + 2)
      seller.position = {parse_double(f[next + 1], "x", line), parse_double(f[next + 2], "y", line)};
    else if (f.size() == next + 2)
      throw InputError("position needs both x and y", line);
    for (const auto& other : sellers)
      if (other.id == seller.id) throw InputError("duplicate seller id '" + seller.id + "'", line);
    sellers.push_back(std::move(seller));
  });
  if (sellers.empty()) throw InputError("curve file lists no sellers");
  return sellers;
}

std::vector<PositionHistory> parse_positions_file(std::istream& in) {
  std::vector<PositionHistory> out;
  std::map<std::string, std::size_t> index;
  bool first = true;
  for_each_line(in, [&](const std::string& s, std::size_t line) {
    const auto f = split(s, ',');
    if (first && f[0] == "buyer_id") {
      first = false;
      return;
    }
    first = false;
    if (f.size() != 4) throw InputError("expected buyer_id,x,y,timestamp", line);
    auto [it, inserted] = index.try_emplace(f[0], out.size());
    if (inserted) out.push_back({f[0], {}});
    auto& h = out[it->second];
    const Visit v{{parse_double(f[1], "x", line), parse_double(f[2], "y", line)},
                  parse_int(f[3], "timestamp", line)};
    if (!h.visits.empty() && v.at < h.visits.back().at)
      throw InputError("timestamps for buyer '" + f[0] + "' go backwards", line);
    h.visits.push_back(v);
  });
  return out;
}

AllocationMethod parse_method(const std::string& text) {
  if (text == "exact") return AllocationMethod::Exact;
  if (text == "greedy") return AllocationMethod::Greedy;
  throw InputError("unknown allocation method '" + text + "' (expected exact or greedy)");
}

std::string_view to_string(AllocationMethod m) { return m == AllocationMethod::Exact ? "exact" : "greedy"; }

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  bool have_availabilities = false;
  for_each_line(in, [&](const std::string& s, std::size_t line) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError("expected key = value", line);
    const std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (auto hash = value.find('#'); hash != std::string::npos) value = trim(value.substr(0, hash));

    if (key == "n_sellers") {
      const auto n = parse_int(value, "n_sellers", line);
      if (n < 1) throw InputError("n_sellers must be at least 1", line);
      cfg.spec.n_sellers = static_cast<int>(n);
    } else if (key == "seed") {
      const auto seed = parse_int(value, "seed", line);
      if (seed < 0) throw InputError("seed must be non-negative", line);
      cfg.spec.seed = static_cast<std::uint64_t>(seed);
    } else if (key == "availabilities") {
      cfg.availabilities.clear();
      for (const auto& a : split(value, ',')) {
        if (a.empty()) throw InputError("empty availability entry", line);
        cfg.availabilities.push_back(parse_availability(a, line));
      }
      have_availabilities = true;
    } else if (key == "q_max") {
      cfg.q_max = parse_int(value, "q_max", line);
      if (cfg.q_max < 1) throw InputError("q_max must be at least 1", line);
    } else if (key == "method") {
      try {
        cfg.method = parse_method(value);
      } catch (const InputError& e) {
        throw InputError(e.what(), line);
      }
    } else {
      throw InputError("unknown key '" + key + "'", line);
    }
  });
  if (!have_availabilities) cfg.availabilities = {Availability::unlimited()};
  return cfg;
}

Table envelope_table(const Envelope& env) {
  Table t{{"q", "seller_id", "price"}, {}, {}};
  for (const auto& p : env.points) t.rows.push_back({number(p.quantity), text(p.best_seller), number(p.unit_price.str())});
  return t;
}

Table allocation_table(const Allocation& a) {
  Table t{{"q", "seller_id", "q_sigma", "unit_price_sigma", "fair_unit_price"}, {}, {}};
  const std::string fair_price = a.fair_unit_price().str();
  for (const auto& e : a.entries)
    t.rows.push_back({number(a.total_quantity), text(e.seller), number(e.quantity), number(e.unit_price.str()),
                      number(fair_price)});
  return t;
}

Table fair_curve_table(const FairPriceCurve& curve) {
  Table t{{"q", "z", "alloc_summary"}, {}, {}};
  for (const auto& p : curve.points)
    t.rows.push_back({number(p.quantity), number(p.price.str()), text(p.allocation.summary())});
  return t;
}

namespace {

std::vector<std::string> experiment_notes(const ExperimentResult& r) {
  std::ostringstream os;
  os << "rng=" << kRngAlgorithm << " seed=" << r.spec.seed << " n_sellers=" << r.spec.n_sellers
     << " q_max=" << r.q_max << " method=" << to_string(r.method);
  return {os.str()};
}

}  // namespace

Table experiment_curve_table(const ExperimentResult& result, const ExperimentRun& run) {
  Table t{{"availability", "q", "z_exact", "z_greedy", "best_allocation"}, {}, experiment_notes(result)};
  const Cell availability = run.availability.is_unlimited() ? text("unlimited") : number(run.availability.limit());
  for (const auto& p : run.exact.points)
    t.rows.push_back({availability, number(p.quantity), number(p.price.str()),
                      number(run.greedy.at(static_cast<std::size_t>(p.quantity - 1)).str()),
                      text(p.allocation.summary())});
  return t;
}

Table experiment_summary_table(const ExperimentResult& result) {
  Table t{{"availability", "q_star", "z_star", "nonmonotone", "max_greedy_gap", "greedy_suboptimal_points"},
          {},
          experiment_notes(result)};
  for (const auto& run : result.runs) {
    const Cell availability = run.availability.is_unlimited() ? text("unlimited") : number(run.availability.limit());
    if (run.error) {
      t.rows.push_back({availability, text(""), text(""), text(""), text(""), text("error: " + *run.error)});
      continue;
    }
    std::ostringstream gap;
    gap.precision(6);
    gap << std::fixed << run.max_greedy_gap;
    t.rows.push_back({availability, number(run.optimum.q_star), number(run.optimum.z_star.str()),
                      number(run.nonmonotone ? "true" : "false"), number(gap.str()),
                      number(run.greedy_suboptimal)});
  }
  return t;
}

Table buyer_settlement_table(const Settlement& s) {
  Table t{{"buyer_id", "q", "unit_price", "total"}, {}, {}};
  for (const auto& b : s.buyers)
    t.rows.push_back({text(b.buyer_id), number(b.quantity), number(b.unit_price.str()), number(b.total.str())});
  return t;
}

Table seller_settlement_table(const Settlement& s) {
  Table t{{"seller_id", "q", "unit_price", "payment"}, {}, {}};
  for (const auto& p : s.sellers)
    t.rows.push_back({text(p.seller_id), number(p.quantity), number(p.unit_price.str()), number(p.payment.str())});
  return t;
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

Table shipping_plan_table(const ShippingPlan& plan) {
  Table t{{"seller_id", "dest_x", "dest_y", "parcels", "km", "cost"},
          {},
          {"coordinates: planar euclidean, km", "total_cost=" + fixed(plan.total_cost, 6)}};
  for (const auto& r : plan.routes)
    t.rows.push_back({text(r.seller), number(fixed(r.destination.x, 6)), number(fixed(r.destination.y, 6)),
                      number(r.parcels), number(fixed(r.km, 6)), number(fixed(r.cost, 6))});
  return t;
}

Table pickup_table(const std::vector<PickupSuggestion>& pickups) {
  Table t{{"x", "y", "buyers", "buyer_ids"}, {}, {"coordinates: planar euclidean, km"}};
  for (const auto& p : pickups) {
    std::string ids;
    for (const auto& id : p.buyer_ids) ids += (ids.empty() ? "" : "|") + id;
    t.rows.push_back({number(fixed(p.centroid.x, 6)), number(fixed(p.centroid.y, 6)),
                      number(static_cast<std::int64_t>(p.buyer_ids.size())), text(ids)});
  }
  return t;
}

nlohmann::json to_json(const Allocation& a) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : a.entries)
    entries.push_back({{"seller_id", e.seller}, {"q", e.quantity}, {"unit_price", e.unit_price.str()}});
  nlohmann::json j = {{"q", a.total_quantity}, {"total_cost", a.total_cost.str()}, {"entries", entries}};
  if (a.total_quantity > 0) j["fair_unit_price"] = a.fair_unit_price().str();
  return j;
}

nlohmann::json to_json(const PricePrediction& p) {
  nlohmann::json j = {{"demand", p.demand},
                      {"q_star", p.optimum.q_star},
                      {"z_star", p.optimum.z_star.str()}};
  j["current"] = p.current ? nlohmann::json(p.current->str()) : nlohmann::json(nullptr);
  nlohmann::json what_if = nlohmann::json::array();
  for (const auto& [q, z] : p.what_if) what_if.push_back({{"q", q}, {"z", z.str()}});
  j["what_if"] = what_if;
  return j;
}

nlohmann::json to_json(const Settlement& s) {
  nlohmann::json buyers = nlohmann::json::array();
  for (const auto& b : s.buyers)
    buyers.push_back({{"buyer_id", b.buyer_id}, {"q", b.quantity}, {"unit_price", b.unit_price.str()},
                      {"total", b.total.str()}});
  nlohmann::json sellers = nlohmann::json::array();
  for (const auto& p : s.sellers)
    sellers.push_back({{"seller_id", p.seller_id}, {"q", p.quantity}, {"unit_price", p.unit_price.str()},
                       {"payment", p.payment.str()}});
  return {{"buyers", buyers},
          {"sellers", sellers},
          {"buyer_total", s.buyer_total.str()},
          {"seller_total", s.seller_total.str()},
          {"manager_revenue", s.manager_revenue.str()},
          {"allocation", to_json(s.allocation)}};
}

}  // namespace fair
