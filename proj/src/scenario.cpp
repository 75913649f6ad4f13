#include "fair/scenario.hpp"

#include <fstream>
#include <sstream>

#include "fair/errors.hpp"
#include "fair/io.hpp"

namespace fair {

namespace {

using nlohmann::json;

template <class T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(where + ": \"" + key + "\" has the wrong type");
  }
}

template <class T>
T field_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? field<T>(obj, key, where) : fallback;
}

std::string money_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v.get<double>();
    return os.str();
  }
  throw InputError(where + ": price must be a number or decimal string");
}

Position position(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw InputError(where + ": position must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

Seller parse_seller(const json& s, std::size_t index) {
  const std::string where = "sellers[" + std::to_string(index) + "]";
  if (!s.is_object()) throw InputError(where + ": expected an object");
  const auto id = field<std::string>(s, "id", where);
  const auto form = field<std::string>(s, "form", where);
  std::optional<PriceCurve> curve;
  try {
    if (form == "linear") {
      for (const char* k : {"p1", "rate", "sat"})
        if (!s.contains(k)) throw InputError(where + ": missing \"" + k + "\"");
      curve = make_linear_curve(Money::parse(money_text(s["p1"], where)), Money::parse(money_text(s["rate"], where)),
                                Money::parse(money_text(s["sat"], where)));
    } else if (form == "tabular") {
      const auto thresholds = field<std::vector<Quantity>>(s, "thresholds", where);
      const auto prices = field<json>(s, "prices", where);
      if (!prices.is_array() || prices.size() != thresholds.size())
        throw InputError(where + ": thresholds and prices differ in length");
      std::vector<PriceBand> bands;
      for (std::size_t i = 0; i < thresholds.size(); ++i)
        bands.push_back({thresholds[i], Money::parse(money_text(prices[i], where))});
      curve = make_tabular_curve(std::move(bands));
    } else {
      throw InputError(where + ": unknown form '" + form + "'");
    }
  } catch (const DomainError& e) {
    throw InputError(where + ": " + e.what());
  }

  Seller seller{id, std::move(*curve), Availability::unlimited(), {}};
  if (s.contains("availability") && !s["availability"].is_null()) {
    const auto& a = s["availability"];
    if (a.is_string() && a.get<std::string>() == "unlimited") {
    } else if (a.is_number_integer() && a.get<std::int64_t>() >= 0) {
      seller.availability = Availability::limited(a.get<std::int64_t>());
    } else {
      throw InputError(where + ": availability must be a non-negative integer or \"unlimited\"");
    }
  }
  if (s.contains("position")) seller.position = position(s["position"], where);
  return seller;
}

ScenarioEvent parse_event(const json& e, std::size_t index) {
  const std::string where = "events[" + std::to_string(index) + "]";
  if (!e.is_object()) throw InputError(where + ": expected an object");
  ScenarioEvent ev;
  ev.time = field<Timestamp>(e, "time", where);
  const auto type = field<std::string>(e, "type", where);
  if (type == "advance") return ev;
  if (type != "join") throw InputError(where + ": unknown event type '" + type + "'");

  ev.kind = ScenarioEvent::Kind::Join;
  BuyerOrder& o = ev.order;
  o.buyer_id = field<std::string>(e, "buyer_id", where);
  o.quantity = field<Quantity>(e, "q", where);
  o.max_wait = field<Duration>(e, "max_wait", where);
  o.join_time = ev.time;
  o.payment = parse_payment_timing(field_or<std::string>(e, "payment", "on_delivery", where));
  if (e.contains("destination")) o.destination = position(e["destination"], where);
  if (e.contains("fidelity")) {
    o.fidelity = field<double>(e, "fidelity", where);
  } else {
    BuyerHistory h;
    h.payment_earliness = payment_earliness(o.payment);
    if (e.contains("history")) {
      const json& hj = e["history"];
      h.purchases = field_or<Quantity>(hj, "purchases", 0, where + ".history");
      h.social_actions = field_or<Quantity>(hj, "social_actions", 0, where + ".history");
      h.join_earliness = field_or<double>(hj, "join_earliness", 0.0, where + ".history");
    }
    o.fidelity = fidelity_score(h);
  }
  return ev;
}

}  // namespace

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw InputError("scenario must be a JSON object");
  Scenario sc;
  sc.fair_id = field_or<std::string>(doc, "fair_id", sc.fair_id, "scenario");
  sc.product_id = field_or<std::string>(doc, "product_id", sc.product_id, "scenario");
  sc.opened_at = field_or<Timestamp>(doc, "opened_at", 0, "scenario");

  if (doc.contains("config")) {
    const json& c = doc["config"];
    sc.config.max_duration = field_or<Duration>(c, "max_duration", sc.config.max_duration, "config");
    sc.config.margin = field_or<double>(c, "margin", sc.config.margin, "config");
    sc.config.fidelity_spread = field_or<double>(c, "fidelity_spread", sc.config.fidelity_spread, "config");
    sc.config.q_max = field_or<Quantity>(c, "q_max", sc.config.q_max, "config");
    sc.config.method = parse_method(field_or<std::string>(c, "method", "exact", "config"));
  }

  if (doc.contains("sellers")) {
    const json& sellers = doc["sellers"];
    if (!sellers.is_array()) throw InputError("\"sellers\" must be an array");
    for (std::size_t i = 0; i < sellers.size(); ++i) sc.sellers.push_back(parse_seller(sellers[i], i));
  } else if (doc.contains("curve_file")) {
    std::filesystem::path path = field<std::string>(doc, "curve_file", "scenario");
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw InputError("cannot open curve file " + path.string());
    sc.sellers = parse_curve_file(in);
  } else {
    throw InputError("scenario needs \"sellers\" or \"curve_file\"");
  }

  if (!doc.contains("events") || !doc["events"].is_array()) throw InputError("scenario needs an \"events\" array");
  const json& events = doc["events"];
  for (std::size_t i = 0; i < events.size(); ++i) {
    sc.events.push_back(parse_event(events[i], i));
    if (i > 0 && sc.events[i].time < sc.events[i - 1].time)
      throw InputError("events[" + std::to_string(i) + "]: time goes backwards");
  }

  if (doc.contains("pickups")) {
    if (!doc["pickups"].is_object()) throw InputError("\"pickups\" must map buyer ids to positions");
    for (const auto& [buyer, pos] : doc["pickups"].items()) sc.pickups[buyer] = position(pos, "pickups." + buyer);
  }
  if (doc.contains("shipping")) {
    sc.shipping.fixed = field_or<double>(doc["shipping"], "fixed", sc.shipping.fixed, "shipping");
    sc.shipping.per_km = field_or<double>(doc["shipping"], "per_km", sc.shipping.per_km, "shipping");
  }
  return sc;
}

ReplayResult replay(const Scenario& scenario) {
  SellerLedger ledger(scenario.sellers);
  return replay(scenario, ledger);
}

ReplayResult replay(const Scenario& sc, SellerLedger& ledger) {
  ledger.add_sellers(sc.sellers);
  Fair fair = open_fair(sc.fair_id, sc.product_id, sc.sellers, sc.config, sc.opened_at);
  ReplayResult out;
  out.log.push_back({{"event", "open"},
                     {"time", sc.opened_at},
                     {"fair_id", fair.id()},
                     {"product_id", fair.product_id()},
                     {"deadline", fair.deadline()},
                     {"sellers", fair.sellers().size()}});

  Timestamp end_time = sc.opened_at;
  auto check = [&](Timestamp now) {
    if (fair.status() != FairStatus::Running) return;
    if (fair.check_end(now, &ledger) != FairStatus::Running) {
      end_time = fair.status() == FairStatus::EndedByTime ? fair.deadline() : now;
      out.log.push_back({{"event", "end"},
                         {"time", end_time},
                         {"status", to_string(fair.status())},
                         {"demand", fair.demand()},
                         {"deadline", fair.deadline()}});
    }
  };

  for (const auto& ev : sc.events) {
    check(ev.time);
    if (ev.kind != ScenarioEvent::Kind::Join) continue;
    if (fair.status() != FairStatus::Running) {
      out.log.push_back({{"event", "reject"}, {"time", ev.time}, {"buyer_id", ev.order.buyer_id},
                         {"reason", "fair " + std::string(to_string(fair.status()))}});
      continue;
    }
    try {
      const PricePrediction p = fair.join(ev.order, &ledger);
      out.log.push_back({{"event", "join"},
                         {"time", ev.time},
                         {"buyer_id", ev.order.buyer_id},
                         {"q", ev.order.quantity},
                         {"fidelity", ev.order.fidelity},
                         {"payment", to_string(ev.order.payment)},
                         {"demand", fair.demand()},
                         {"deadline", fair.deadline()},
                         {"prediction", to_json(p)}});
    } catch (const StateError& e) {
      out.log.push_back({{"event", "reject"}, {"time", ev.time}, {"buyer_id", ev.order.buyer_id}, {"reason", e.what()}});
    } catch (const InfeasibleError& e) {
      out.log.push_back({{"event", "reject"},
                         {"time", ev.time},
                         {"buyer_id", ev.order.buyer_id},
                         {"reason", e.what()},
                         {"shortfall", e.shortfall()}});
    } catch (const DomainError& e) {
      throw InputError("join of '" + ev.order.buyer_id + "': " + e.what());
    }
    check(ev.time);
  }
  check(fair.deadline());
  out.end_status = fair.status();

  out.settlement = fair.settle(ledger);
  out.final_status = fair.status();
  nlohmann::json settle = {{"event", "settle"},
                           {"time", end_time},
                           {"status", to_string(fair.status())},
                           {"ended_as", to_string(out.end_status)},
                           {"buyers_cover_sellers", out.settlement.buyer_total >= out.settlement.seller_total},
                           {"settlement", to_json(out.settlement)}};

  const bool all_routed = std::all_of(fair.orders().begin(), fair.orders().end(), [&](const BuyerOrder& o) {
    return o.destination || sc.pickups.count(o.buyer_id);
  });
  if (!fair.orders().empty() && all_routed) {
    std::vector<ParcelDemand> parcels;
    std::map<std::string, Position> homes;
    for (const auto& o : fair.orders()) {
      parcels.push_back({o.buyer_id, o.quantity});
      if (o.destination) homes[o.buyer_id] = *o.destination;
    }
    out.plan = shipping_plan(out.settlement.allocation, fair.sellers(), parcels, homes, sc.pickups, sc.shipping);
    settle["shipping_total_cost"] = out.plan->total_cost;
  }
  out.log.push_back(std::move(settle));
  return out;
}

}  // namespace fair
