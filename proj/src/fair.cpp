#include "fair/fair.hpp"

#include <algorithm>
#include <cmath>

#include "fair/errors.hpp"

namespace fair {

std::string_view to_string(PaymentTiming t) {
  switch (t) {
    case PaymentTiming::Before: return "before";
    case PaymentTiming::OnDelivery: return "on_delivery";
    case PaymentTiming::After: return "after";
  }
  return "?";
}

PaymentTiming parse_payment_timing(std::string_view text) {
  if (text == "before") return PaymentTiming::Before;
  if (text == "on_delivery" || text == "during") return PaymentTiming::OnDelivery;
  if (text == "after") return PaymentTiming::After;
  throw InputError("unknown payment timing '" + std::string(text) + "'");
}

double payment_earliness(PaymentTiming t) {
  switch (t) {
    case PaymentTiming::Before: return 1.0;
    case PaymentTiming::OnDelivery: return 0.5;
    case PaymentTiming::After: return 0.0;
  }
  return 0.0;
}

std::string_view to_string(FairStatus s) {
  switch (s) {
    case FairStatus::Running: return "Running";
    case FairStatus::EndedByTime: return "EndedByTime";
    case FairStatus::EndedByOptimalPrice: return "EndedByOptimalPrice";
    case FairStatus::Settled: return "Settled";
  }
  return "?";
}

double fidelity_score(const BuyerHistory& h) {
  auto unit = [](double v) { return std::clamp(v, 0.0, 1.0); };
  const double purchases = static_cast<double>(std::clamp<Quantity>(h.purchases, 0, 20)) / 20.0;
  const double social = static_cast<double>(std::clamp<Quantity>(h.social_actions, 0, 50)) / 50.0;
  return 0.4 * purchases + 0.2 * unit(h.payment_earliness) + 0.2 * social + 0.2 * unit(h.join_earliness);
}

namespace {

constexpr std::int64_t kScale = 1'000'000;

void check_config(const FairConfig& c) {
  if (c.max_duration <= 0) throw DomainError("max_duration must be positive");
  if (!(c.margin >= 0)) throw DomainError("margin must be non-negative");
  if (!(c.fidelity_spread >= 0 && c.fidelity_spread <= 1)) throw DomainError("fidelity spread must lie in [0, 1]");
  if (c.q_max < 1) throw DomainError("q_max must be at least 1");
}

}  // namespace

std::vector<BuyerCharge> price_buyers(std::span<const BuyerOrder> orders, Money seller_cost, double margin,
                                      double fidelity_spread) {
  const std::int64_t margin_ppm = std::llround(margin * kScale);
  const std::int64_t revenue =
      seller_cost.micros() + divide_rounded(static_cast<__int128>(seller_cost.micros()) * margin_ppm, kScale);

  std::vector<__int128> weights;
  __int128 weight_sum = 0;
  for (const auto& o : orders) {
    const std::int64_t factor = std::llround((1.0 - fidelity_spread * o.fidelity) * kScale);
    weights.push_back(static_cast<__int128>(o.quantity) * factor);
    weight_sum += weights.back();
  }
  if (weight_sum == 0) {
    weights.clear();
    for (const auto& o : orders) weights.push_back(o.quantity);
    for (auto w : weights) weight_sum += w;
  }

  // Floor shares, then hand the leftover micros to the largest remainders.
  std::vector<std::int64_t> totals(orders.size());
  std::vector<std::pair<__int128, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const __int128 scaled = static_cast<__int128>(revenue) * weights[i];
    totals[i] = static_cast<std::int64_t>(scaled / weight_sum);
    remainders.emplace_back(scaled % weight_sum, i);
    assigned += totals[i];
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (std::int64_t k = 0; k < revenue - assigned; ++k) ++totals[remainders[static_cast<std::size_t>(k)].second];

  std::vector<BuyerCharge> charges;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const Money total = Money::from_micros(totals[i]);
    charges.push_back({orders[i].buyer_id, orders[i].quantity, UnitPrice(total, orders[i].quantity), total});
  }
  return charges;
}

Fair open_fair(std::string fair_id, std::string product_id, std::vector<Seller> sellers, FairConfig config,
               Timestamp now) {
  check_config(config);
  const bool any_stock = std::any_of(sellers.begin(), sellers.end(), [](const Seller& s) {
    return s.availability.is_unlimited() || s.availability.limit() > 0;
  });
  if (!any_stock) throw DomainError("no seller can supply product '" + product_id + "'");

  Fair f;
  f.id_ = std::move(fair_id);
  f.product_id_ = std::move(product_id);
  f.sellers_ = std::move(sellers);
  f.config_ = config;
  f.opened_at_ = now;
  f.deadline_ = now + config.max_duration;
  return f;
}

std::vector<Seller> Fair::effective_sellers(const SellerLedger* ledger) const {
  return ledger ? ledger->restrict(sellers_) : sellers_;
}

PricePrediction Fair::join(BuyerOrder order, const SellerLedger* ledger) {
  if (status_ != FairStatus::Running)
    throw StateError("fair '" + id_ + "' is " + std::string(to_string(status_)) + ", not accepting joins");
  if (order.join_time >= deadline_)
    throw StateError("join at t=" + std::to_string(order.join_time) + " is past the deadline t=" +
                     std::to_string(deadline_));
  if (order.join_time < opened_at_) throw DomainError("join precedes the fair opening");
  if (order.quantity < 1) throw DomainError("order quantity must be at least 1");
  if (order.max_wait <= 0) throw DomainError("max waiting time must be positive");
  if (!(order.fidelity >= 0 && order.fidelity <= 1)) throw DomainError("fidelity must lie in [0, 1]");

  const auto sellers = effective_sellers(ledger);
  if (auto supply = total_availability(sellers); supply && demand_ + order.quantity > *supply) {
    const Quantity shortfall = demand_ + order.quantity - *supply;
    throw InfeasibleError("order of " + std::to_string(order.quantity) + " exceeds available supply by " +
                              std::to_string(shortfall),
                          shortfall);
  }

  deadline_ = std::min(deadline_, order.join_time + order.max_wait);
  demand_ += order.quantity;
  orders_.push_back(std::move(order));
  return predict(ledger);
}

PricePrediction Fair::predict(const SellerLedger* ledger, std::span<const Quantity> what_if) const {
  Quantity horizon = std::max(config_.q_max, demand_);
  for (Quantity q : what_if) {
    if (q < 1) throw DomainError("what-if demand must be at least 1");
    horizon = std::max(horizon, q);
  }

  const auto sellers = effective_sellers(ledger);
  const FairPriceCurve curve = fair_price_curve(sellers, horizon, config_.method);
  if (curve.empty()) throw InfeasibleError("no stock left for fair '" + id_ + "'", std::max<Quantity>(demand_, 1));

  PricePrediction p;
  p.demand = demand_;
  p.optimum = optimal_demand(curve);
  if (demand_ >= 1 && demand_ <= curve.q_end()) p.current = curve.at(demand_).price;
  for (Quantity q : what_if)
    if (q <= curve.q_end()) p.what_if.emplace_back(q, curve.at(q).price);
  return p;
}

FairStatus Fair::check_end(Timestamp now, const SellerLedger* ledger) {
  if (status_ != FairStatus::Running) return status_;
  if (now >= deadline_) {
    status_ = FairStatus::EndedByTime;
  } else if (demand_ >= 1) {
    const PricePrediction p = predict(ledger);
    if (p.current && demand_ >= p.optimum.q_star && *p.current == p.optimum.z_star)
      status_ = FairStatus::EndedByOptimalPrice;
  }
  return status_;
}

Settlement Fair::settle(SellerLedger& ledger) {
  if (!is_ended(status_))
    throw StateError("fair '" + id_ + "' cannot settle while " + std::string(to_string(status_)));

  Settlement s;
  if (demand_ == 0) {
    status_ = FairStatus::Settled;
    return s;
  }

  ledger.add_sellers(sellers_);
  constexpr int kMaxAttempts = 16;
  for (;;) {
    if (++s.attempts > kMaxAttempts)
      throw InfeasibleError("ledger contention: could not commit fair '" + id_ + "'", 0);
    const auto available = ledger.restrict(sellers_);
    const Quantity supply = total_availability(available).value_or(demand_);
    if (supply < demand_)
      throw InfeasibleError("fair '" + id_ + "' short by " + std::to_string(demand_ - supply) + " units at settlement",
                            demand_ - supply);
    s.allocation = config_.method == AllocationMethod::Exact ? optimal_allocation(available, demand_)
                                                             : greedy_allocation(available, demand_);
    if (ledger.try_commit(s.allocation)) break;
  }

  for (const auto& e : s.allocation.entries) {
    s.sellers.push_back({e.seller, e.quantity, e.unit_price, e.unit_price * e.quantity});
    s.seller_total += e.unit_price * e.quantity;
  }
  s.buyers = price_buyers(orders_, s.seller_total, config_.margin, config_.fidelity_spread);
  for (const auto& b : s.buyers) s.buyer_total += b.total;
  s.manager_revenue = s.buyer_total - s.seller_total;
  status_ = FairStatus::Settled;
  return s;
}

}  // namespace fair
