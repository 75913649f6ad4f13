#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fair/allocation.hpp"
#include "fair/geo.hpp"

namespace fair {

using Duration = std::int64_t;  // logical seconds

enum class PaymentTiming { Before, OnDelivery, After };

std::string_view to_string(PaymentTiming t);
PaymentTiming parse_payment_timing(std::string_view text);

/// Before = 1, OnDelivery = 0.5, After = 0.
double payment_earliness(PaymentTiming t);

/// Buyer's past interaction with the platform. Earliness values are in [0, 1].
struct BuyerHistory {
  Quantity purchases = 0;
  double payment_earliness = 0;
  Quantity social_actions = 0;
  double join_earliness = 0;
};

/// 0.4 purchases (capped at 20) + 0.2 payment earliness + 0.2 social actions
/// (capped at 50) + 0.2 join earliness. Result in [0, 1].
double fidelity_score(const BuyerHistory& history);

struct BuyerOrder {
  std::string buyer_id;
  Quantity quantity = 1;
  Duration max_wait = 1;
  PaymentTiming payment = PaymentTiming::OnDelivery;
  Timestamp join_time = 0;
  std::optional<Position> destination;
  double fidelity = 0;
};

enum class FairStatus { Running, EndedByTime, EndedByOptimalPrice, Settled };

std::string_view to_string(FairStatus s);
inline bool is_ended(FairStatus s) {
  return s == FairStatus::EndedByTime || s == FairStatus::EndedByOptimalPrice;
}

struct FairConfig {
  Duration max_duration = 7 * 24 * 3600;
  double margin = 0.05;           // manager mark-up on seller cost, >= 0
  double fidelity_spread = 0.04;  // discount spread across fidelity, in [0, 1]
  Quantity q_max = kDefaultQuantitySweep;
  AllocationMethod method = AllocationMethod::Exact;
};

/// Cross-fair stock accounting. Commits are atomic check-and-commit so
/// concurrent settlements can never push a seller past its availability.
class SellerLedger {
 public:
  SellerLedger() = default;
  explicit SellerLedger(std::span<const Seller> sellers) { add_sellers(sellers); }

  /// Registers sellers not yet known; existing entries are left untouched.
  void add_sellers(std::span<const Seller> sellers);

  Availability remaining(const SellerId& id) const;
  Quantity committed(const SellerId& id) const;
  Availability total(const SellerId& id) const;

  /// Copies of `sellers` whose availability is the ledger's remaining stock.
  std::vector<Seller> restrict(std::span<const Seller> sellers) const;

  /// Commits every entry of the allocation, or none if any exceeds remaining stock.
  bool try_commit(const Allocation& allocation);

 private:
  struct Entry {
    Availability total = Availability::unlimited();
    Quantity committed = 0;
  };
  const Entry& entry(const SellerId& id) const;

  mutable std::mutex mutex_;
  std::map<SellerId, Entry> entries_;
};

struct PricePrediction {
  Quantity demand = 0;
  std::optional<UnitPrice> current;  // z at the current demand, absent when demand is 0
  OptimalPoint optimum;
  std::vector<std::pair<Quantity, UnitPrice>> what_if;
};

struct BuyerCharge {
  std::string buyer_id;
  Quantity quantity;
  UnitPrice unit_price;
  Money total;
};

struct SellerPayment {
  SellerId seller_id;
  Quantity quantity;
  Money unit_price;
  Money payment;
};

struct Settlement {
  std::vector<BuyerCharge> buyers;
  std::vector<SellerPayment> sellers;
  Money buyer_total;
  Money seller_total;
  Money manager_revenue;
  Allocation allocation;
  int attempts = 0;
};

/// Buyer charges for a settled cost: total = cost + margin * cost, shared in
/// proportion to q * (1 - spread * fidelity) with exact largest-remainder rounding.
std::vector<BuyerCharge> price_buyers(std::span<const BuyerOrder> orders, Money seller_cost, double margin,
                                      double fidelity_spread);

/// One fair for one product. Single writer: callers serialize mutations.
class Fair {
 public:
  const std::string& id() const { return id_; }
  const std::string& product_id() const { return product_id_; }
  const std::vector<Seller>& sellers() const { return sellers_; }
  const std::vector<BuyerOrder>& orders() const { return orders_; }
  const FairConfig& config() const { return config_; }
  Timestamp opened_at() const { return opened_at_; }
  Timestamp deadline() const { return deadline_; }
  FairStatus status() const { return status_; }
  Quantity demand() const { return demand_; }

  /// Adds an order; the deadline shrinks to the order's join_time + max_wait when earlier.
  PricePrediction join(BuyerOrder order, const SellerLedger* ledger = nullptr);

  /// Current price, optimum (q*, z*) and prices at the requested demands.
  PricePrediction predict(const SellerLedger* ledger = nullptr, std::span<const Quantity> what_if = {}) const;

  /// Running -> EndedByTime when now >= deadline, -> EndedByOptimalPrice when the
  /// demand has reached q* at exactly z*.
  FairStatus check_end(Timestamp now, const SellerLedger* ledger = nullptr);

  /// Allocates the aggregate demand against the ledger's remaining stock,
  /// commits it and prices every buyer. Ended fairs only; settles once.
  Settlement settle(SellerLedger& ledger);

 private:
  friend Fair open_fair(std::string, std::string, std::vector<Seller>, FairConfig, Timestamp);
  Fair() = default;

  std::vector<Seller> effective_sellers(const SellerLedger* ledger) const;

  std::string id_;
  std::string product_id_;
  std::vector<Seller> sellers_;
  std::vector<BuyerOrder> orders_;
  FairConfig config_;
  Timestamp opened_at_ = 0;
  Timestamp deadline_ = 0;
  FairStatus status_ = FairStatus::Running;
  Quantity demand_ = 0;
};

Fair open_fair(std::string fair_id, std::string product_id, std::vector<Seller> sellers, FairConfig config,
               Timestamp now);

}  // namespace fair
