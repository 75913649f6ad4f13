#include "fair/allocation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "fair/errors.hpp"

namespace fair {

Availability Availability::limited(Quantity q) {
  if (q < 0) throw DomainError("availability must be non-negative");
  Availability a;
  a.limit_ = q;
  return a;
}

Quantity Availability::limit() const {
  if (!limit_) throw DomainError("unlimited availability has no finite limit");
  return *limit_;
}

std::string Allocation::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ';';
    os << entries[i].seller << ':' << entries[i].quantity;
  }
  return os.str();
}

std::optional<Quantity> total_availability(std::span<const Seller> sellers) {
  Quantity total = 0;
  for (const auto& s : sellers) {
    if (s.availability.is_unlimited()) return std::nullopt;
    total += s.availability.limit();
  }
  return total;
}

UnitPrice fair_unit_price(const Allocation& allocation, std::span<const Seller> sellers,
                          const PriceTransform& transform) {
  if (allocation.entries.empty()) throw DomainError("fair unit price of an empty allocation");
  Money cost;
  Quantity total = 0;
  for (const auto& e : allocation.entries) {
    auto it = std::find_if(sellers.begin(), sellers.end(), [&](const Seller& s) { return s.id == e.seller; });
    if (it == sellers.end()) throw DomainError("allocation names unknown seller '" + e.seller + "'");
    if (e.quantity < 1) throw DomainError("allocated quantities must be positive");
    if (!it->availability.covers(e.quantity))
      throw ConstraintError("seller '" + e.seller + "' allocated " + std::to_string(e.quantity) +
                            " over availability " + it->availability.str());
    cost += it->curve(e.quantity) * e.quantity;
    total += e.quantity;
  }
  UnitPrice mean(cost, total);
  return transform ? transform(mean) : mean;
}

namespace {

void check_sellers(std::span<const Seller> sellers) {
  if (sellers.empty()) throw DomainError("empty seller set");
  std::vector<const SellerId*> ids;
  for (const auto& s : sellers) ids.push_back(&s.id);
  std::sort(ids.begin(), ids.end(), [](auto* a, auto* b) { return *a < *b; });
  for (std::size_t i = 1; i < ids.size(); ++i)
    if (*ids[i] == *ids[i - 1]) throw DomainError("duplicate seller id '" + *ids[i] + "'");
}

void check_demand(std::span<const Seller> sellers, Quantity q) {
  if (q < 1) throw DomainError("demand must be at least 1");
  if (auto total = total_availability(sellers); total && q > *total)
    throw InfeasibleError("demand " + std::to_string(q) + " exceeds total availability " +
                              std::to_string(*total) + " (shortfall " + std::to_string(q - *total) + ")",
                          q - *total);
}

std::vector<const Seller*> sorted_by_id(std::span<const Seller> sellers) {
  std::vector<const Seller*> out;
  for (const auto& s : sellers) out.push_back(&s);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->id < b->id; });
  return out;
}

void push_entry(Allocation& a, const Seller& s, Quantity k) {
  const Money price = s.curve(k);
  a.entries.push_back({s.id, k, price});
  a.total_quantity += k;
  a.total_cost += price * k;
}

/// Dynamic program over sellers (sorted by id) with remaining-quantity state.
/// Layer i holds the best way to buy t units from sellers i..n-1.
class ExactSolver {
 public:
  ExactSolver(std::span<const Seller> sellers, Quantity q_hi) : sellers_(sorted_by_id(sellers)), q_hi_(q_hi) {
    const std::size_t n = sellers_.size();
    const auto width = static_cast<std::size_t>(q_hi + 1);
    table_.assign(n + 1, std::vector<Cell>(width));
    table_[n][0] = Cell{0, 0, 0};

    std::vector<std::int64_t> unit_cost;
    for (std::size_t i = n; i-- > 0;) {
      const Seller& s = *sellers_[i];
      const Quantity cap = s.availability.cap(q_hi);
      unit_cost.assign(static_cast<std::size_t>(cap + 1), 0);
      for (Quantity k = 1; k <= cap; ++k) unit_cost[k] = (s.curve(k) * k).micros();

      for (Quantity t = 0; t <= q_hi; ++t) {
        Cell& cell = table_[i][t];
        for (Quantity k = 0; k <= std::min(cap, t); ++k) {
          const Cell& rest = table_[i + 1][t - k];
          if (rest.cost == kInfeasible) continue;
          const Cell candidate{unit_cost[k] + rest.cost, rest.count + (k > 0 ? 1 : 0), k};
          if (cell.cost == kInfeasible || prefer(i, t, candidate, cell)) cell = candidate;
        }
      }
    }
  }

  bool feasible(Quantity q) const { return q <= q_hi_ && table_[0][q].cost != kInfeasible; }

  Allocation allocation(Quantity q) const {
    Allocation a;
    for (std::size_t i = 0; i < sellers_.size(); ++i) {
      const Quantity k = table_[i][q].take;
      if (k > 0) push_entry(a, *sellers_[i], k);
      q -= k;
    }
    return a;
  }

 private:
  static constexpr std::int64_t kInfeasible = std::numeric_limits<std::int64_t>::max();

  struct Cell {
    std::int64_t cost = kInfeasible;
    int count = 0;
    Quantity take = 0;
  };

  bool prefer(std::size_t i, Quantity t, const Cell& a, const Cell& b) const {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.count != b.count) return a.count < b.count;
    // Sorted id lists: a list starting with seller i beats any list drawn from i+1.. only.
    if ((a.take > 0) != (b.take > 0)) return a.take > 0;
    const int order = compare_ids(i + 1, t - a.take, t - b.take);
    if (order != 0) return order < 0;
    return a.take > b.take;
  }

  // Lexicographic comparison of the seller indices used by two sub-solutions of layer `from`.
  int compare_ids(std::size_t from, Quantity ta, Quantity tb) const {
    std::size_t ia = from, ib = from;
    for (;;) {
      while (ia < sellers_.size() && table_[ia][ta].take == 0) ++ia;
      while (ib < sellers_.size() && table_[ib][tb].take == 0) ++ib;
      if (ia != ib) return ia < ib ? -1 : 1;
      if (ia == sellers_.size()) return 0;
      ta -= table_[ia][ta].take;
      tb -= table_[ib][tb].take;
      ++ia;
      ++ib;
    }
  }

  std::vector<const Seller*> sellers_;
  Quantity q_hi_;
  std::vector<std::vector<Cell>> table_;
};

}  // namespace

Allocation greedy_allocation(std::span<const Seller> sellers, Quantity q) {
  check_sellers(sellers);
  check_demand(sellers, q);

  struct Ranked {
    Money key;
    const Seller* seller;
  };
  std::vector<Ranked> ranking;
  for (const auto& s : sellers) {
    const Quantity cover = s.availability.cap(q);
    if (cover > 0) ranking.push_back({s.curve(cover), &s});
  }
  std::sort(ranking.begin(), ranking.end(), [](const Ranked& a, const Ranked& b) {
    return a.key != b.key ? a.key < b.key : a.seller->id < b.seller->id;
  });

  std::vector<std::pair<const Seller*, Quantity>> fills;
  Quantity remaining = q;
  for (const auto& r : ranking) {
    if (remaining == 0) break;
    const Quantity k = r.seller->availability.cap(remaining);
    fills.emplace_back(r.seller, k);
    remaining -= k;
  }

  std::sort(fills.begin(), fills.end(), [](auto& a, auto& b) { return a.first->id < b.first->id; });
  Allocation a;
  for (auto& [s, k] : fills) push_entry(a, *s, k);
  return a;
}

Allocation optimal_allocation(std::span<const Seller> sellers, Quantity q) {
  check_sellers(sellers);
  check_demand(sellers, q);
  return ExactSolver(sellers, q).allocation(q);
}

FairPriceCurve fair_price_curve(std::span<const Seller> sellers, Quantity q_max, AllocationMethod method) {
  check_sellers(sellers);
  if (q_max < 1) throw DomainError("q_max must be at least 1");

  FairPriceCurve curve;
  curve.q_feasible_max = total_availability(sellers);
  const Quantity q_hi = curve.q_feasible_max ? std::min(q_max, *curve.q_feasible_max) : q_max;
  if (q_hi < 1) return curve;

  curve.points.reserve(static_cast<std::size_t>(q_hi));
  if (method == AllocationMethod::Exact) {
    const ExactSolver solver(sellers, q_hi);
    for (Quantity q = 1; q <= q_hi; ++q) {
      Allocation a = solver.allocation(q);
      curve.points.push_back({q, a.fair_unit_price(), std::move(a)});
    }
  } else {
    for (Quantity q = 1; q <= q_hi; ++q) {
      Allocation a = greedy_allocation(sellers, q);
      curve.points.push_back({q, a.fair_unit_price(), std::move(a)});
    }
  }
  return curve;
}

OptimalPoint optimal_demand(std::span<const UnitPrice> prices) {
  if (prices.empty()) throw DomainError("optimal demand of an empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < prices.size(); ++i)
    if (prices[i] < prices[best]) best = i;
  return {static_cast<Quantity>(best + 1), prices[best]};
}

OptimalPoint optimal_demand(const FairPriceCurve& curve) {
  std::vector<UnitPrice> prices;
  prices.reserve(curve.points.size());
  for (const auto& p : curve.points) prices.push_back(p.price);
  return optimal_demand(prices);
}

}  // namespace fair
