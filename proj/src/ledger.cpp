#include <algorithm>

#include "fair/errors.hpp"
#include "fair/fair.hpp"

namespace fair {

void SellerLedger::add_sellers(std::span<const Seller> sellers) {
  std::lock_guard lock(mutex_);
  for (const auto& s : sellers) entries_.try_emplace(s.id, Entry{s.availability, 0});
}

const SellerLedger::Entry& SellerLedger::entry(const SellerId& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw DomainError("seller '" + id + "' is not registered in the ledger");
  return it->second;
}

Availability SellerLedger::remaining(const SellerId& id) const {
  std::lock_guard lock(mutex_);
  const Entry& e = entry(id);
  if (e.total.is_unlimited()) return e.total;
  return Availability::limited(e.total.limit() - e.committed);
}

Quantity SellerLedger::committed(const SellerId& id) const {
  std::lock_guard lock(mutex_);
  return entry(id).committed;
}

Availability SellerLedger::total(const SellerId& id) const {
  std::lock_guard lock(mutex_);
  return entry(id).total;
}

std::vector<Seller> SellerLedger::restrict(std::span<const Seller> sellers) const {
  std::vector<Seller> out(sellers.begin(), sellers.end());
  for (auto& s : out) s.availability = remaining(s.id);
  return out;
}

bool SellerLedger::try_commit(const Allocation& allocation) {
  std::lock_guard lock(mutex_);
  for (const auto& e : allocation.entries) {
    const Entry& current = entry(e.seller);
    if (!current.total.is_unlimited() && current.committed + e.quantity > current.total.limit()) return false;
  }
  for (const auto& e : allocation.entries) entries_[e.seller].committed += e.quantity;
  return true;
}

}  // namespace fair
