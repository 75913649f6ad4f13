#include "fair/money.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "fair/errors.hpp"

namespace fair {

std::int64_t divide_rounded(__int128 numerator, __int128 denominator) {
  if (denominator == 0) throw DomainError("division by zero");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const bool negative = numerator < 0;
  const __int128 magnitude = negative ? -numerator : numerator;
  const __int128 q = (2 * magnitude + denominator) / (2 * denominator);
  return static_cast<std::int64_t>(negative ? -q : q);
}

Money Money::from_units(double units) {
  if (!std::isfinite(units)) throw DomainError("non-finite money value");
  const double scaled = std::round(units * kMicrosPerUnit);
  if (std::fabs(scaled) > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 4))
    throw DomainError("money value out of range");
  return Money(static_cast<std::int64_t>(scaled));
}

Money Money::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) throw InputError("empty money value");

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::int64_t whole = 0, frac = 0;
  int frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) throw InputError("malformed money value '" + std::string(text) + "'");
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (seen_dot) {
        if (++frac_digits > 6)
          throw InputError("more than six decimals in '" + std::string(text) + "'");
        frac = frac * 10 + (c - '0');
      } else {
        if (whole > 1'000'000'000'000LL) throw InputError("money value out of range");
        whole = whole * 10 + (c - '0');
      }
    } else {
      throw InputError("malformed money value '" + std::string(text) + "'");
    }
  }
  if (!seen_digit) throw InputError("malformed money value '" + std::string(text) + "'");
  for (int i = frac_digits; i < 6; ++i) frac *= 10;
  const std::int64_t micros = whole * kMicrosPerUnit + frac;
  return Money(negative ? -micros : micros);
}

std::string Money::str() const {
  const bool negative = micros_ < 0;
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(micros_ + 1)) + 1 : static_cast<std::uint64_t>(micros_);
  std::string frac = std::to_string(magnitude % kMicrosPerUnit);
  frac.insert(0, 6 - frac.size(), '0');
  while (frac.size() > 2 && frac.back() == '0') frac.pop_back();
  return (negative ? "-" : "") + std::to_string(magnitude / kMicrosPerUnit) + "." + frac;
}

std::ostream& operator<<(std::ostream& os, Money m) { return os << m.str(); }

UnitPrice::UnitPrice(Money total, Quantity quantity) : total_(total), quantity_(quantity) {
  if (quantity <= 0) throw DomainError("unit price needs a positive quantity");
}

Money UnitPrice::rounded() const {
  return Money::from_micros(divide_rounded(total_.micros(), quantity_));
}

double UnitPrice::units() const {
  return static_cast<double>(total_.micros()) / static_cast<double>(quantity_) / Money::kMicrosPerUnit;
}

bool operator==(const UnitPrice& a, const UnitPrice& b) {
  return static_cast<__int128>(a.total_.micros()) * b.quantity_ ==
         static_cast<__int128>(b.total_.micros()) * a.quantity_;
}

std::strong_ordering operator<=>(const UnitPrice& a, const UnitPrice& b) {
  const __int128 lhs = static_cast<__int128>(a.total_.micros()) * b.quantity_;
  const __int128 rhs = static_cast<__int128>(b.total_.micros()) * a.quantity_;
  return lhs <=> rhs;
}

std::ostream& operator<<(std::ostream& os, const UnitPrice& p) { return os << p.str(); }

}  // namespace fair
