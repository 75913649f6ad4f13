#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace fair {

using Quantity = std::int64_t;

/// Currency amount in micro currency units (1 CU = 1'000'000 micros).
/// All pricing arithmetic is carried out on these integers so results are
/// bit-exact and platform independent.
class Money {
 public:
  static constexpr std::int64_t kMicrosPerUnit = 1'000'000;

  constexpr Money() = default;
  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }
  /// Nearest micro, ties away from zero.
  static Money from_units(double units);
  /// Exact decimal parse ("4.69", "-0.5", "100"); at most six fractional digits.
  static Money parse(std::string_view text);

  constexpr std::int64_t micros() const { return micros_; }
  double units() const { return static_cast<double>(micros_) / kMicrosPerUnit; }

  /// Decimal rendering with trailing zeros trimmed, at least two fractional digits.
  std::string str() const;

  constexpr auto operator<=>(const Money&) const = default;

  constexpr Money& operator+=(Money o) { micros_ += o.micros_; return *this; }
  constexpr Money& operator-=(Money o) { micros_ -= o.micros_; return *this; }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) { return a -= b; }
  friend constexpr Money operator*(Money a, Quantity q) { return Money(a.micros_ * q); }
  friend constexpr Money operator*(Quantity q, Money a) { return Money(a.micros_ * q); }

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

std::ostream& operator<<(std::ostream& os, Money m);

/// Exact unit price as total / quantity, e.g. a fair price of 32/3 CU.
/// Comparisons cross-multiply in 128-bit integers.
class UnitPrice {
 public:
  UnitPrice() = default;
  UnitPrice(Money total, Quantity quantity);
  explicit UnitPrice(Money per_unit) : total_(per_unit), quantity_(1) {}

  Money total() const { return total_; }
  Quantity quantity() const { return quantity_; }

  /// Nearest micro, ties away from zero.
  Money rounded() const;
  double units() const;
  std::string str() const { return rounded().str(); }

  friend bool operator==(const UnitPrice& a, const UnitPrice& b);
  friend std::strong_ordering operator<=>(const UnitPrice& a, const UnitPrice& b);

 private:
  Money total_;
  Quantity quantity_ = 1;
};

std::ostream& operator<<(std::ostream& os, const UnitPrice& p);

/// Integer division of a 128-bit numerator, rounding half away from zero.
std::int64_t divide_rounded(__int128 numerator, __int128 denominator);

}  // namespace fair
