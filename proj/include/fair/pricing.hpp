#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fair/money.hpp"

namespace fair {

using SellerId = std::string;

/// Slope starting at the single-product price, clamped at a saturation plateau:
/// z(q) = max(p1 - rate * (q - 1), saturation).
struct LinearPlateau {
  Money single_product_price;
  Money discount_rate;  // per unit of quantity
  Money saturation_price;
};

/// One step of a tabular curve: `price` applies from `threshold` up to the next band.
struct PriceBand {
  Quantity threshold;
  Money price;
};

struct Tabular {
  std::vector<PriceBand> bands;
};

/// A seller's monotone non-increasing unit price as a function of the quantity
/// bought from it. Defined for every q >= 1; availability lives on the seller.
class PriceCurve {
 public:
  using Form = std::variant<LinearPlateau, Tabular>;

  const Form& form() const { return form_; }
  bool is_linear() const { return std::holds_alternative<LinearPlateau>(form_); }

  /// Unit price when buying `q` units. Throws DomainError for q < 1.
  Money operator()(Quantity q) const;

 private:
  explicit PriceCurve(Form form) : form_(std::move(form)) {}
  friend PriceCurve make_linear_curve(Money, Money, Money);
  friend PriceCurve make_tabular_curve(std::vector<PriceBand>);

  Form form_;
};

PriceCurve make_linear_curve(Money single_product_price, Money discount_rate, Money saturation_price);
PriceCurve make_tabular_curve(std::vector<PriceBand> bands);

inline Money eval_curve(const PriceCurve& curve, Quantity q) { return curve(q); }

struct EnvelopePoint {
  Quantity quantity;
  SellerId best_seller;
  Money unit_price;
};

struct EnvelopeSegment {
  Quantity from;
  Quantity to;
  SellerId seller;
};

/// Pointwise minimum of several curves over 1..q_max, labelled by the winning seller.
struct Envelope {
  std::vector<EnvelopePoint> points;
  std::vector<EnvelopeSegment> segments;

  Money at(Quantity q) const { return points.at(static_cast<std::size_t>(q - 1)).unit_price; }
};

using NamedCurve = std::pair<SellerId, PriceCurve>;

inline constexpr Quantity kDefaultQuantitySweep = 200;

/// Ties go to the lexicographically lowest seller id.
Envelope lower_envelope(std::span<const NamedCurve> sellers, Quantity q_max = kDefaultQuantitySweep);

}  // namespace fair
