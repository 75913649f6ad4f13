#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fair/allocation.hpp"

namespace fair {

/// Identifier written into every experiment output header.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/box-muller";

/// Portable seeded source: std::mt19937_64 bits, 53-bit uniforms and Box-Muller
/// normals computed here rather than by the standard library's distributions,
/// whose algorithms differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  double normal(double mean, double stddev);
  double lognormal(double log_mean, double log_stddev);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct NormalParams {
  double mean;
  double stddev;
};

/// Seller population. Defaults are the reference simulation settings: single-product
/// price N(100, 20), |discount rate| lognormal with underlying N(-2, 2),
/// saturation price N(60, 12), all in CU.
struct PopulationSpec {
  int n_sellers = 20;
  std::uint64_t seed = 1;
  NormalParams single_product_price{100.0, 20.0};
  NormalParams log_discount_rate{-2.0, 2.0};
  NormalParams saturation_price{60.0, 12.0};
  Availability availability = Availability::unlimited();
  double area_km = 100.0;  // seller positions uniform on [0, area_km]^2
  int max_retries = 1000;  // per seller
};

/// One raw draw of the three curve parameters, before any rejection.
struct CurveDraw {
  double single_product_price;
  double discount_rate;
  double saturation_price;
};

CurveDraw draw_curve_parameters(Rng& rng, const PopulationSpec& spec);

/// Linear-plateau sellers "S01".."Sn", redrawing until 0 < saturation < single-product price.
std::vector<Seller> generate_sellers(const PopulationSpec& spec);

struct ExperimentRun {
  Availability availability = Availability::unlimited();
  FairPriceCurve exact;
  std::vector<UnitPrice> greedy;
  OptimalPoint optimum{};
  bool nonmonotone = false;
  double max_greedy_gap = 0;     // max over q of (z_greedy - z_exact) / z_exact
  Quantity greedy_suboptimal = 0;  // points where greedy is strictly worse
  bool truncated = false;          // q_max exceeded the total availability
  std::optional<std::string> error;
};

struct ExperimentResult {
  PopulationSpec spec;
  Quantity q_max = kDefaultQuantitySweep;
  AllocationMethod method = AllocationMethod::Exact;
  std::vector<ExperimentRun> runs;  // one per requested availability, same order
};

/// Fair price curves of one seeded population under each homogeneous availability.
/// `threads` caps parallel runs (0 = serial); results do not depend on it.
ExperimentResult run_experiment(const PopulationSpec& spec, std::span<const Availability> availabilities,
                                Quantity q_max, AllocationMethod method = AllocationMethod::Exact,
                                unsigned threads = 0);

}  // namespace fair
