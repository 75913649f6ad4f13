#include "fair/synth.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "fair/errors.hpp"

namespace fair {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal(double mean, double stddev) {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return mean + stddev * z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return mean + stddev * radius * std::cos(angle);
}

double Rng::lognormal(double log_mean, double log_stddev) { return std::exp(normal(log_mean, log_stddev)); }

CurveDraw draw_curve_parameters(Rng& rng, const PopulationSpec& spec) {
  CurveDraw d{};
  d.single_product_price = rng.normal(spec.single_product_price.mean, spec.single_product_price.stddev);
  d.discount_rate = rng.lognormal(spec.log_discount_rate.mean, spec.log_discount_rate.stddev);
  d.saturation_price = rng.normal(spec.saturation_price.mean, spec.saturation_price.stddev);
  return d;
}

std::vector<Seller> generate_sellers(const PopulationSpec& spec) {
  if (spec.n_sellers < 1) throw DomainError("population needs at least one seller");
  if (spec.max_retries < 1) throw DomainError("max_retries must be at least 1");

  Rng rng(spec.seed);
  const auto width = std::to_string(spec.n_sellers).size() < 2 ? 2 : std::to_string(spec.n_sellers).size();
  std::vector<Seller> sellers;
  for (int i = 1; i <= spec.n_sellers; ++i) {
    std::optional<PriceCurve> curve;
    for (int attempt = 0; attempt < spec.max_retries && !curve; ++attempt) {
      const CurveDraw d = draw_curve_parameters(rng, spec);
      const Money p1 = Money::from_units(d.single_product_price);
      const Money rate = Money::from_units(d.discount_rate);
      const Money sat = Money::from_units(d.saturation_price);
      if (p1 > Money{} && sat > Money{} && sat < p1 && rate >= Money{}) curve = make_linear_curve(p1, rate, sat);
    }
    if (!curve) throw DomainError("rejection sampling exceeded " + std::to_string(spec.max_retries) + " retries");

    std::string id = std::to_string(i);
    id.insert(0, width - id.size(), '0');
    Position where{rng.uniform() * spec.area_km, rng.uniform() * spec.area_km};
    sellers.push_back({"S" + id, std::move(*curve), spec.availability, where});
  }
  return sellers;
}

namespace {

ExperimentRun run_one(std::vector<Seller> sellers, Availability availability, Quantity q_max,
                      AllocationMethod method) {
  ExperimentRun run;
  run.availability = availability;
  for (auto& s : sellers) s.availability = availability;

  run.exact = fair_price_curve(sellers, q_max, AllocationMethod::Exact);
  run.truncated = run.exact.q_end() < q_max;
  if (run.exact.empty()) {
    run.error = "no feasible demand (total availability 0)";
    return run;
  }

  const FairPriceCurve greedy = fair_price_curve(sellers, q_max, AllocationMethod::Greedy);
  for (const auto& p : greedy.points) run.greedy.push_back(p.price);

  for (Quantity q = 1; q <= run.exact.q_end(); ++q) {
    const UnitPrice& z = run.exact.at(q).price;
    const UnitPrice& g = run.greedy[static_cast<std::size_t>(q - 1)];
    if (q > 1 && run.exact.at(q - 1).price < z) run.nonmonotone = true;
    if (g > z) {
      ++run.greedy_suboptimal;
      run.max_greedy_gap = std::max(run.max_greedy_gap, (g.units() - z.units()) / z.units());
    }
  }
  run.optimum = method == AllocationMethod::Exact ? optimal_demand(run.exact) : optimal_demand(run.greedy);
  return run;
}

}  // namespace

ExperimentResult run_experiment(const PopulationSpec& spec, std::span<const Availability> availabilities,
                                Quantity q_max, AllocationMethod method, unsigned threads) {
  if (q_max < 1) throw DomainError("q_max must be at least 1");
  ExperimentResult result;
  result.spec = spec;
  result.q_max = q_max;
  result.method = method;
  result.runs.resize(availabilities.size());

  const std::vector<Seller> population = generate_sellers(spec);
  auto work = [&](std::size_t i) {
    try {
      result.runs[i] = run_one(population, availabilities[i], q_max, method);
    } catch (const std::exception& e) {
      result.runs[i].availability = availabilities[i];
      result.runs[i].error = e.what();
    }
  };

  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(availabilities.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < availabilities.size(); ++i) work(i);
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < availabilities.size();) work(i);
    });
  pool.clear();
  return result;
}

}  // namespace fair
