#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "fair/errors.hpp"
#include "fair/io.hpp"
#include "fair/scenario.hpp"

namespace fair::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;

  std::string input;
  Quantity q_max = kDefaultQuantitySweep;
  Quantity q = 0;
  std::string method = "exact";
  double radius = 0.5;
  int min_visits = 2;
  int min_buyers = 2;
};

OutputFormat output_format(const Options& o) { return o.format == "json" ? OutputFormat::Json : OutputFormat::Csv; }
std::string extension(const Options& o) { return o.format == "json" ? ".json" : ".csv"; }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

void emit(const Table& table, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    write_table(out, table, output_format(o));
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw InputError("cannot write " + o.out);
  write_table(file, table, output_format(o));
}

void write_file(const fs::path& path, const Table& table, OutputFormat format) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path.string());
  write_table(file, table, format);
}

std::vector<NamedCurve> named_curves(const std::vector<Seller>& sellers) {
  std::vector<NamedCurve> out;
  for (const auto& s : sellers) out.emplace_back(s.id, s.curve);
  return out;
}

unsigned thread_cap() {
  if (const char* env = std::getenv("FAIR_ENGINE_THREADS")) {
    try {
      const long v = std::stol(env);
      return v > 0 ? static_cast<unsigned>(v) : 0;
    } catch (const std::exception&) {
      throw InputError(std::string("FAIR_ENGINE_THREADS must be an integer, got '") + env + "'");
    }
  }
  return std::thread::hardware_concurrency();
}

int cmd_envelope(const Options& o, std::ostream& out) {
  auto in = open_input(o.input);
  const auto sellers = parse_curve_file(in);
  const auto curves = named_curves(sellers);
  const Envelope env = lower_envelope(curves, o.q_max);

  Table t = envelope_table(env);
  for (const auto& s : env.segments)
    t.notes.push_back("segment " + std::to_string(s.from) + ".." + std::to_string(s.to) + " " + s.seller);
  emit(t, o, out);
  if (!o.out.empty())
    for (const auto& s : env.segments) out << "segment " << s.from << ".." << s.to << " " << s.seller << '\n';
  return kOk;
}

int cmd_allocate(const Options& o, std::ostream& out) {
  auto in = open_input(o.input);
  const auto sellers = parse_curve_file(in);
  const Allocation a = parse_method(o.method) == AllocationMethod::Exact ? optimal_allocation(sellers, o.q)
                                                                          : greedy_allocation(sellers, o.q);
  Table t = allocation_table(a);
  t.notes.push_back("method=" + o.method + " total_cost=" + a.total_cost.str());
  emit(t, o, out);
  return kOk;
}

int cmd_curve(const Options& o, std::ostream& out, std::ostream& err) {
  auto in = open_input(o.input);
  const auto sellers = parse_curve_file(in);
  const FairPriceCurve curve = fair_price_curve(sellers, o.q_max, parse_method(o.method));
  if (curve.empty()) throw InfeasibleError("no stock available at any seller", 1);
  if (curve.q_end() < o.q_max)
    err << "notice: q_max " << o.q_max << " truncated to total availability " << curve.q_end() << '\n';
  const OptimalPoint best = optimal_demand(curve);
  Table t = fair_curve_table(curve);
  t.notes.push_back("method=" + o.method + " q_star=" + std::to_string(best.q_star) + " z_star=" + best.z_star.str());
  emit(t, o, out);
  return kOk;
}

int cmd_pickups(const Options& o, std::ostream& out) {
  auto in = open_input(o.input);
  const auto histories = parse_positions_file(in);
  emit(pickup_table(suggest_pickups(histories, o.radius, o.min_visits, o.min_buyers)), o, out);
  return kOk;
}

int cmd_fair_sim(const Options& o, std::ostream& out) {
  auto in = open_input(o.input);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("scenario is not valid JSON: ") + e.what());
  }
  const Scenario scenario = parse_scenario(doc, fs::path(o.input).parent_path());
  const ReplayResult result = replay(scenario);

  const Settlement& s = result.settlement;
  if (s.buyer_total < s.seller_total || s.manager_revenue != s.buyer_total - s.seller_total) {
    throw std::logic_error("settlement violates buyer_total >= seller_total");
  }

  if (o.out.empty()) {
    for (const auto& record : result.log) out << record.dump() << '\n';
    return kOk;
  }
  const fs::path dir = o.out;
  fs::create_directories(dir);
  {
    std::ofstream log(dir / "events.jsonl", std::ios::binary);
    if (!log) throw InputError("cannot write " + (dir / "events.jsonl").string());
    for (const auto& record : result.log) log << record.dump() << '\n';
  }
  const auto format = output_format(o);
  write_file(dir / ("buyers" + extension(o)), buyer_settlement_table(s), format);
  write_file(dir / ("sellers" + extension(o)), seller_settlement_table(s), format);
  if (result.plan) write_file(dir / ("plan" + extension(o)), shipping_plan_table(*result.plan), format);
  out << "fair " << scenario.fair_id << ": " << to_string(result.end_status) << ", demand "
      << s.allocation.total_quantity << ", buyers pay " << s.buyer_total << ", sellers receive " << s.seller_total
      << ", manager revenue " << s.manager_revenue << '\n';
  return kOk;
}

int cmd_experiment(const Options& o, std::ostream& out, std::ostream& err) {
  auto in = open_input(o.input);
  ExperimentConfig cfg = parse_experiment_config(in);
  if (o.seed) cfg.spec.seed = *o.seed;

  const ExperimentResult result =
      run_experiment(cfg.spec, cfg.availabilities, cfg.q_max, cfg.method, thread_cap());

  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  const auto format = output_format(o);
  std::size_t failures = 0;
  for (const auto& run : result.runs) {
    const std::string label = run.availability.str();
    if (run.error) {
      ++failures;
      err << "availability " << label << ": " << *run.error << '\n';
      continue;
    }
    if (run.truncated)
      err << "notice: availability " << label << ": q_max " << cfg.q_max << " truncated to " << run.exact.q_end()
          << '\n';
    write_file(dir / ("curve_" + label + extension(o)), experiment_curve_table(result, run), format);
  }
  write_file(dir / ("summary" + extension(o)), experiment_summary_table(result), format);
  out << "wrote " << result.runs.size() - failures << " curve file(s) and summary to " << dir.string() << '\n';
  return failures == result.runs.size() ? kInfeasible : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fair engine: double-side aggregation of buyers and sellers"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Options o;
  app.add_option("--out", o.out, "Output file (or directory for fair-sim/experiment)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", o.seed, "Seed override for randomized commands");

  auto* envelope = app.add_subcommand("envelope", "Lower envelope of seller curves");
  envelope->add_option("curves", o.input, "Curve file")->required();
  envelope->add_option("--q-max", o.q_max, "Largest quantity")->check(CLI::PositiveNumber);

  auto* allocate = app.add_subcommand("allocate", "Split a demand across sellers");
  allocate->add_option("curves", o.input, "Curve file with availabilities")->required();
  allocate->add_option("--q", o.q, "Demand")->required()->check(CLI::PositiveNumber);
  allocate->add_option("--method", o.method, "Allocation method")->check(CLI::IsMember({"exact", "greedy"}));

  auto* curve = app.add_subcommand("curve", "Fair price curve z(q) and its optimum");
  curve->add_option("curves", o.input, "Curve file with availabilities")->required();
  curve->add_option("--q-max", o.q_max, "Largest quantity")->check(CLI::PositiveNumber);
  curve->add_option("--method", o.method, "Allocation method")->check(CLI::IsMember({"exact", "greedy"}));

  auto* sim = app.add_subcommand("fair-sim", "Replay a fair scenario");
  sim->add_option("scenario", o.input, "Scenario JSON file")->required();

  auto* experiment = app.add_subcommand("experiment", "Seeded population experiment");
  experiment->add_option("config", o.input, "Experiment config file")->required();

  auto* pickups = app.add_subcommand("pickups", "Suggest shared pickup points from position histories");
  pickups->add_option("positions", o.input, "Positions CSV")->required();
  pickups->add_option("--radius", o.radius, "Cell radius in km")->check(CLI::PositiveNumber);
  pickups->add_option("--min-visits", o.min_visits, "Visits needed to attend a cell");
  pickups->add_option("--min-buyers", o.min_buyers, "Buyers needed to suggest a cell");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (envelope->parsed()) return cmd_envelope(o, out);
    if (allocate->parsed()) return cmd_allocate(o, out);
    if (curve->parsed()) return cmd_curve(o, out, err);
    if (sim->parsed()) return cmd_fair_sim(o, out);
    if (experiment->parsed()) return cmd_experiment(o, out, err);
    if (pickups->parsed()) return cmd_pickups(o, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace fair::cli
