// Command-line driver: exact counts, sampling estimates, alpha sweeps and
// violation histograms, with CSV/JSON output and a reproducibility manifest.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tourcount/board.hpp"
#include "tourcount/errors.hpp"
#include "tourcount/exact.hpp"
#include "tourcount/experiment.hpp"
#include "tourcount/rng.hpp"
#include "tourcount/sampler.hpp"
#include "tourcount/stats.hpp"
#include "tourcount/version.hpp"

namespace {

using nlohmann::json;
using namespace tourcount;

// Six significant digits in scientific notation, the table format.
std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6E", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Alpha parse_alpha(const std::string& text) {
  if (text == "inf" || text == "INF" || text == "Inf" || text == "infinity")
    return Alpha::infinite();
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return Alpha::finite(v);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse alpha '" + text + "' (a real number or 'inf')");
  }
}

std::string alpha_text(Alpha a) { return a.is_infinite() ? "inf" : sci(a.value()); }

// Counts accept scientific notation ("5e5") but must be whole numbers.
std::int64_t parse_count(const std::string& text, const char* what) {
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + " '" + text + "'");
  }
  double rounded = std::nearbyint(v);
  if (!(rounded >= 1 && rounded <= 9.0e18) || std::abs(v - rounded) > 1e-6 * rounded)
    throw ConfigError(std::string(what) + " must be a positive whole number, got '" + text +
                      "'");
  return static_cast<std::int64_t>(rounded);
}

std::optional<Square> parse_start(const std::string& text) {
  if (text.empty()) return std::nullopt;
  int file = 0, rank = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d,%d%c", &file, &rank, &extra) != 2)
    throw ConfigError("cannot parse start square '" + text + "' (expected file,rank)");
  return Square{file, rank};
}

ViolationMin parse_violation_min(const std::string& text) {
  if (text == "all") return ViolationMin::kAllCandidates;
  if (text == "viable") return ViolationMin::kViableOnly;
  throw ConfigError("violation-min-over must be 'all' or 'viable', got '" + text + "'");
}

struct SampleOpts {
  int side = 8;
  std::string alpha = "1.5";
  std::string samples = "1e6";
  int reps = 21;
  std::uint64_t seed = 0;
  std::string target = "open-numberings";
  std::string start;
  int threads = 1;
  std::string format;
  std::string out;
  std::string manifest = "tourcount-manifest.json";
  std::string violation_min = "all";
  bool timing = false;
  bool assume_asymmetric = false;
};

void add_sample_flags(CLI::App* cmd, SampleOpts& o, const char* default_format) {
  o.format = default_format;
  cmd->add_option("--side", o.side, "Board side length")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "IS exponent (real or 'inf')")->capture_default_str();
  cmd->add_option("--samples", o.samples,
                  "Samples per replication, split across start classes (e.g. 5e5)")
      ->capture_default_str();
  cmd->add_option("--reps", o.reps, "Independent replications")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base seed; batch streams derive from it")
      ->capture_default_str();
  cmd->add_option("--target", o.target,
                  "Quantity: open-numberings | open-geometric | closed-diagrams")
      ->capture_default_str();
  cmd->add_option("--start", o.start, "Pin the start square 'file,rank' (default all classes)");
  cmd->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  cmd->add_option("--format", o.format, "Output format: csv | json")->capture_default_str();
  cmd->add_option("--out", o.out, "Write results here instead of stdout");
  cmd->add_option("--manifest", o.manifest, "Reproducibility manifest path")
      ->capture_default_str();
  cmd->add_option("--violation-min-over", o.violation_min,
                  "Violation rule minimum: all | viable")
      ->capture_default_str();
  cmd->add_flag("--timing", o.timing,
                "Report measured CPU seconds (default prints 0 to keep output "
                "byte-reproducible)");
  cmd->add_flag("--assume-asymmetric", o.assume_asymmetric,
                "Apply the /16 geometric conversion off the 8x8 board");
}

struct RunOutput {
  std::string text;    // body written to --out or stdout
  json manifest_core;  // command-specific manifest fields
};

void check_format(const std::string& format) {
  if (format != "csv" && format != "json")
    throw ConfigError("format must be 'csv' or 'json', got '" + format + "'");
}

Estimate estimate_for_target(const std::string& target, const std::vector<BatchResult>& batches,
                             bool assume_asymmetric) {
  if (target == "open-numberings") return estimate_numberings(batches);
  if (target == "open-geometric")
    return to_geometric(estimate_numberings(batches), assume_asymmetric);
  if (target == "closed-diagrams") return estimate_closed_diagrams(batches);
  throw ConfigError("unknown target '" + target + "'");
}

double min_of(const std::vector<double>& v) {
  double m = v.front();
  for (double x : v) m = std::min(m, x);
  return m;
}

double max_of(const std::vector<double>& v) {
  double m = v.front();
  for (double x : v) m = std::max(m, x);
  return m;
}

std::string csv_header() { return "alpha,min,point,max,std_error,cpu_seconds\n"; }

std::string csv_row(Alpha alpha, const Estimate& e, double cpu_seconds) {
  return alpha_text(alpha) + "," + sci(min_of(e.replication_points)) + "," + sci(e.point) +
         "," + sci(max_of(e.replication_points)) + "," + sci(e.std_error) + "," +
         sci(cpu_seconds) + "\n";
}

json estimate_json(const Estimate& e, double cpu_seconds, const std::string& target) {
  json j;
  j["target"] = target;
  j["alpha"] = e.alpha.is_infinite() ? json("inf") : json(e.alpha.value());
  j["point"] = e.point;
  j["std_error"] = e.std_error;
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["std_error_within"] = e.std_error_within;
  j["min"] = min_of(e.replication_points);
  j["max"] = max_of(e.replication_points);
  j["replications"] = e.replications;
  j["replication_points"] = e.replication_points;
  j["samples_total"] = e.samples_total;
  j["successes"] = e.successes;
  j["cpu_seconds"] = cpu_seconds;
  j["zero_success_warning"] = e.successes == 0;
  j["display"] = {{"point", sci(e.point)},
                  {"std_error", sci(e.std_error)},
                  {"ci_low", sci(e.ci_low)},
                  {"ci_high", sci(e.ci_high)}};
  return j;
}

void warn_if_zero_success(const Estimate& e) {
  if (e.successes == 0)
    std::cerr << "warning: no successful tours were sampled; the estimate is 0 and its "
                 "uncertainty is not informative\n";
}

json classes_json(const ExperimentPlan& plan) {
  json out = json::array();
  for (std::size_t c = 0; c < plan.classes.size(); ++c)
    out.push_back({{"representative",
                    {plan.classes[c].representative.file, plan.classes[c].representative.rank}},
                   {"multiplicity", plan.classes[c].multiplicity},
                   {"samples_per_replication", plan.samples_per_class[c]}});
  return out;
}

// Shared flow of estimate/sweep/histogram: plan, run, format rows.
struct SampleRun {
  Board board;
  ExperimentPlan plan;
  std::vector<BatchResult> batches;
  double cpu_seconds_per_rep = 0.0;  // measured only with --timing
};

SampleRun run_sampling(const SampleOpts& o, Alpha alpha) {
  SampleRun run{Board(o.side), {}, {}, 0.0};
  run.plan = make_plan(run.board, alpha, parse_count(o.samples, "samples"), o.reps, o.seed,
                       parse_start(o.start), parse_violation_min(o.violation_min));
  std::cerr << "running side=" << o.side << " alpha=" << (alpha.is_infinite() ? "inf" : o.alpha)
            << " classes=" << run.plan.classes.size() << " reps=" << o.reps
            << " samples/rep=" << run.plan.total_samples_per_replication()
            << " threads=" << o.threads << "\n";
  std::clock_t cpu0 = std::clock();
  run.batches = run_experiment(run.board, run.plan, o.threads);
  if (o.timing)
    run.cpu_seconds_per_rep =
        static_cast<double>(std::clock() - cpu0) / CLOCKS_PER_SEC / o.reps;
  return run;
}

RunOutput cmd_estimate(const SampleOpts& o) {
  check_format(o.format);
  Alpha alpha = parse_alpha(o.alpha);
  SampleRun run = run_sampling(o, alpha);
  Estimate e = estimate_for_target(o.target, run.batches, o.assume_asymmetric);
  warn_if_zero_success(e);

  RunOutput out;
  if (o.format == "csv") {
    out.text = csv_header() + csv_row(alpha, e, run.cpu_seconds_per_rep);
  } else {
    out.text = estimate_json(e, run.cpu_seconds_per_rep, o.target).dump(2) + "\n";
  }
  out.manifest_core = {{"command", "estimate"}, {"classes", classes_json(run.plan)}};
  return out;
}

RunOutput cmd_sweep(const SampleOpts& o, const std::string& alphas_text) {
  check_format(o.format);
  std::vector<std::string> alpha_items;
  std::string item;
  for (char c : alphas_text + ",") {
    if (c == ',') {
      if (!item.empty()) alpha_items.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (alpha_items.empty()) throw ConfigError("the alpha list is empty");

  RunOutput out;
  json rows = json::array();
  if (o.format == "csv") out.text = csv_header();
  json classes;
  for (const std::string& text : alpha_items) {
    Alpha alpha = parse_alpha(text);
    SampleOpts per = o;
    per.alpha = text;
    SampleRun run = run_sampling(per, alpha);
    Estimate e = estimate_for_target(o.target, run.batches, o.assume_asymmetric);
    warn_if_zero_success(e);
    if (o.format == "csv")
      out.text += csv_row(alpha, e, run.cpu_seconds_per_rep);
    else
      rows.push_back(estimate_json(e, run.cpu_seconds_per_rep, o.target));
    if (classes.is_null()) classes = classes_json(run.plan);
  }
  if (o.format == "json") out.text = rows.dump(2) + "\n";
  out.manifest_core = {{"command", "sweep"},
                       {"alphas", alpha_items},
                       {"classes", classes}};
  return out;
}

RunOutput cmd_histogram(const SampleOpts& o) {
  check_format(o.format);
  Alpha alpha = parse_alpha(o.alpha);
  SampleRun run = run_sampling(o, alpha);
  ViolationHistogramEstimate hist = estimate_violation_histogram(run.batches);

  RunOutput out;
  if (o.format == "csv") {
    out.text = "k,point,std_error\n";
    for (std::size_t k = 0; k < hist.per_k.size(); ++k)
      out.text += std::to_string(k) + "," + sci(hist.per_k[k].point) + "," +
                  sci(hist.per_k[k].std_error) + "\n";
  } else {
    json rows = json::array();
    for (std::size_t k = 0; k < hist.per_k.size(); ++k)
      rows.push_back({{"k", k},
                      {"point", hist.per_k[k].point},
                      {"std_error", hist.per_k[k].std_error},
                      {"display", {{"point", sci(hist.per_k[k].point)}}}});
    json j = {{"geometric_units", hist.geometric_units}, {"per_k", rows}};
    out.text = j.dump(2) + "\n";
  }
  out.manifest_core = {{"command", "histogram"},
                       {"geometric_units", hist.geometric_units},
                       {"classes", classes_json(run.plan)}};
  return out;
}

json config_json(const SampleOpts& o) {
  json start = nullptr;
  if (auto s = parse_start(o.start)) start = {s->file, s->rank};
  return {{"side", o.side},
          {"alpha", o.alpha},
          {"samples", o.samples},
          {"reps", o.reps},
          {"seed", o.seed},
          {"target", o.target},
          {"start", start},
          {"threads", o.threads},
          {"format", o.format},
          {"violation_min_over", o.violation_min},
          {"timing", o.timing},
          {"assume_asymmetric", o.assume_asymmetric}};
}

void write_manifest(const SampleOpts& o, const RunOutput& result, double wall_seconds) {
  if (o.manifest.empty()) return;
  json manifest = result.manifest_core;
  manifest["tool"] = {{"name", "tourcount"}, {"version", kVersion}};
  manifest["prng"] = {
      {"algorithm", kRngAlgorithm},
      {"stream_derivation",
       "seed(class c, replication r) = mix64(mix64(mix64(base) ^ (0x517CC1B727220A95*(c+1))) "
       "^ (0x2545F4914F6CDD1D*(r+1))) with mix64 the splitmix64 finalizer"}};
  manifest["config"] = config_json(o);
  manifest["wall_time_seconds"] = wall_seconds;
  manifest["outputs"] = json::array(
      {{{"path", o.out.empty() ? "stdout" : o.out},
        {"bytes", result.text.size()},
        {"fnv1a64", hex64(fnv1a64(result.text))}}});
  std::ofstream f(o.manifest);
  if (!f) throw std::runtime_error("cannot write manifest to " + o.manifest);
  f << manifest.dump(2) << "\n";
}

void deliver(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write output to " + out_path);
  f << text;
}

int run_sample_command(const SampleOpts& o,
                       const std::function<RunOutput(const SampleOpts&)>& command) {
  auto wall0 = std::chrono::steady_clock::now();
  RunOutput result = command(o);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  deliver(result.text, o.out);
  write_manifest(o, result, wall);
  return 0;
}

struct ExactOpts {
  int side = 5;
  std::string target = "open-numberings";
  std::string start;
  int exact_limit = kDefaultExactLimit;
};

int cmd_exact(const ExactOpts& o) {
  Board board(o.side);
  std::optional<Square> start = parse_start(o.start);
  std::uint64_t count = 0;
  if (o.target == "open-numberings") {
    count = start ? count_open_numberings_from(board, *start, o.exact_limit)
                  : count_open_numberings(board, o.exact_limit);
  } else if (o.target == "closed-diagrams") {
    count = start ? count_closed_numberings_from(board, *start, o.exact_limit) / 2
                  : count_closed_diagrams(board, o.exact_limit);
  } else if (o.target == "open-geometric") {
    throw ConfigError(
        "exact open-geometric counts are not available: the /16 conversion is a "
        "sampling-side identity; enumerate open-numberings instead");
  } else {
    throw ConfigError("unknown target '" + o.target + "'");
  }
  std::cout << count << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knight's tour counting: exact enumeration and importance sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ExactOpts exact_opts;
  CLI::App* exact = app.add_subcommand("exact", "Exact tour counts on small boards");
  exact->add_option("--side", exact_opts.side, "Board side length")->capture_default_str();
  exact->add_option("--target", exact_opts.target,
                    "Quantity: open-numberings | closed-diagrams")
      ->capture_default_str();
  exact->add_option("--start", exact_opts.start, "Count from this square only ('file,rank')");
  exact->add_option("--exact-limit", exact_opts.exact_limit,
                    "Largest side the enumerator will accept")
      ->capture_default_str();

  SampleOpts estimate_opts;
  CLI::App* estimate = app.add_subcommand("estimate", "One sampling estimate");
  add_sample_flags(estimate, estimate_opts, "json");

  SampleOpts sweep_opts;
  std::string sweep_alphas = "-1,0,0.5,1,1.5,2,2.5,3,4,5,8,10";
  CLI::App* sweep = app.add_subcommand("sweep", "Estimate across a list of alphas");
  add_sample_flags(sweep, sweep_opts, "csv");
  sweep->add_option("--alphas", sweep_alphas, "Comma-separated alpha values")
      ->capture_default_str();

  SampleOpts hist_opts;
  CLI::App* histogram =
      app.add_subcommand("histogram", "Weight mass by Warnsdorff-violation count");
  add_sample_flags(histogram, hist_opts, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (exact->parsed()) return cmd_exact(exact_opts);
    if (estimate->parsed()) return run_sample_command(estimate_opts, cmd_estimate);
    if (sweep->parsed())
      return run_sample_command(sweep_opts, [&](const SampleOpts& o) {
        return cmd_sweep(o, sweep_alphas);
      });
    if (histogram->parsed()) return run_sample_command(hist_opts, cmd_histogram);
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
