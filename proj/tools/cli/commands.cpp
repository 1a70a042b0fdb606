#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlx/error.hpp"
#include "mlx/extraction.hpp"
#include "mlx/io.hpp"
#include "mlx/metrics.hpp"
#include "mlx/network.hpp"
#include "mlx/refinement.hpp"
#include "mlx/simgen.hpp"
#include "mlx/version.hpp"

namespace mlx::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class UsageError : public Error {
public:
  using Error::Error;
};

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string format_number(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

// --threads wins, then MLX_THREADS, then 0 (all hardware threads).
std::size_t resolve_threads(const std::optional<long long>& flag) {
  long long value = 0;
  if (flag) {
    value = *flag;
  } else if (const char* env = std::getenv("MLX_THREADS"); env && *env) {
    try {
      std::size_t used = 0;
      value = std::stoll(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError("MLX_THREADS must be a non-negative integer, got '" + std::string(env) + "'");
    }
  }
  if (value < 0) throw UsageError("thread count must be non-negative");
  return static_cast<std::size_t>(value);
}

std::optional<double> parse_beta(const std::string& text) {
  if (text == "auto") return std::nullopt;
  double beta = 0.0;
  try {
    std::size_t used = 0;
    beta = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("--beta expects 'auto' or a number in [0, 1], got '" + text + "'");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) throw UsageError("--beta must lie in [0, 1]");
  return beta;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path stem = out;
  stem.replace_extension();
  return fs::path(stem.string() + suffix);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path.string() + "'");
  return file;
}

void write_json_file(const fs::path& path, const json& doc) {
  auto file = open_output(path);
  file << doc.dump(1) << '\n';
}

json report_header(const std::string& command) {
  json report;
  report["version"] = std::string(kVersion);
  report["command"] = command;
  return report;
}

// ---- extract --------------------------------------------------------------

struct ExtractFlags {
  std::string input;
  std::string beta = "auto";
  std::string gamma = "linear";
  std::uint64_t seed = 0;
  std::optional<long long> threads;
  std::size_t sample = 0;
  bool labeled = false;
  bool frontier = false;
  std::string out = "communities.json";
};

void add_extract(CLI::App& app, ExtractFlags& f) {
  app.add_option("--input", f.input, "Edge list: layer u v per row")->required();
  app.add_option("--beta", f.beta, "Overlap bound in [0, 1] or 'auto'");
  app.add_option("--gamma", f.gamma, "Layer scaling: constant, linear or quadratic");
  app.add_option("--seed", f.seed, "Seed for sampled seed sets");
  app.add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  app.add_option("--sample", f.sample, "Extract from this many sampled seeds instead of all");
  app.add_flag("--labeled", f.labeled, "Vertex and layer tokens are names, not ids");
  app.add_flag("--frontier", f.frontier, "Score only B and its neighbors during vertex search");
  app.add_option("--out", f.out, "Communities JSON path");
}

int run_extract(const ExtractFlags& f, std::ostream& out) {
  const auto started = Clock::now();
  const auto beta = parse_beta(f.beta);
  ExtractionConfig config;
  try {
    config.scaling = parse_scaling(f.gamma);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  config.rng_seed = f.seed;
  config.worker_count = resolve_threads(f.threads);
  config.frontier_only = f.frontier;
  if (f.sample > 0) {
    config.seed_policy = SeedPolicy::sampled;
    config.sample_count = f.sample;
  }

  auto phase = Clock::now();
  LoadOptions load_options;
  load_options.labeled = f.labeled;
  const LoadResult loaded = load_edge_list(f.input, load_options);
  const MultilayerNetwork& net = loaded.network;
  const double load_ms = elapsed_ms(phase);

  phase = Clock::now();
  ExtractionReport extraction;
  const auto candidates = extract_all(net, config, &extraction);
  const double extract_ms = elapsed_ms(phase);

  phase = Clock::now();
  RefinementResult refined;
  if (beta) {
    refined = refine_at(candidates, *beta);
  } else if (!candidates.empty()) {
    refined = default_beta(candidates, config.worker_count);
  } else {
    for (std::size_t i = 0; i < kBetaGridSize; ++i) refined.beta_profile.push_back({beta_grid_value(i), 0});
  }
  const double refine_ms = elapsed_ms(phase);

  CommunityReport result;
  result.communities = refined.kept;
  result.background = background_vertices(net.num_vertices(), refined.kept);
  result.beta = refined.beta_used;

  const fs::path out_path = f.out;
  {
    auto file = open_output(out_path);
    write_communities_json(file, result);
  }
  if (!beta) {
    auto file = open_output(sibling(out_path, ".beta.tsv"));
    write_beta_profile(file, refined.beta_profile);
  }

  json report = report_header("extract");
  report["config"] = {
      {"input", f.input},
      {"beta", f.beta},
      {"gamma", std::string(to_string(config.scaling))},
      {"seed", f.seed},
      {"threads", config.worker_count},
      {"sample", f.sample},
      {"labeled", f.labeled},
      {"frontier", f.frontier},
      {"max_iterations", 10 * net.num_vertices()},
  };
  report["timings_ms"] = {
      {"load", load_ms},
      {"extract", extract_ms},
      {"refine", refine_ms},
      {"total", elapsed_ms(started)},
  };
  report["counts"] = {
      {"vertices", net.num_vertices()},
      {"layers", net.num_layers()},
      {"edges", net.total_edges()},
      {"rows", loaded.rows},
      {"self_loops_dropped", loaded.cleaning.self_loops},
      {"duplicates_dropped", loaded.cleaning.duplicates},
      {"seeds", extraction.seeds},
      {"degenerate", extraction.degenerate},
      {"failed", extraction.failed},
      {"candidates", candidates.size()},
      {"kept", result.communities.size()},
      {"background", result.background.size()},
  };
  report["beta_used"] = result.beta;
  json warnings = json::array();
  if (loaded.cleaning.self_loops > 0) {
    warnings.push_back("dropped " + std::to_string(loaded.cleaning.self_loops) + " self-loops");
  }
  if (loaded.cleaning.duplicates > 0) {
    warnings.push_back("dropped " + std::to_string(loaded.cleaning.duplicates) + " duplicate edges");
  }
  for (const auto& w : extraction.warnings) warnings.push_back(w);
  report["warnings"] = warnings;
  write_json_file(sibling(out_path, ".report.json"), report);

  out << "kept " << result.communities.size() << " of " << candidates.size() << " candidates at beta "
      << format_number("%.2f", result.beta) << ", " << result.background.size() << " background vertices\n"
      << "wrote " << out_path.string() << '\n';
  return kSuccess;
}

// ---- simulate -------------------------------------------------------------

struct SimulateFlags {
  std::size_t n = 1000;
  std::size_t m = 0;
  std::size_t k = 2;
  double r = 0.1;
  double tau = 0.5;
  double frac = 0.1;
  std::string testbed = "I";
  std::uint64_t seed = 1;
  std::string out;
};

int write_simulation(const std::string& model, const SimulateFlags& f, const Simulation& sim,
                     double generate_ms, std::ostream& out) {
  const std::string prefix = f.out.empty() ? model : f.out;
  const fs::path edges = prefix + ".tsv";
  const fs::path truth = prefix + ".truth.json";
  {
    auto file = open_output(edges);
    write_edge_list(file, sim.network);
  }
  {
    auto file = open_output(truth);
    write_ground_truth_json(file, sim.truth);
  }
  json report = report_header("simulate " + model);
  report["config"] = {{"n", sim.network.num_vertices()}, {"m", sim.network.num_layers()}, {"seed", f.seed}};
  if (model == "msbm") {
    report["config"]["k"] = f.k;
    report["config"]["r"] = f.r;
  } else if (model == "persistence") {
    report["config"]["k"] = f.k;
    report["config"]["tau"] = f.tau;
  } else if (model == "embedded") {
    report["config"]["frac"] = f.frac;
  } else {
    report["config"]["case"] = f.testbed;
  }
  report["timings_ms"] = {{"generate", generate_ms}};
  json sizes = json::array();
  for (const auto& c : sim.truth.communities) sizes.push_back({{"vertices", c.vertices.size()}, {"layers", c.layers.size()}});
  report["counts"] = {{"edges", sim.network.total_edges()}, {"planted", sizes}};
  report["warnings"] = json::array();
  write_json_file(prefix + ".report.json", report);

  out << "wrote " << edges.string() << " (" << sim.network.total_edges() << " edges) and " << truth.string() << '\n';
  return kSuccess;
}

Simulation simulate(const std::string& model, SimulateFlags& f) {
  if (model == "msbm") {
    if (f.m == 0) f.m = 1;
    return generate_msbm(f.n, f.m, standard_msbm_params(f.k, f.r, f.m), f.seed);
  }
  if (model == "persistence") {
    if (f.m == 0) f.m = 50;
    return generate_persistence(f.n, f.m, f.tau, f.k, f.seed);
  }
  if (model == "embedded") {
    if (f.m == 0) f.m = 15;
    return generate_embedded(f.n, f.m, f.frac, f.seed);
  }
  if (f.m == 0) f.m = 90;
  return generate_testbed(parse_testbed_case(f.testbed), f.n, f.m, f.seed);
}

// ---- benchmark ------------------------------------------------------------

struct BenchmarkFlags {
  std::string experiment = "msbm";
  std::string range;
  std::size_t reps = 3;
  std::size_t n = 1000;
  std::size_t m = 0;
  std::size_t k = 2;
  std::uint64_t seed = 1;
  std::optional<long long> threads;
  std::string beta = "auto";
  std::string out = "-";
};

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t point, std::size_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(point), static_cast<std::uint32_t>(rep)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

int run_benchmark(BenchmarkFlags& f, std::ostream& out) {
  const auto started = Clock::now();
  const auto& e = f.experiment;
  if (e != "msbm" && e != "persistence" && e != "embedded") {
    throw UsageError("--experiment must be msbm, persistence or embedded");
  }
  if (f.range.empty()) f.range = e == "msbm" ? "0:0.1:0.01" : e == "persistence" ? "0.1:1:0.1" : "0.01:0.1:0.01";
  if (f.m == 0) f.m = e == "msbm" ? 10 : e == "persistence" ? 50 : 15;
  if (f.reps == 0) throw UsageError("--reps must be positive");
  const auto beta = parse_beta(f.beta);
  std::vector<double> grid;
  try {
    grid = parse_range(f.range);
  } catch (const ParameterError& err) {
    throw UsageError(err.what());
  }
  ExtractionConfig config;
  config.worker_count = resolve_threads(f.threads);

  std::ostringstream table;
  const std::string metric = e == "embedded" ? "coverage" : "match";
  table << "parameter\treplicate\t" << metric << "\truntime_ms\n";
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (std::size_t rep = 0; rep < f.reps; ++rep) {
      const auto seed = replicate_seed(f.seed, p, rep);
      Simulation sim;
      try {
        if (e == "msbm") {
          sim = generate_msbm(f.n, f.m, standard_msbm_params(f.k, grid[p], f.m), seed);
        } else if (e == "persistence") {
          sim = generate_persistence(f.n, f.m, grid[p], f.k, seed);
        } else {
          sim = generate_embedded(f.n, f.m, grid[p], seed);
        }
      } catch (const ParameterError& err) {
        throw UsageError(err.what());
      }
      const auto run_started = Clock::now();
      const auto candidates = extract_all(sim.network, config);
      std::vector<Community> kept;
      if (beta) {
        kept = refine(candidates, *beta);
      } else if (!candidates.empty()) {
        kept = default_beta(candidates, config.worker_count).kept;
      }
      const double runtime = elapsed_ms(run_started);
      double value = 0.0;
      if (!kept.empty()) {
        const auto found = vertex_family(kept);
        const auto truth = sim.truth.vertex_family();
        value = e == "embedded" ? coverage(truth, found) : match_score(found, truth);
      }
      table << format_number("%.6g", grid[p]) << '\t' << rep << '\t' << format_number("%.6f", value) << '\t'
            << format_number("%.1f", runtime) << '\n';
    }
  }

  if (f.out == "-") {
    out << table.str();
  } else {
    {
      auto file = open_output(f.out);
      file << table.str();
    }
    json report = report_header("benchmark");
    report["config"] = {{"experiment", e}, {"range", f.range},  {"reps", f.reps},
                        {"n", f.n},        {"m", f.m},          {"k", f.k},
                        {"seed", f.seed},  {"beta", f.beta},    {"threads", config.worker_count}};
    report["timings_ms"] = {{"total", elapsed_ms(started)}};
    report["counts"] = {{"rows", grid.size() * f.reps}};
    report["warnings"] = json::array();
    write_json_file(sibling(f.out, ".report.json"), report);
    out << "wrote " << f.out << " (" << grid.size() * f.reps << " rows)\n";
  }
  return kSuccess;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ParameterError("bad range '" + text + "': expected start:stop:step");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw ParameterError("bad range '" + text + "': expected start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) throw ParameterError("bad range '" + text + "': need step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = start + static_cast<double>(i) * step;
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilayer community extraction", "mlx"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ExtractFlags extract_flags;
  auto* extract = app.add_subcommand("extract", "Extract and refine vertex-layer communities");
  add_extract(*extract, extract_flags);

  SimulateFlags sim_flags;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic network with ground truth");
  simulate_cmd->require_subcommand(1);
  std::string model;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", sim_flags.n, "Vertices");
    sub->add_option("--m", sim_flags.m, "Layers");
    sub->add_option("--seed", sim_flags.seed, "RNG seed");
    sub->add_option("--out", sim_flags.out, "Output prefix (writes <prefix>.tsv and <prefix>.truth.json)");
    sub->callback([&model, sub] { model = sub->get_name(); });
  };
  auto* msbm = simulate_cmd->add_subcommand("msbm", "Multilayer stochastic block model");
  common(msbm);
  msbm->add_option("--k", sim_flags.k, "Blocks");
  msbm->add_option("--r", sim_flags.r, "Within-block excess probability");
  auto* persistence = simulate_cmd->add_subcommand("persistence", "Structured layers plus Erdos-Renyi noise");
  common(persistence);
  persistence->add_option("--k", sim_flags.k, "Blocks");
  persistence->add_option("--tau", sim_flags.tau, "Fraction of structured layers");
  auto* embedded = simulate_cmd->add_subcommand("embedded", "One planted community in noise");
  common(embedded);
  embedded->add_option("--frac", sim_flags.frac, "Planted fraction of vertices");
  auto* testbed = simulate_cmd->add_subcommand("testbed", "Planted rectangle layouts I..VI");
  common(testbed);
  testbed->add_option("--case", sim_flags.testbed, "I, II, III, IV, V or VI");

  BenchmarkFlags bench_flags;
  auto* bench = app.add_subcommand("benchmark", "Sweep a synthetic experiment and report recovery");
  bench->add_option("--experiment", bench_flags.experiment, "msbm, persistence or embedded");
  bench->add_option("--range", bench_flags.range, "start:stop:step over r, tau or frac");
  bench->add_option("--reps", bench_flags.reps, "Replicates per grid point");
  bench->add_option("--n", bench_flags.n, "Vertices");
  bench->add_option("--m", bench_flags.m, "Layers");
  bench->add_option("--k", bench_flags.k, "Blocks (msbm, persistence)");
  bench->add_option("--seed", bench_flags.seed, "Base RNG seed");
  bench->add_option("--threads", bench_flags.threads, "Worker threads (0 = all cores)");
  bench->add_option("--beta", bench_flags.beta, "Overlap bound in [0, 1] or 'auto'");
  bench->add_option("--out", bench_flags.out, "TSV path, '-' for standard output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (extract->parsed()) return run_extract(extract_flags, out);
    if (simulate_cmd->parsed()) {
      const auto started = Clock::now();
      Simulation sim;
      try {
        sim = simulate(model, sim_flags);
      } catch (const ParameterError& e) {
        throw UsageError(e.what());
      }
      return write_simulation(model, sim_flags, sim, elapsed_ms(started), out);
    }
    return run_benchmark(bench_flags, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace mlx::cli
