// Command-line front end: prepare graphs, place seeds, run the solvers, and
// benchmark message traffic across engine configurations.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "steiner/baselines.hpp"
#include "steiner/engine.hpp"
#include "steiner/errors.hpp"
#include "steiner/graph.hpp"
#include "steiner/pipeline.hpp"
#include "steiner/report.hpp"
#include "steiner/seedsel.hpp"
#include "steiner/types.hpp"

namespace {

using namespace steiner;
using Clock = std::chrono::steady_clock;

namespace exitcode {
constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;
constexpr int kSeedsDisconnected = 4;
constexpr int kOracleRefused = 5;
constexpr int kValidation = 6;
}  // namespace exitcode

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

LoadedGraph load_graph_file(const std::string& path, bool read_weights) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  return load_edge_list(in, read_weights);
}

std::vector<VertexId> load_seeds_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open seeds file '" + path + "'");
  std::vector<VertexId> seeds;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) {
      if (tok.front() == '#') break;  // rest of line is comment
      try {
        const unsigned long long v = std::stoull(tok);
        if (std::to_string(v) != tok) throw std::invalid_argument(tok);
        seeds.push_back(static_cast<VertexId>(v));
      } catch (const std::exception&) {
        throw ParseError("seeds file line " + std::to_string(line_no) +
                         ": bad vertex id '" + tok + "'");
      }
    }
  }
  if (seeds.empty())
    throw ParseError("seeds file '" + path + "' contains no seeds");
  return seeds;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw ParseError("write to '" + path + "' failed");
}

std::pair<Weight, Weight> parse_weight_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw DomainError("weight range must look like MIN:MAX, got '" + text +
                      "'");
  try {
    const long long lo = std::stoll(text.substr(0, colon));
    const long long hi = std::stoll(text.substr(colon + 1));
    if (lo < 1 || hi < lo)
      throw DomainError("weight range requires 1 <= MIN <= MAX, got '" +
                        text + "'");
    return {static_cast<Weight>(lo), static_cast<Weight>(hi)};
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("weight range must look like MIN:MAX, got '" + text +
                      "'");
  }
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::uint64_t median_of(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];  // lower median: stays integral
}

// ---------------------------------------------------------------------------
// prepare

struct PrepareArgs {
  std::string input;
  std::string output;
  std::string weight_range;
  std::uint64_t rng_seed = 1;
  bool ignore_weights = false;
};

int cmd_prepare(const PrepareArgs& args) {
  LoadedGraph loaded = load_graph_file(args.input, !args.ignore_weights);
  if (loaded.stats.self_loops_dropped > 0)
    std::cerr << "warning: dropped " << loaded.stats.self_loops_dropped
              << " self-loop record(s)\n";
  if (loaded.stats.duplicates_merged > 0)
    std::cerr << "warning: merged " << loaded.stats.duplicates_merged
              << " duplicate edge record(s) (kept minimum weight)\n";

  Graph graph = std::move(loaded.graph);
  if (!args.weight_range.empty()) {
    const auto [lo, hi] = parse_weight_range(args.weight_range);
    graph = synthesize_weights(graph, lo, hi, args.rng_seed);
  }

  {
    std::ofstream out(args.output);
    if (!out) throw ParseError("cannot open output file '" + args.output + "'");
    save_edge_list(graph, out);
  }

  bool identity = true;
  for (std::size_t i = 0; i < loaded.original_ids.size(); ++i)
    if (loaded.original_ids[i] != i) identity = false;
  if (!identity) {
    std::ostringstream ids;
    ids << "# dense_id original_id\n";
    for (std::size_t i = 0; i < loaded.original_ids.size(); ++i)
      ids << i << ' ' << loaded.original_ids[i] << '\n';
    write_text_file(args.output + ".ids", ids.str());
    std::cerr << "note: input ids were remapped; translation table written "
                 "to '" << args.output << ".ids'\n";
  }

  const GraphSummary s = summarize(graph);
  std::cout << "vertices " << s.vertex_count << "\narcs " << s.arc_count
            << "\nedges " << s.arc_count / 2 << "\nmax_degree "
            << s.max_degree << "\navg_degree " << s.avg_degree
            << "\nweight_min " << s.weight_min << "\nweight_max "
            << s.weight_max << '\n';
  return exitcode::kOk;
}

// ---------------------------------------------------------------------------
// seeds

struct SeedsArgs {
  std::string graph;
  std::string strategy = "uniform_random";
  std::size_t count = 1;
  std::uint64_t rng_seed = 1;
  std::string output;
};

int cmd_seeds(const SeedsArgs& args) {
  const Graph graph = load_graph_file(args.graph, true).graph;
  const SeedSpec spec{parse_seed_strategy(args.strategy), args.count,
                      args.rng_seed};
  const std::vector<VertexId> seeds = select_seeds(graph, spec);

  std::ostringstream out;
  out << "# seeds strategy=" << args.strategy << " count=" << args.count
      << " rng_seed=" << args.rng_seed << '\n';
  for (VertexId s : seeds) out << s << '\n';
  write_text_file(args.output, out.str());

  std::cout << "selected " << seeds.size() << " seed(s) with strategy "
            << args.strategy << " -> " << args.output << '\n';
  return exitcode::kOk;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string graph;
  std::string seeds;
  std::string algo = "voronoi";
  std::size_t partitions = 1;
  std::string discipline = "min_priority";
  std::string execution = "threaded";
  std::uint64_t budget_factor = 64;
  std::optional<std::uint64_t> message_budget;
  std::string report_path;
  std::string tree_path;
};

EngineConfig engine_config_from(const SolveArgs& args) {
  EngineConfig config;
  config.partition_count = args.partitions;
  config.discipline = parse_queue_discipline(args.discipline);
  config.mode = parse_execution_mode(args.execution);
  config.budget_factor = args.budget_factor;
  config.message_budget = args.message_budget;
  return config;
}

int cmd_solve(const SolveArgs& args) {
  const Graph graph = load_graph_file(args.graph, true).graph;
  const std::vector<VertexId> seeds =
      normalize_seeds(graph, load_seeds_file(args.seeds));

  RunReport report;
  report.algorithm = args.algo;
  report.graph_summary = summarize(graph);
  report.seed_count = seeds.size();
  report.partition_count = args.partitions;
  report.discipline = args.discipline;
  report.execution = args.execution;

  // Timing starts after all input loading.
  SteinerTree tree;
  if (args.algo == "voronoi") {
    const EngineConfig config = engine_config_from(args);
    const PartitionMap partitions = make_partition_map(graph, args.partitions);
    SolveResult result = solve_steiner(graph, seeds, partitions, config);
    tree = std::move(result.tree);
    report.phases = result.metrics.phases();
  } else if (args.algo == "kmb" || args.algo == "mehlhorn") {
    const auto t0 = Clock::now();
    tree = args.algo == "kmb" ? kmb_steiner(graph, seeds)
                              : mehlhorn_steiner(graph, seeds);
    report.phases["total"].wall_time_ms = ms_since(t0);
  } else if (args.algo == "exact") {
    const auto t0 = Clock::now();
    ExactResult result = exact_steiner(graph, seeds);
    report.phases["total"].wall_time_ms = ms_since(t0);
    tree = std::move(result.tree);
    report.ratio = static_cast<double>(tree.total_distance) /
                   static_cast<double>(result.optimal_distance);
  } else {
    throw DomainError("unknown algorithm '" + args.algo +
                      "' (expected voronoi, kmb, mehlhorn, or exact)");
  }

  const ValidationReport validation = validate_tree(tree, seeds, graph);
  report.validation_passed = validation.all_pass();
  report.tree_edge_count = tree.edges.size();
  report.tree_total_distance = tree.total_distance;

  if (!args.tree_path.empty())
    write_text_file(args.tree_path, tree_to_string(tree, seeds.size()));
  if (!args.report_path.empty())
    write_text_file(args.report_path, run_report_to_json(report));

  std::cout << "algorithm " << args.algo << "\ntotal_distance "
            << tree.total_distance << "\ntree_edges " << tree.edges.size()
            << '\n';
  for (const auto& [label, stats] : report.phases)
    std::cout << "phase " << label << " wall_ms " << stats.wall_time_ms
              << " messages_sent " << stats.messages_sent << '\n';

  if (!report.validation_passed) {
    std::cerr << "tree validation failed: " << validation.first_failure()
              << '\n';
    return exitcode::kValidation;
  }
  return exitcode::kOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string graph;
  std::string seeds;
  std::vector<std::string> algos{"voronoi", "mehlhorn", "kmb"};
  std::size_t repetitions = 3;
  std::size_t partitions = 1;
  std::string discipline = "min_priority";
  std::string execution = "threaded";
  std::string output;
};

int cmd_compare(const CompareArgs& args) {
  const Graph graph = load_graph_file(args.graph, true).graph;
  const std::vector<VertexId> seeds =
      normalize_seeds(graph, load_seeds_file(args.seeds));

  std::ostringstream csv;
  csv << "algorithm,phase,runs,median_wall_time_ms,median_messages_sent,"
         "tree_edges,total_distance,ratio\n";
  const auto flush = [&csv, &args] { write_text_file(args.output, csv.str()); };

  // The exact optimum (when requested) anchors every ratio column, so it
  // runs first regardless of its position in --algos.
  std::optional<Weight> optimal;
  std::vector<std::string> order(args.algos.begin(), args.algos.end());
  if (const auto it = std::find(order.begin(), order.end(), "exact");
      it != order.end()) {
    order.erase(it);
    order.insert(order.begin(), "exact");
  }

  EngineConfig config;
  config.partition_count = args.partitions;
  config.discipline = parse_queue_discipline(args.discipline);
  config.mode = parse_execution_mode(args.execution);
  const PartitionMap partitions = make_partition_map(graph, args.partitions);

  for (const std::string& algo : order) {
    std::map<std::string, std::vector<double>> walls;
    std::map<std::string, std::vector<std::uint64_t>> sents;
    SteinerTree tree;
    try {
      for (std::size_t rep = 0; rep < args.repetitions; ++rep) {
        if (algo == "voronoi") {
          SolveResult result = solve_steiner(graph, seeds, partitions, config);
          for (const auto& [label, stats] : result.metrics.phases()) {
            walls[label].push_back(stats.wall_time_ms);
            sents[label].push_back(stats.messages_sent);
          }
          tree = std::move(result.tree);
        } else if (algo == "kmb" || algo == "mehlhorn") {
          const auto t0 = Clock::now();
          tree = algo == "kmb" ? kmb_steiner(graph, seeds)
                               : mehlhorn_steiner(graph, seeds);
          walls["total"].push_back(ms_since(t0));
          sents["total"].push_back(0);
        } else if (algo == "exact") {
          const auto t0 = Clock::now();
          ExactResult result = exact_steiner(graph, seeds);
          walls["total"].push_back(ms_since(t0));
          sents["total"].push_back(0);
          tree = std::move(result.tree);
          optimal = result.optimal_distance;
        } else {
          throw DomainError("unknown algorithm '" + algo + "'");
        }
      }
    } catch (...) {
      // Keep whatever finished: flush partial results before propagating.
      flush();
      throw;
    }

    std::string ratio;
    if (optimal && *optimal > 0) {
      std::ostringstream r;
      r << static_cast<double>(tree.total_distance) /
               static_cast<double>(*optimal);
      ratio = r.str();
    }
    for (const auto& [label, wall_samples] : walls) {
      csv << algo << ',' << label << ',' << args.repetitions << ','
          << median_of(wall_samples) << ',' << median_of(sents[label]) << ','
          << tree.edges.size() << ',' << tree.total_distance << ',' << ratio
          << '\n';
    }
  }

  flush();
  std::cout << "comparison written to " << args.output << '\n';
  return exitcode::kOk;
}

// ---------------------------------------------------------------------------
// msgbench

struct MsgbenchArgs {
  std::string graph;
  std::string seeds;
  std::vector<std::size_t> partitions{1, 2, 4};
  std::vector<std::string> disciplines{"fifo", "min_priority"};
  std::string execution = "threaded";
  std::size_t runs = 1;
  std::uint64_t budget_factor = 64;
  std::string output;
};

int cmd_msgbench(const MsgbenchArgs& args) {
  const Graph graph = load_graph_file(args.graph, true).graph;
  const std::vector<VertexId> seeds =
      normalize_seeds(graph, load_seeds_file(args.seeds));

  std::ostringstream csv;
  csv << "partitions,discipline,phase,runs,median_messages_sent,"
         "median_messages_processed,median_wall_time_ms\n";

  std::string reference_tree;
  bool trees_match = true;
  // voronoi-phase medians per (partitions, discipline) for the ratio lines.
  std::map<std::pair<std::size_t, std::string>, double> voronoi_messages;

  for (const std::size_t p : args.partitions) {
    for (const std::string& disc : args.disciplines) {
      EngineConfig config;
      config.partition_count = p;
      config.discipline = parse_queue_discipline(disc);
      config.mode = parse_execution_mode(args.execution);
      config.budget_factor = args.budget_factor;
      const PartitionMap partitions = make_partition_map(graph, p);

      std::map<std::string, std::vector<std::uint64_t>> sent, processed;
      std::map<std::string, std::vector<double>> walls;
      std::string tree_text;
      for (std::size_t rep = 0; rep < args.runs; ++rep) {
        SolveResult result = solve_steiner(graph, seeds, partitions, config);
        for (const auto& [label, stats] : result.metrics.phases()) {
          sent[label].push_back(stats.messages_sent);
          processed[label].push_back(stats.messages_processed);
          walls[label].push_back(stats.wall_time_ms);
        }
        tree_text = tree_to_string(result.tree, seeds.size());
      }

      if (reference_tree.empty())
        reference_tree = tree_text;
      else if (tree_text != reference_tree)
        trees_match = false;

      for (const auto& [label, samples] : sent) {
        csv << p << ',' << disc << ',' << label << ',' << args.runs << ','
            << median_of(samples) << ',' << median_of(processed[label]) << ','
            << median_of(walls[label]) << '\n';
      }
      voronoi_messages[{p, disc}] =
          static_cast<double>(median_of(sent[phase::kVoronoiCell]));
    }
  }

  for (const std::size_t p : args.partitions) {
    const auto fifo = voronoi_messages.find({p, "fifo"});
    const auto prio = voronoi_messages.find({p, "min_priority"});
    if (fifo != voronoi_messages.end() && prio != voronoi_messages.end() &&
        prio->second > 0) {
      const double ratio = fifo->second / prio->second;
      csv << "# voronoi_messages_ratio_fifo_over_min_priority partitions="
          << p << " ratio=" << ratio << '\n';
      std::cout << "partitions " << p
                << " fifo/min_priority voronoi message ratio " << ratio
                << '\n';
    }
  }

  write_text_file(args.output, csv.str());
  std::cout << "message benchmark written to " << args.output << '\n';

  if (!trees_match) {
    std::cerr << "trees diverged across engine configurations — "
                 "determinism breach\n";
    return exitcode::kValidation;
  }
  return exitcode::kOk;
}

int dispatch(const CLI::App& app, const PrepareArgs& prepare,
             const SeedsArgs& seeds, const SolveArgs& solve,
             const CompareArgs& compare, const MsgbenchArgs& msgbench) {
  if (app.got_subcommand("prepare")) return cmd_prepare(prepare);
  if (app.got_subcommand("seeds")) return cmd_seeds(seeds);
  if (app.got_subcommand("solve")) return cmd_solve(solve);
  if (app.got_subcommand("compare")) return cmd_compare(compare);
  if (app.got_subcommand("msgbench")) return cmd_msgbench(msgbench);
  throw InternalError("no subcommand dispatched");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steiner tree toolkit: cell-growth approximation, sequential "
               "baselines, exact solver, and message benchmarks"};
  app.require_subcommand(1);

  PrepareArgs prepare_args;
  CLI::App* prepare = app.add_subcommand(
      "prepare", "Load, clean, remap, and optionally reweight an edge list");
  prepare->add_option("--input", prepare_args.input, "input edge list")
      ->required();
  prepare->add_option("--output", prepare_args.output, "output edge list")
      ->required();
  prepare->add_option("--weight-range", prepare_args.weight_range,
                      "synthesize weights uniformly from MIN:MAX");
  prepare->add_option("--rng-seed", prepare_args.rng_seed,
                      "seed for weight synthesis (default 1)");
  prepare->add_flag("--ignore-weights", prepare_args.ignore_weights,
                    "ignore any third column, defaulting weights to 1");

  SeedsArgs seeds_args;
  CLI::App* seeds = app.add_subcommand("seeds", "Select a seed (terminal) set");
  seeds->add_option("--graph", seeds_args.graph, "prepared graph")->required();
  seeds->add_option("--strategy", seeds_args.strategy,
                    "bfs_level | uniform_random | eccentric | proximate");
  seeds->add_option("--count", seeds_args.count, "number of seeds")
      ->required();
  seeds->add_option("--rng-seed", seeds_args.rng_seed, "RNG seed (default 1)");
  seeds->add_option("--output", seeds_args.output, "output seeds file")
      ->required();

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Build a Steiner tree");
  solve->add_option("--graph", solve_args.graph, "prepared graph")->required();
  solve->add_option("--seeds", solve_args.seeds, "seeds file")->required();
  solve->add_option("--algo", solve_args.algo,
                    "voronoi | kmb | mehlhorn | exact");
  solve->add_option("--partitions", solve_args.partitions,
                    "partition count (voronoi)");
  solve->add_option("--discipline", solve_args.discipline,
                    "fifo | min_priority (voronoi)");
  solve->add_option("--execution", solve_args.execution,
                    "threaded | single_lane (voronoi)");
  solve->add_option("--budget-factor", solve_args.budget_factor,
                    "message budget multiplier over |E| (default 64)");
  solve->add_option("--message-budget", solve_args.message_budget,
                    "absolute per-phase message budget override");
  solve->add_option("--report", solve_args.report_path,
                    "write a JSON run report here");
  solve->add_option("--tree", solve_args.tree_path,
                    "write the tree edge list here");

  CompareArgs compare_args;
  CLI::App* compare =
      app.add_subcommand("compare", "Run several algorithms side by side");
  compare->add_option("--graph", compare_args.graph, "prepared graph")
      ->required();
  compare->add_option("--seeds", compare_args.seeds, "seeds file")->required();
  compare->add_option("--algos", compare_args.algos,
                      "algorithms to run (default voronoi mehlhorn kmb)")
      ->delimiter(',');
  compare->add_option("--repetitions", compare_args.repetitions,
                      "runs per algorithm (default 3)")
      ->check(CLI::PositiveNumber);
  compare->add_option("--partitions", compare_args.partitions,
                      "partition count for voronoi");
  compare->add_option("--discipline", compare_args.discipline,
                      "queue discipline for voronoi");
  compare->add_option("--execution", compare_args.execution,
                      "execution mode for voronoi");
  compare->add_option("--output", compare_args.output, "output CSV")
      ->required();

  MsgbenchArgs msgbench_args;
  CLI::App* msgbench = app.add_subcommand(
      "msgbench", "Message-count grid over partitions x disciplines");
  msgbench->add_option("--graph", msgbench_args.graph, "prepared graph")
      ->required();
  msgbench->add_option("--seeds", msgbench_args.seeds, "seeds file")
      ->required();
  msgbench->add_option("--partitions", msgbench_args.partitions,
                       "partition counts (default 1 2 4)")
      ->delimiter(',');
  msgbench->add_option("--disciplines", msgbench_args.disciplines,
                       "disciplines (default fifo min_priority)")
      ->delimiter(',');
  msgbench->add_option("--execution", msgbench_args.execution,
                       "threaded | single_lane");
  msgbench->add_option("--runs", msgbench_args.runs,
                       "runs per configuration (default 1)")
      ->check(CLI::PositiveNumber);
  msgbench->add_option("--budget-factor", msgbench_args.budget_factor,
                       "message budget multiplier over |E|");
  msgbench->add_option("--output", msgbench_args.output, "output CSV")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exitcode::kUsage;
  }

  try {
    return dispatch(app, prepare_args, seeds_args, solve_args, compare_args,
                    msgbench_args);
  } catch (const SeedsDisconnectedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exitcode::kSeedsDisconnected;
  } catch (const OracleRefusedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exitcode::kOracleRefused;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exitcode::kIo;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exitcode::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exitcode::kInternal;
  }
}
