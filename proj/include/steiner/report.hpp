#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "steiner/engine.hpp"
#include "steiner/graph.hpp"
#include "steiner/types.hpp"

namespace steiner {

std::string to_string(QueueDiscipline discipline);  // fifo / min_priority
QueueDiscipline parse_queue_discipline(std::string_view name);

std::string to_string(ExecutionMode mode);  // threaded / single_lane
ExecutionMode parse_execution_mode(std::string_view name);

inline constexpr int kRunReportSchemaVersion = 1;

/// Machine-readable record of one solve run. Timings cover the algorithm
/// only — never input loading.
struct RunReport {
  int schema_version = kRunReportSchemaVersion;
  std::string algorithm;  // voronoi / kmb / mehlhorn / exact
  GraphSummary graph_summary;
  std::uint64_t seed_count = 0;
  std::map<std::string, PhaseStats> phases;
  std::uint64_t tree_edge_count = 0;
  Weight tree_total_distance = 0;
  /// Tree distance / optimal distance; present only when the exact solver
  /// supplied the optimum.
  std::optional<double> ratio;
  bool validation_passed = false;
  // Config echo.
  std::size_t partition_count = 1;
  std::string discipline;
  std::string execution;
  std::optional<std::uint64_t> rng_seed;

  friend bool operator==(const RunReport&, const RunReport&);
};

bool operator==(const GraphSummary&, const GraphSummary&);
bool operator==(const PhaseStats&, const PhaseStats&);

/// JSON round trip. Serialization is pretty-printed and key-stable;
/// parse(serialize(r)) == r. Parsing validates the schema version and
/// required fields (ParseError on mismatch).
std::string run_report_to_json(const RunReport& report);
RunReport run_report_from_json(const std::string& text);

}  // namespace steiner
