#include "steiner/report.hpp"

#include <json.hpp>

#include "steiner/errors.hpp"

namespace steiner {

namespace {

using nlohmann::json;

json phase_to_json(const PhaseStats& p) {
  return json{{"wall_time_ms", p.wall_time_ms},
              {"messages_sent", p.messages_sent},
              {"messages_processed", p.messages_processed},
              {"dequeues", p.dequeues}};
}

PhaseStats phase_from_json(const json& j) {
  PhaseStats p;
  p.wall_time_ms = j.at("wall_time_ms").get<double>();
  p.messages_sent = j.at("messages_sent").get<std::uint64_t>();
  p.messages_processed = j.at("messages_processed").get<std::uint64_t>();
  p.dequeues = j.at("dequeues").get<std::uint64_t>();
  return p;
}

}  // namespace

std::string to_string(QueueDiscipline discipline) {
  return discipline == QueueDiscipline::kFifo ? "fifo" : "min_priority";
}

QueueDiscipline parse_queue_discipline(std::string_view name) {
  if (name == "fifo") return QueueDiscipline::kFifo;
  if (name == "min_priority" || name == "priority")
    return QueueDiscipline::kMinPriority;
  throw DomainError("unknown queue discipline '" + std::string(name) +
                    "' (expected fifo or min_priority)");
}

std::string to_string(ExecutionMode mode) {
  return mode == ExecutionMode::kThreaded ? "threaded" : "single_lane";
}

ExecutionMode parse_execution_mode(std::string_view name) {
  if (name == "threaded") return ExecutionMode::kThreaded;
  if (name == "single_lane" || name == "single-lane")
    return ExecutionMode::kSingleLane;
  throw DomainError("unknown execution mode '" + std::string(name) +
                    "' (expected threaded or single_lane)");
}

bool operator==(const GraphSummary& a, const GraphSummary& b) {
  return a.vertex_count == b.vertex_count && a.arc_count == b.arc_count &&
         a.max_degree == b.max_degree && a.avg_degree == b.avg_degree &&
         a.weight_min == b.weight_min && a.weight_max == b.weight_max;
}

bool operator==(const PhaseStats& a, const PhaseStats& b) {
  return a.messages_sent == b.messages_sent &&
         a.messages_processed == b.messages_processed &&
         a.dequeues == b.dequeues && a.wall_time_ms == b.wall_time_ms;
}

bool operator==(const RunReport& a, const RunReport& b) {
  return a.schema_version == b.schema_version && a.algorithm == b.algorithm &&
         a.graph_summary == b.graph_summary && a.seed_count == b.seed_count &&
         a.phases == b.phases && a.tree_edge_count == b.tree_edge_count &&
         a.tree_total_distance == b.tree_total_distance &&
         a.ratio == b.ratio && a.validation_passed == b.validation_passed &&
         a.partition_count == b.partition_count &&
         a.discipline == b.discipline && a.execution == b.execution &&
         a.rng_seed == b.rng_seed;
}

std::string run_report_to_json(const RunReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["algorithm"] = r.algorithm;
  j["graph"] = json{{"vertex_count", r.graph_summary.vertex_count},
                    {"arc_count", r.graph_summary.arc_count},
                    {"max_degree", r.graph_summary.max_degree},
                    {"avg_degree", r.graph_summary.avg_degree},
                    {"weight_min", r.graph_summary.weight_min},
                    {"weight_max", r.graph_summary.weight_max}};
  j["seed_count"] = r.seed_count;
  json phases = json::object();
  for (const auto& [label, stats] : r.phases)
    phases[label] = phase_to_json(stats);
  j["phases"] = phases;
  j["tree"] = json{{"edge_count", r.tree_edge_count},
                   {"total_distance", r.tree_total_distance}};
  if (r.ratio) j["ratio"] = *r.ratio;
  j["validation_passed"] = r.validation_passed;
  json config = json{{"partition_count", r.partition_count},
                     {"discipline", r.discipline},
                     {"execution", r.execution}};
  if (r.rng_seed) config["rng_seed"] = *r.rng_seed;
  j["config"] = config;
  return j.dump(2) + "\n";
}

RunReport run_report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("run report: invalid JSON: ") + e.what());
  }
  try {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kRunReportSchemaVersion)
      throw ParseError("run report: unsupported schema version " +
                       std::to_string(r.schema_version));
    r.algorithm = j.at("algorithm").get<std::string>();
    const json& g = j.at("graph");
    r.graph_summary.vertex_count = g.at("vertex_count").get<std::uint64_t>();
    r.graph_summary.arc_count = g.at("arc_count").get<std::uint64_t>();
    r.graph_summary.max_degree = g.at("max_degree").get<std::uint64_t>();
    r.graph_summary.avg_degree = g.at("avg_degree").get<double>();
    r.graph_summary.weight_min = g.at("weight_min").get<Weight>();
    r.graph_summary.weight_max = g.at("weight_max").get<Weight>();
    r.seed_count = j.at("seed_count").get<std::uint64_t>();
    for (const auto& [label, stats] : j.at("phases").items())
      r.phases[label] = phase_from_json(stats);
    r.tree_edge_count = j.at("tree").at("edge_count").get<std::uint64_t>();
    r.tree_total_distance =
        j.at("tree").at("total_distance").get<Weight>();
    if (j.contains("ratio")) r.ratio = j.at("ratio").get<double>();
    r.validation_passed = j.at("validation_passed").get<bool>();
    const json& c = j.at("config");
    r.partition_count = c.at("partition_count").get<std::size_t>();
    r.discipline = c.at("discipline").get<std::string>();
    r.execution = c.at("execution").get<std::string>();
    if (c.contains("rng_seed"))
      r.rng_seed = c.at("rng_seed").get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("run report: missing or mistyped field: ") +
                     e.what());
  }
}

}  // namespace steiner
