#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "steiner/errors.hpp"
#include "steiner/types.hpp"

namespace steiner {

/// One undirected edge, used as graph-construction input.
struct UndirectedEdge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 1;
};

/// Immutable undirected weighted graph in CSR form.
///
/// Invariants (established by the builder, relied on everywhere):
///  - vertex ids are dense in [0, vertex_count())
///  - adjacency is symmetric: arc (u,v,w) exists iff (v,u,w) does
///  - no self-loops, no parallel edges (duplicates collapse to min weight)
///  - every weight is an integer >= 1
///  - each neighbor list is sorted ascending by target id
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds a graph from undirected edges. Self-loops are rejected here
  /// (readers drop them before calling); duplicate edges keep the minimum
  /// weight; endpoints must be < vertex_count and weights >= 1.
  static Graph from_undirected_edges(std::size_t vertex_count,
                                     std::span<const UndirectedEdge> edges);

  std::size_t vertex_count() const { return offsets_.size() - 1; }

  /// Number of directed arcs (2x the undirected edge count).
  std::uint64_t arc_count() const { return targets_.size(); }

  /// Number of undirected edges.
  std::uint64_t edge_count() const { return targets_.size() / 2; }

  std::size_t degree(VertexId v) const {
    return offsets_[v + 1] - offsets_[v];
  }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {targets_.data() + offsets_[v], degree(v)};
  }

  std::span<const Weight> weights(VertexId v) const {
    return {weights_.data() + offsets_[v], degree(v)};
  }

  /// Weight of the edge (u,v); kInfiniteDistance when absent.
  /// O(log degree(u)) via binary search on the sorted neighbor list.
  Weight edge_weight(VertexId u, VertexId v) const;

  bool has_edge(VertexId u, VertexId v) const {
    return edge_weight(u, v) != kInfiniteDistance;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::uint64_t> offsets_;  // size vertex_count()+1
  std::vector<VertexId> targets_;       // size arc_count()
  std::vector<Weight> weights_;         // parallel to targets_
};

/// Degree/weight digest used for console summaries and run reports.
struct GraphSummary {
  std::uint64_t vertex_count = 0;
  std::uint64_t arc_count = 0;
  std::uint64_t max_degree = 0;
  double avg_degree = 0.0;
  Weight weight_min = 0;  // 0 when the graph has no edges
  Weight weight_max = 0;
};

GraphSummary summarize(const Graph& graph);

/// Maps vertices to owning partitions: owner(v) = v mod partition_count.
/// Cheap to copy; carries no per-vertex storage.
class PartitionMap {
 public:
  explicit PartitionMap(std::size_t partition_count)
      : partition_count_(partition_count) {
    if (partition_count == 0)
      throw DomainError("PartitionMap: partition count must be >= 1");
  }

  std::size_t partition_count() const { return partition_count_; }
  std::size_t owner(VertexId v) const { return v % partition_count_; }

 private:
  std::size_t partition_count_;
};

inline PartitionMap make_partition_map(const Graph&, std::size_t partition_count) {
  return PartitionMap(partition_count);
}

/// Per-load bookkeeping surfaced to callers (CLI prints these as warnings).
struct LoadStats {
  std::uint64_t record_count = 0;          // edge records parsed
  std::uint64_t self_loops_dropped = 0;
  std::uint64_t duplicates_merged = 0;     // records beyond the first per edge
};

struct LoadedGraph {
  Graph graph;
  /// original_ids[dense] = id as it appeared in the input. Sorted ascending,
  /// so remapping preserves the relative order of input ids.
  std::vector<std::uint64_t> original_ids;
  LoadStats stats;
};

/// Reads a whitespace-separated edge list ("u v [w]" records, '#' comments,
/// blank lines ignored). Ids may be arbitrary 64-bit values and are remapped
/// to a dense range. Self-loops are dropped (counted), duplicate edges merge
/// to the minimum weight (counted). When `read_weights` is false, or when a
/// record has no third field, the weight defaults to 1.
///
/// Throws ParseError (with the 1-based line number) on malformed records and
/// DomainError on weights < 1.
LoadedGraph load_edge_list(std::istream& in, bool read_weights);

/// Writes the graph as a reloadable edge list: one "u v w" line per
/// undirected edge, u < v, sorted ascending. Reloading the output yields an
/// identical Graph (ids are already dense, so the remap is the identity).
void save_edge_list(const Graph& graph, std::ostream& out);

/// Returns a copy of `graph` with every edge weight redrawn uniformly from
/// [w_min, w_max] (inclusive). Deterministic for a fixed rng_seed: edges are
/// visited in canonical (min id, max id) ascending order and both directions
/// of an edge receive the same draw.
Graph synthesize_weights(const Graph& graph, Weight w_min, Weight w_max,
                         std::uint64_t rng_seed);

/// Vertex ids of the largest connected component, sorted ascending.
/// Size ties break toward the component containing the smallest vertex id.
std::vector<VertexId> largest_connected_component(const Graph& graph);

}  // namespace steiner
