#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "steiner/engine.hpp"
#include "steiner/graph.hpp"
#include "steiner/types.hpp"

namespace steiner {

/// Canonical phase labels, in pipeline order. Reports and metrics use these
/// strings verbatim.
namespace phase {
inline constexpr const char* kVoronoiCell = "voronoi_cell";
inline constexpr const char* kLocalMinDistEdge = "local_min_dist_edge";
inline constexpr const char* kGlobalMinDistEdge = "global_min_dist_edge";
inline constexpr const char* kMst = "mst";
inline constexpr const char* kEdgePruning = "edge_pruning";
inline constexpr const char* kTreeEdge = "tree_edge";
}  // namespace phase

inline constexpr std::array<const char*, 6> kPipelinePhaseLabels = {
    phase::kVoronoiCell, phase::kLocalMinDistEdge, phase::kGlobalMinDistEdge,
    phase::kMst,         phase::kEdgePruning,      phase::kTreeEdge};

/// Per-vertex result of the Voronoi growth phase.
///  - src:  owning seed (the cell this vertex belongs to)
///  - dist: shortest distance to that seed
///  - pred: previous vertex on the shortest path from the seed
/// Unreached vertices keep the defaults. For a seed: src == self,
/// pred == self, dist == 0.
///
/// Ties resolve by a total order so the fixpoint is schedule-invariant:
/// among equal distances the smallest seed id wins the cell; among equal
/// (dist, src) offers the smallest sender id wins pred.
struct VertexState {
  VertexId src = kNoVertex;
  VertexId pred = kNoVertex;
  Weight dist = kInfiniteDistance;

  friend bool operator==(const VertexState&, const VertexState&) = default;
};

/// Unordered seed pair (s, t), stored s < t.
using SeedPair = std::pair<VertexId, VertexId>;

/// Cheapest known bridge between two Voronoi cells: a graph edge (u, v) with
/// u in cell s, v in cell t, and dist = d(s,u) + w(u,v) + d(v,t). Keyed by
/// SeedPair (s, t) in the maps below, so u sits in the smaller seed's cell
/// (u > v is possible).
struct CrossCellEdge {
  VertexId u = kNoVertex;
  VertexId v = kNoVertex;
  Weight dist = kInfiniteDistance;

  friend bool operator==(const CrossCellEdge&, const CrossCellEdge&) = default;
};

/// Strict total order used everywhere a cheapest bridge is chosen:
/// (dist, min endpoint, max endpoint) lexicographic. Distinct graph edges
/// never compare equal, so min-reduction is deterministic.
bool cross_cell_edge_less(const CrossCellEdge& a, const CrossCellEdge& b);

using CrossCellEdgeMap = std::map<SeedPair, CrossCellEdge>;

/// Folds the bridge candidate for arc (x, y) — endpoint states sx/sy, both
/// in distinct cells — into `map` under cross_cell_edge_less. Every producer
/// of bridge candidates (parallel scan, sequential solver) funnels through
/// this one definition so their choices can never diverge.
void merge_bridge_candidate(CrossCellEdgeMap& map, VertexId x,
                            const VertexState& sx, VertexId y,
                            const VertexState& sy, Weight arc_weight);

/// Complete or partial graph over the seeds, weighted by cheapest bridge
/// distances. Edges are stored s < t, sorted ascending.
struct DistanceGraph {
  struct Edge {
    VertexId s = kNoVertex;
    VertexId t = kNoVertex;
    Weight w = kInfiniteDistance;

    friend bool operator==(const Edge&, const Edge&) = default;
  };

  std::vector<VertexId> seeds;  // sorted ascending
  std::vector<Edge> edges;      // sorted by (s, t)
};

/// One edge of a final tree, stored u < v.
struct TreeEdge {
  VertexId u = kNoVertex;
  VertexId v = kNoVertex;
  Weight w = 0;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// Final tree: edges sorted by (u, v), total_distance = sum of weights.
/// Every vertex mentioned is a tree vertex; seeds with no edges (|S| = 1)
/// yield the empty tree with distance 0.
struct SteinerTree {
  std::vector<TreeEdge> edges;
  Weight total_distance = 0;

  friend bool operator==(const SteinerTree&, const SteinerTree&) = default;
};

/// Validates and canonicalizes a seed list: every id in range, no
/// duplicates, at least one seed. Returns the seeds sorted ascending.
/// Throws DomainError on violations.
std::vector<VertexId> normalize_seeds(const Graph& graph,
                                      std::span<const VertexId> seeds);

/// Phase 1 — grows all Voronoi cells at once by asynchronous relaxation.
/// Seeds bootstrap themselves at distance 0; every improved offer
/// (r, seed) <lex (dist, src) is adopted and re-broadcast to all neighbors;
/// an offer equal in (dist, src) but from a smaller sender refines pred only
/// (no re-broadcast). Requires `seeds` normalized. Message counts accumulate
/// into `stats`.
std::vector<VertexState> compute_voronoi_cells(const Graph& graph,
                                               std::span<const VertexId> seeds,
                                               const PartitionMap& partitions,
                                               const EngineConfig& config,
                                               PhaseStats& stats);

/// Phase 2a — per-partition cheapest bridges between distinct cells.
/// Same-partition arcs fold directly into the owner's map; each arc crossing
/// partitions carries one engine message with the remote endpoint's state.
/// Arcs touching an unreached endpoint are skipped and counted.
struct LocalMinDistEdges {
  std::vector<CrossCellEdgeMap> per_partition;
  std::uint64_t unreached_arc_skips = 0;
};
LocalMinDistEdges local_min_dist_edges(const Graph& graph,
                                       std::span<const VertexState> states,
                                       const PartitionMap& partitions,
                                       const EngineConfig& config,
                                       PhaseStats& stats);

/// Phase 2b — min-allreduce of the per-partition bridge maps under
/// cross_cell_edge_less.
CrossCellEdgeMap global_min_reduce(std::span<const CrossCellEdgeMap> locals);

/// Phase 2c — reshapes the global bridge map into a seed-level graph.
DistanceGraph build_distance_graph(const CrossCellEdgeMap& bridges,
                                   std::span<const VertexId> seeds);

/// Phase 3 — minimum spanning tree over the distance graph. Grows from the
/// smallest seed; candidate edges pop in (w, s, t) lexicographic order, so
/// the result is unique. Returns edges in selection order. Throws
/// SeedsDisconnectedError (naming the unreached seeds) when the distance
/// graph does not span the seed set. |S| = 1 yields no edges.
std::vector<DistanceGraph::Edge> mst_prim(const DistanceGraph& dg);

/// Phase 4 — keeps only the bridges the spanning tree selected.
/// Result size is exactly |S| - 1 (or 0 for a single seed).
CrossCellEdgeMap prune_cross_cell_edges(const CrossCellEdgeMap& bridges,
                                        std::span<const DistanceGraph::Edge> mst);

/// Phase 5 — expands surviving bridges into concrete tree edges by walking
/// predecessor chains back to the seeds through engine messages. Each chain
/// vertex is claimed exactly once, so chains shared by several bridges are
/// emitted once. Detects corrupted predecessor state (non-edges, distances
/// that do not decrease toward the seed).
SteinerTree trace_tree_edges(const Graph& graph,
                             std::span<const VertexState> states,
                             const CrossCellEdgeMap& active_bridges,
                             const PartitionMap& partitions,
                             const EngineConfig& config, PhaseStats& stats);

/// Sequential equivalent of trace_tree_edges over the same inputs; produces
/// the identical tree. Used by the sequential solver variants.
SteinerTree assemble_tree_from_states(const Graph& graph,
                                      std::span<const VertexState> states,
                                      const CrossCellEdgeMap& active_bridges);

/// Runs the full pipeline. Returns the tree plus per-phase metrics holding
/// exactly the six labels in kPipelinePhaseLabels.
struct SolveResult {
  SteinerTree tree;
  EngineMetrics metrics;
};
SolveResult solve_steiner(const Graph& graph, std::span<const VertexId> seeds,
                          const PartitionMap& partitions,
                          const EngineConfig& config);

/// Structural audit of a finished tree against the graph and seed set:
/// edges exist with matching weights, no cycles, one connected component,
/// all seeds spanned, every leaf a seed, total consistent. An empty tree
/// passes only for |S| <= 1.
struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};
struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
  /// name + detail of the first failed check; empty when clean.
  std::string first_failure() const;
};
ValidationReport validate_tree(const SteinerTree& tree,
                               std::span<const VertexId> seeds,
                               const Graph& graph);

/// Canonical text form: header comment with seed/edge counts and total
/// distance, then one "u v w" line per edge in sorted order. Equal trees
/// serialize to identical bytes.
void save_tree(const SteinerTree& tree, std::size_t seed_count,
               std::ostream& out);
std::string tree_to_string(const SteinerTree& tree, std::size_t seed_count);

}  // namespace steiner
