#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "steiner/graph.hpp"
#include "steiner/pipeline.hpp"
#include "steiner/types.hpp"

namespace steiner {

/// All-pairs-over-seeds shortest paths: pairwise distance table plus one
/// full single-source predecessor forest per seed (for path expansion).
struct ApspSeeds {
  std::vector<VertexId> seeds;               // sorted ascending
  std::vector<std::vector<Weight>> dist;     // k x k, symmetric, 0 diagonal
  std::vector<std::vector<VertexId>> pred;   // k forests, each over all vertices
};

/// Runs one Dijkstra per seed. Throws SeedsDisconnectedError (naming the
/// unreached seeds) when the seed set spans several components. Requires
/// `seeds` normalized (sorted, unique, in range).
ApspSeeds apsp_seeds(const Graph& graph, std::span<const VertexId> seeds);

/// Classic sequential 2-approximation: complete seed distance graph, MST,
/// expansion of MST edges into shortest paths, second MST over the expanded
/// subgraph, then non-seed leaf pruning.
SteinerTree kmb_steiner(const Graph& graph, std::span<const VertexId> seeds);

/// Sequential cell-based 2-approximation: multi-source shortest paths grow
/// all cells in one pass, cell-bridging arcs replace the all-pairs table,
/// then MST + chain expansion. Shares the bridge semantics, the spanning
/// tree, and the chain assembly with the parallel pipeline, so it produces
/// the identical tree and total distance.
SteinerTree mehlhorn_steiner(const Graph& graph,
                             std::span<const VertexId> seeds);

/// Sequential multi-source shortest paths with the pipeline's exact
/// tie-breaks — the fixpoint compute_voronoi_cells converges to, computed
/// directly.
std::vector<VertexState> voronoi_cells_sequential(
    const Graph& graph, std::span<const VertexId> seeds);

/// Guard limits for the exact solver; larger instances are refused.
inline constexpr std::size_t kMaxExactSeeds = 12;
inline constexpr std::size_t kMaxExactVertices = 5000;

/// Exact minimum Steiner tree by dynamic programming over seed subsets
/// (states dp[subset][vertex], merged over sub-splits and closed by
/// relaxation over graph edges). Exponential in |S|: refuses instances
/// beyond the guard limits with OracleRefusedError.
struct ExactResult {
  Weight optimal_distance = 0;
  SteinerTree tree;
};
ExactResult exact_steiner(const Graph& graph, std::span<const VertexId> seeds);

}  // namespace steiner
