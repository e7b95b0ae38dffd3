#include "steiner/baselines.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>

#include "steiner/errors.hpp"

namespace steiner {

namespace {

/// Single-source Dijkstra. Determinism pins: the heap pops (dist, vertex)
/// lexicographically, improvements are strict, and among equal-distance
/// parents the smallest predecessor id wins.
void dijkstra_from(const Graph& graph, VertexId source,
                   std::vector<Weight>& dist, std::vector<VertexId>& pred) {
  const std::size_t n = graph.vertex_count();
  dist.assign(n, kInfiniteDistance);
  pred.assign(n, kNoVertex);
  dist[source] = 0;
  pred[source] = source;

  using Entry = std::pair<Weight, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(0, source);
  std::vector<std::uint8_t> settled(n, 0);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    const auto nb = graph.neighbors(v);
    const auto ws = graph.weights(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const VertexId x = nb[i];
      const Weight nd = d + ws[i];
      if (nd < dist[x]) {
        dist[x] = nd;
        pred[x] = v;
        heap.emplace(nd, x);
      } else if (nd == dist[x] && v < pred[x]) {
        pred[x] = v;  // settled relaxations see final dists, so this is total
      }
    }
  }
}

/// Walks pred forest `pred` (rooted at `root`) from `leaf` to the root,
/// appending each chain edge with its graph weight.
void expand_path(const Graph& graph, const std::vector<VertexId>& pred,
                 VertexId root, VertexId leaf, std::vector<TreeEdge>& out) {
  VertexId x = leaf;
  while (x != root) {
    const VertexId p = pred[x];
    if (p == kNoVertex)
      throw InternalError("path expansion fell off the predecessor forest at "
                          "vertex " + std::to_string(x));
    out.push_back({std::min(p, x), std::max(p, x), graph.edge_weight(p, x)});
    x = p;
  }
}

/// Kruskal over an explicit edge list with (w, u, v) lexicographic order;
/// vertex ids are arbitrary (compressed internally).
std::vector<TreeEdge> kruskal(std::vector<TreeEdge> edges) {
  std::vector<VertexId> verts;
  for (const TreeEdge& e : edges) {
    verts.push_back(e.u);
    verts.push_back(e.v);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  const auto index = [&verts](VertexId v) {
    return static_cast<std::size_t>(
        std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  std::sort(edges.begin(), edges.end(),
            [](const TreeEdge& a, const TreeEdge& b) {
              return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
            });
  std::vector<std::size_t> parent(verts.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  const auto find = [&parent](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<TreeEdge> tree;
  for (const TreeEdge& e : edges) {
    const std::size_t ru = find(index(e.u)), rv = find(index(e.v));
    if (ru == rv) continue;
    parent[ru] = rv;
    tree.push_back(e);
  }
  return tree;
}

/// Removes non-seed leaves until none remain (they contribute weight without
/// helping connectivity).
std::vector<TreeEdge> prune_non_seed_leaves(std::vector<TreeEdge> edges,
                                            std::span<const VertexId> seeds) {
  std::map<VertexId, std::vector<std::size_t>> incident;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    incident[edges[i].u].push_back(i);
    incident[edges[i].v].push_back(i);
  }
  std::vector<std::uint8_t> removed(edges.size(), 0);
  std::map<VertexId, std::size_t> degree;
  for (const auto& [v, inc] : incident) degree[v] = inc.size();

  std::vector<VertexId> worklist;
  for (const auto& [v, d] : degree)
    if (d == 1 && !std::binary_search(seeds.begin(), seeds.end(), v))
      worklist.push_back(v);
  while (!worklist.empty()) {
    const VertexId v = worklist.back();
    worklist.pop_back();
    if (degree[v] != 1) continue;  // may have dropped to 0 already
    for (std::size_t i : incident[v]) {
      if (removed[i]) continue;
      removed[i] = 1;
      const VertexId other = edges[i].u == v ? edges[i].v : edges[i].u;
      --degree[v];
      --degree[other];
      if (degree[other] == 1 &&
          !std::binary_search(seeds.begin(), seeds.end(), other))
        worklist.push_back(other);
    }
  }
  std::vector<TreeEdge> kept;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (!removed[i]) kept.push_back(edges[i]);
  return kept;
}

SteinerTree tree_from_edges(std::vector<TreeEdge> edges) {
  std::sort(edges.begin(), edges.end(),
            [](const TreeEdge& a, const TreeEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  SteinerTree tree;
  for (const TreeEdge& e : edges) tree.total_distance += e.w;
  tree.edges = std::move(edges);
  return tree;
}

}  // namespace

ApspSeeds apsp_seeds(const Graph& graph, std::span<const VertexId> seeds) {
  const std::size_t k = seeds.size();
  ApspSeeds out;
  out.seeds.assign(seeds.begin(), seeds.end());
  out.dist.assign(k, std::vector<Weight>(k, kInfiniteDistance));
  out.pred.resize(k);

  std::vector<Weight> dist;
  for (std::size_t i = 0; i < k; ++i) {
    dijkstra_from(graph, seeds[i], dist, out.pred[i]);
    for (std::size_t j = 0; j < k; ++j) out.dist[i][j] = dist[seeds[j]];
    if (i == 0) {
      // The graph is undirected, so reachability among seeds is an
      // equivalence: checking the first seed's run covers every pair.
      std::vector<VertexId> unreached;
      for (std::size_t j = 0; j < k; ++j)
        if (out.dist[0][j] == kInfiniteDistance)
          unreached.push_back(seeds[j]);
      if (!unreached.empty()) {
        std::string msg = "seeds unreachable from seed " +
                          std::to_string(seeds[0]) + ":";
        for (VertexId s : unreached) msg += ' ' + std::to_string(s);
        throw SeedsDisconnectedError(std::move(msg), std::move(unreached));
      }
    }
  }
  return out;
}

SteinerTree kmb_steiner(const Graph& graph, std::span<const VertexId> seeds) {
  const std::vector<VertexId> seed_list = normalize_seeds(graph, seeds);
  const ApspSeeds apsp = apsp_seeds(graph, seed_list);
  const std::size_t k = seed_list.size();
  if (k == 1) return {};

  // Complete seed distance graph and its spanning tree.
  DistanceGraph dg;
  dg.seeds = seed_list;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      dg.edges.push_back({seed_list[i], seed_list[j], apsp.dist[i][j]});
  const std::vector<DistanceGraph::Edge> mst = mst_prim(dg);

  // Expand each spanning edge into its shortest path; collapse duplicates.
  std::vector<TreeEdge> expanded;
  for (const DistanceGraph::Edge& e : mst) {
    const std::size_t si = static_cast<std::size_t>(
        std::lower_bound(seed_list.begin(), seed_list.end(), e.s) -
        seed_list.begin());
    expand_path(graph, apsp.pred[si], e.s, e.t, expanded);
  }
  std::sort(expanded.begin(), expanded.end(),
            [](const TreeEdge& a, const TreeEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  expanded.erase(std::unique(expanded.begin(), expanded.end()),
                 expanded.end());

  // Second spanning pass over the expanded subgraph, then leaf cleanup.
  std::vector<TreeEdge> second = kruskal(std::move(expanded));
  return tree_from_edges(prune_non_seed_leaves(std::move(second), seed_list));
}

std::vector<VertexState> voronoi_cells_sequential(
    const Graph& graph, std::span<const VertexId> seeds) {
  const std::size_t n = graph.vertex_count();
  std::vector<VertexState> states(n);

  // Multi-source Dijkstra ordered by (dist, src, vertex). A vertex settles
  // with the least (dist, src) pair, matching the relaxation fixpoint: the
  // cell tie on equal distance goes to the smaller seed. pred ties on equal
  // (dist, src) go to the smallest offering neighbor; every neighbor relaxes
  // exactly once (when settled, with final state), so the minimum is total.
  using Entry = std::tuple<Weight, VertexId, VertexId>;  // dist, src, vertex
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (VertexId s : seeds) {
    states[s] = VertexState{s, s, 0};
    heap.emplace(0, s, s);
  }
  std::vector<std::uint8_t> settled(n, 0);
  while (!heap.empty()) {
    const auto [d, src, v] = heap.top();
    heap.pop();
    if (settled[v] || states[v].dist != d || states[v].src != src)
      continue;  // stale entry
    settled[v] = 1;
    const auto nb = graph.neighbors(v);
    const auto ws = graph.weights(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const VertexId x = nb[i];
      const Weight ndist = d + ws[i];
      VertexState& sx = states[x];
      if (ndist < sx.dist || (ndist == sx.dist && src < sx.src)) {
        sx = VertexState{src, v, ndist};
        heap.emplace(ndist, src, x);
      } else if (ndist == sx.dist && src == sx.src && v < sx.pred) {
        sx.pred = v;
      }
    }
  }
  return states;
}

SteinerTree mehlhorn_steiner(const Graph& graph,
                             std::span<const VertexId> seeds) {
  const std::vector<VertexId> seed_list = normalize_seeds(graph, seeds);
  if (seed_list.size() == 1) return {};
  const std::vector<VertexState> states =
      voronoi_cells_sequential(graph, seed_list);

  // Sequential bridge scan: one evaluation per undirected edge.
  CrossCellEdgeMap bridges;
  for (std::size_t vi = 0; vi < graph.vertex_count(); ++vi) {
    const auto v = static_cast<VertexId>(vi);
    const auto nb = graph.neighbors(v);
    const auto ws = graph.weights(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const VertexId u = nb[i];
      if (v >= u) continue;
      if (states[v].src == kNoVertex || states[u].src == kNoVertex) continue;
      if (states[v].src == states[u].src) continue;
      merge_bridge_candidate(bridges, v, states[v], u, states[u], ws[i]);
    }
  }

  const DistanceGraph dg = build_distance_graph(bridges, seed_list);
  const std::vector<DistanceGraph::Edge> mst = mst_prim(dg);
  const CrossCellEdgeMap active = prune_cross_cell_edges(bridges, mst);
  return assemble_tree_from_states(graph, states, active);
}

ExactResult exact_steiner(const Graph& graph, std::span<const VertexId> seeds) {
  const std::vector<VertexId> seed_list = normalize_seeds(graph, seeds);
  const std::size_t k = seed_list.size();
  const std::size_t n = graph.vertex_count();
  if (k > kMaxExactSeeds)
    throw OracleRefusedError(
        "exact solver refused: " + std::to_string(k) + " seeds exceeds the " +
        std::to_string(kMaxExactSeeds) + "-seed guard");
  if (n > kMaxExactVertices)
    throw OracleRefusedError(
        "exact solver refused: " + std::to_string(n) +
        " vertices exceeds the " + std::to_string(kMaxExactVertices) +
        "-vertex guard");
  if (k == 1) return {};

  // Per-seed shortest-path forests feed both the base cases and the final
  // path reconstruction.
  std::vector<std::vector<Weight>> seed_dist(k);
  std::vector<std::vector<VertexId>> seed_pred(k);
  for (std::size_t i = 0; i < k; ++i)
    dijkstra_from(graph, seed_list[i], seed_dist[i], seed_pred[i]);
  {
    std::vector<VertexId> unreached;
    for (std::size_t j = 0; j < k; ++j)
      if (seed_dist[0][seed_list[j]] == kInfiniteDistance)
        unreached.push_back(seed_list[j]);
    if (!unreached.empty()) {
      std::string msg = "seeds unreachable from seed " +
                        std::to_string(seed_list[0]) + ":";
      for (VertexId s : unreached) msg += ' ' + std::to_string(s);
      throw SeedsDisconnectedError(std::move(msg), std::move(unreached));
    }
  }

  // dp[mask][v] = least weight of a tree spanning {seeds in mask} + {v}.
  // back[mask][v] records how that value arose, for reconstruction:
  //   kBase:  shortest path between v and the mask's single seed
  //   kMerge: two subtrees joined at v (aux = one submask)
  //   kEdge:  tree at neighbor aux extended along edge (aux, v)
  enum : std::uint8_t { kBase, kMerge, kEdge };
  struct Back {
    std::uint32_t aux = 0;
    std::uint8_t kind = kBase;
  };
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<std::vector<Weight>> dp(
      full + 1, std::vector<Weight>(n, kInfiniteDistance));
  std::vector<std::vector<Back>> back(full + 1, std::vector<Back>(n));

  for (std::size_t i = 0; i < k; ++i) dp[std::size_t{1} << i] = seed_dist[i];

  for (std::size_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) < 2) continue;
    const std::size_t low = mask & (~mask + 1);
    // Merge: each unordered split evaluated once by anchoring the low bit.
    for (std::size_t sub = (mask - 1) & mask; sub > 0;
         sub = (sub - 1) & mask) {
      if (!(sub & low)) continue;
      const std::size_t rest = mask ^ sub;
      if (rest == 0) continue;
      const auto& dp_sub = dp[sub];
      const auto& dp_rest = dp[rest];
      auto& dp_mask = dp[mask];
      for (std::size_t v = 0; v < n; ++v) {
        if (dp_sub[v] == kInfiniteDistance || dp_rest[v] == kInfiniteDistance)
          continue;
        const Weight cand = dp_sub[v] + dp_rest[v];
        if (cand < dp_mask[v]) {
          dp_mask[v] = cand;
          back[mask][v] = {static_cast<std::uint32_t>(sub), kMerge};
        }
      }
    }
    // Closure: relax over graph edges so a subtree can attach anywhere.
    using Entry = std::pair<Weight, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    auto& dp_mask = dp[mask];
    for (std::size_t v = 0; v < n; ++v)
      if (dp_mask[v] != kInfiniteDistance)
        heap.emplace(dp_mask[v], static_cast<VertexId>(v));
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d != dp_mask[v]) continue;  // stale
      const auto nb = graph.neighbors(v);
      const auto ws = graph.weights(v);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const VertexId x = nb[i];
        const Weight nd = d + ws[i];
        if (nd < dp_mask[x]) {
          dp_mask[x] = nd;
          back[mask][x] = {v, kEdge};
          heap.emplace(nd, x);
        }
      }
    }
  }

  const Weight best = dp[full][seed_list[0]];
  if (best == kInfiniteDistance)
    throw InternalError("exact solver: no spanning value despite connected "
                        "seeds");

  // Reconstruction. Positive weights make optimal decompositions
  // edge-disjoint (shared edges would double-count weight and contradict
  // minimality), so collecting edges cannot produce duplicates; verified by
  // re-summing below.
  std::vector<TreeEdge> edges;
  std::vector<std::pair<std::size_t, VertexId>> stack;
  stack.emplace_back(full, seed_list[0]);
  while (!stack.empty()) {
    const auto [mask, v] = stack.back();
    stack.pop_back();
    if (dp[mask][v] == 0) continue;  // single seed spanning itself
    if (std::popcount(mask) == 1 && back[mask][v].kind == kBase) {
      const std::size_t i = static_cast<std::size_t>(
          std::countr_zero(static_cast<unsigned long long>(mask)));
      expand_path(graph, seed_pred[i], seed_list[i], v, edges);
      continue;
    }
    const Back b = back[mask][v];
    if (b.kind == kMerge) {
      stack.emplace_back(b.aux, v);
      stack.emplace_back(mask ^ b.aux, v);
    } else if (b.kind == kEdge) {
      const VertexId u = b.aux;
      edges.push_back(
          {std::min(u, v), std::max(u, v), graph.edge_weight(u, v)});
      stack.emplace_back(mask, u);
    } else {
      throw InternalError("exact solver: malformed back-reference");
    }
  }

  std::sort(edges.begin(), edges.end(),
            [](const TreeEdge& a, const TreeEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw InternalError("exact solver: reconstruction emitted edge (" +
                          std::to_string(edges[i].u) + ", " +
                          std::to_string(edges[i].v) + ") twice");

  ExactResult result;
  result.optimal_distance = best;
  result.tree = tree_from_edges(std::move(edges));
  if (result.tree.total_distance != best)
    throw InternalError(
        "exact solver: reconstructed tree weight " +
        std::to_string(result.tree.total_distance) +
        " does not match the optimal value " + std::to_string(best));
  return result;
}

}  // namespace steiner
