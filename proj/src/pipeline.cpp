#include "steiner/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "steiner/errors.hpp"

namespace steiner {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

/// Payload of Voronoi growth messages: the seed whose cell is expanding.
/// The offered distance travels in Visitor::priority_key.
struct CellOffer {
  VertexId cell = kNoVertex;
};

/// Payload carrying a remote arc endpoint's state for bridge evaluation.
struct StateExchange {
  VertexId src = kNoVertex;
  Weight dist = kInfiniteDistance;
  Weight arc_weight = 0;
};

/// Empty payload for predecessor-chain walking.
struct ChainStep {};

/// Union-find with path halving; used by validate_tree.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// False if x and y were already connected (joining would close a cycle).
  bool unite(std::size_t x, std::size_t y) {
    const std::size_t rx = find(x), ry = find(y);
    if (rx == ry) return false;
    parent_[rx] = ry;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

bool cross_cell_edge_less(const CrossCellEdge& a, const CrossCellEdge& b) {
  const auto key = [](const CrossCellEdge& e) {
    return std::tuple<Weight, VertexId, VertexId>(
        e.dist, std::min(e.u, e.v), std::max(e.u, e.v));
  };
  return key(a) < key(b);
}

void merge_bridge_candidate(CrossCellEdgeMap& map, VertexId x,
                            const VertexState& sx, VertexId y,
                            const VertexState& sy, Weight arc_weight) {
  // Key is the unordered seed pair; the entry is oriented so .u lies in the
  // smaller seed's cell.
  const SeedPair key{std::min(sx.src, sy.src), std::max(sx.src, sy.src)};
  CrossCellEdge candidate;
  if (sx.src < sy.src)
    candidate = {x, y, sx.dist + arc_weight + sy.dist};
  else
    candidate = {y, x, sy.dist + arc_weight + sx.dist};
  auto [it, inserted] = map.try_emplace(key, candidate);
  if (!inserted && cross_cell_edge_less(candidate, it->second))
    it->second = candidate;
}

std::vector<VertexId> normalize_seeds(const Graph& graph,
                                      std::span<const VertexId> seeds) {
  if (seeds.empty()) throw DomainError("seeds: the seed set is empty");
  std::vector<VertexId> out(seeds.begin(), seeds.end());
  std::sort(out.begin(), out.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] >= graph.vertex_count())
      throw DomainError("seeds: vertex id " + std::to_string(out[i]) +
                        " out of range (vertex count " +
                        std::to_string(graph.vertex_count()) + ")");
    if (i > 0 && out[i] == out[i - 1])
      throw DomainError("seeds: duplicate vertex id " +
                        std::to_string(out[i]));
  }
  return out;
}

std::vector<VertexState> compute_voronoi_cells(const Graph& graph,
                                               std::span<const VertexId> seeds,
                                               const PartitionMap& partitions,
                                               const EngineConfig& config,
                                               PhaseStats& stats) {
  std::vector<VertexState> states(graph.vertex_count());
  std::vector<Visitor<CellOffer>> init;
  init.reserve(seeds.size());
  for (VertexId s : seeds) {
    states[s] = VertexState{s, s, 0};
    init.push_back({s, s, 0, CellOffer{s}});
  }

  // Relaxation handler. All state writes touch states[target] only, which is
  // owned by the executing partition. A message offers membership in cell
  // `payload.cell` at distance `priority_key`; acceptance follows the total
  // order (dist, src), and ties on both refine pred toward the smallest
  // sender without re-broadcasting (outgoing offers do not depend on pred,
  // so the refinement cannot start new traffic).
  const auto handler = [&graph, &states](const Visitor<CellOffer>& v,
                                         const auto& send) {
    VertexState& st = states[v.target];
    const Weight offered = v.priority_key;
    const VertexId cell = v.payload.cell;
    bool adopt = false;
    bool broadcast = false;
    if (offered == 0 && st.dist == 0 && cell == v.target) {
      broadcast = true;  // seed bootstrapping its own cell; state already set
    } else if (offered < st.dist || (offered == st.dist && cell < st.src)) {
      adopt = true;
      broadcast = true;
    } else if (offered == st.dist && cell == st.src && v.sender < st.pred) {
      st.pred = v.sender;
    }
    if (adopt) {
      st.src = cell;
      st.pred = v.sender;
      st.dist = offered;
    }
    if (broadcast) {
      const auto nb = graph.neighbors(v.target);
      const auto ws = graph.weights(v.target);
      for (std::size_t i = 0; i < nb.size(); ++i)
        send(Visitor<CellOffer>{nb[i], v.target, offered + ws[i],
                                CellOffer{cell}});
    }
  };

  run_to_quiescence<CellOffer>(graph, partitions, config, init, handler,
                               stats);
  return states;
}

LocalMinDistEdges local_min_dist_edges(const Graph& graph,
                                       std::span<const VertexState> states,
                                       const PartitionMap& partitions,
                                       const EngineConfig& config,
                                       PhaseStats& stats) {
  const std::size_t P = partitions.partition_count();
  LocalMinDistEdges result;
  result.per_partition.resize(P);
  std::vector<std::uint64_t> skips(P, 0);

  // Scan pass: same-partition arcs are folded directly (once per edge); for
  // every arc leaving the partition, ship this endpoint's state to the other
  // side, where the owning partition evaluates the candidate.
  std::vector<Visitor<StateExchange>> exchanges;
  for (std::size_t vi = 0; vi < graph.vertex_count(); ++vi) {
    const auto v = static_cast<VertexId>(vi);
    const std::size_t p = partitions.owner(v);
    const auto nb = graph.neighbors(v);
    const auto ws = graph.weights(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const VertexId u = nb[i];
      if (partitions.owner(u) == p) {
        if (v < u) {
          if (states[v].src == kNoVertex || states[u].src == kNoVertex)
            ++skips[p];
          else if (states[v].src != states[u].src)
            merge_bridge_candidate(result.per_partition[p], v, states[v], u,
                                   states[u], ws[i]);
        }
      } else {
        if (states[v].src == kNoVertex)
          ++skips[p];  // nothing to offer from an unreached endpoint
        else
          exchanges.push_back({u, v, 0,
                               StateExchange{states[v].src, states[v].dist,
                                             ws[i]}});
      }
    }
  }

  const auto handler = [&](const Visitor<StateExchange>& msg,
                           const auto& /*send*/) {
    const std::size_t p = partitions.owner(msg.target);
    const VertexState& local = states[msg.target];
    if (local.src == kNoVertex) {
      ++skips[p];
      return;
    }
    const VertexState remote{msg.payload.src, kNoVertex, msg.payload.dist};
    if (remote.src == local.src) return;
    merge_bridge_candidate(result.per_partition[p], msg.sender, remote,
                           msg.target, local, msg.payload.arc_weight);
  };

  run_to_quiescence<StateExchange>(graph, partitions, config, exchanges,
                                   handler, stats);
  result.unreached_arc_skips =
      std::accumulate(skips.begin(), skips.end(), std::uint64_t{0});
  return result;
}

CrossCellEdgeMap global_min_reduce(std::span<const CrossCellEdgeMap> locals) {
  return all_reduce_min(locals, cross_cell_edge_less);
}

DistanceGraph build_distance_graph(const CrossCellEdgeMap& bridges,
                                   std::span<const VertexId> seeds) {
  DistanceGraph dg;
  dg.seeds.assign(seeds.begin(), seeds.end());
  dg.edges.reserve(bridges.size());
  for (const auto& [pair, edge] : bridges)
    dg.edges.push_back({pair.first, pair.second, edge.dist});
  return dg;
}

std::vector<DistanceGraph::Edge> mst_prim(const DistanceGraph& dg) {
  if (dg.seeds.empty()) throw DomainError("mst: empty seed set");
  std::vector<DistanceGraph::Edge> result;
  if (dg.seeds.size() == 1) return result;

  const auto seed_index = [&dg](VertexId s) {
    const auto it = std::lower_bound(dg.seeds.begin(), dg.seeds.end(), s);
    if (it == dg.seeds.end() || *it != s)
      throw InternalError("mst: edge endpoint " + std::to_string(s) +
                          " is not a seed");
    return static_cast<std::size_t>(it - dg.seeds.begin());
  };

  std::vector<std::vector<std::size_t>> incident(dg.seeds.size());
  for (std::size_t e = 0; e < dg.edges.size(); ++e) {
    incident[seed_index(dg.edges[e].s)].push_back(e);
    incident[seed_index(dg.edges[e].t)].push_back(e);
  }

  // Candidate order is the total order (w, s, t): unique per edge, so the
  // grown tree is the same regardless of how equal-weight MSTs could tie.
  using Candidate = std::tuple<Weight, VertexId, VertexId, std::size_t>;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;
  std::vector<std::uint8_t> in_tree(dg.seeds.size(), 0);

  const auto add_frontier = [&](std::size_t local) {
    for (std::size_t e : incident[local]) {
      const DistanceGraph::Edge& edge = dg.edges[e];
      heap.emplace(edge.w, edge.s, edge.t, e);
    }
  };

  in_tree[0] = 1;  // dg.seeds is sorted: index 0 is the smallest seed
  add_frontier(0);
  while (!heap.empty() && result.size() + 1 < dg.seeds.size()) {
    const auto [w, s, t, e] = heap.top();
    heap.pop();
    const std::size_t si = seed_index(s), ti = seed_index(t);
    if (in_tree[si] && in_tree[ti]) continue;
    const std::size_t grown = in_tree[si] ? ti : si;
    in_tree[grown] = 1;
    result.push_back(dg.edges[e]);
    add_frontier(grown);
  }

  if (result.size() + 1 < dg.seeds.size()) {
    std::vector<VertexId> unreached;
    for (std::size_t i = 0; i < dg.seeds.size(); ++i)
      if (!in_tree[i]) unreached.push_back(dg.seeds[i]);
    std::string msg = "seeds not connected to the rest of the seed set:";
    for (VertexId s : unreached) msg += ' ' + std::to_string(s);
    throw SeedsDisconnectedError(std::move(msg), std::move(unreached));
  }
  return result;
}

CrossCellEdgeMap prune_cross_cell_edges(
    const CrossCellEdgeMap& bridges,
    std::span<const DistanceGraph::Edge> mst) {
  CrossCellEdgeMap active;
  for (const DistanceGraph::Edge& e : mst) {
    const auto it = bridges.find(SeedPair{e.s, e.t});
    if (it == bridges.end())
      throw InternalError("edge pruning: spanning-tree edge (" +
                          std::to_string(e.s) + ", " + std::to_string(e.t) +
                          ") has no bridge entry");
    active.emplace(it->first, it->second);
  }
  return active;
}

namespace {

/// Shared chain-walking step: claims `x` (once), emits the edge to its
/// predecessor after sanity checks, and reports whether the walk continues
/// at pred (true) or stops because the seed was reached.
/// `claimed` must be per-vertex and start all-false.
bool claim_chain_vertex(const Graph& graph, std::span<const VertexState> states,
                        std::vector<std::uint8_t>& claimed, VertexId x,
                        std::vector<TreeEdge>& out) {
  if (claimed[x]) return false;
  claimed[x] = 1;
  const VertexState& st = states[x];
  if (st.src == kNoVertex || st.pred == kNoVertex)
    throw InternalError("tree tracing reached an unassigned vertex " +
                        std::to_string(x));
  if (st.src == x) return false;  // seed: chain complete
  const Weight w = graph.edge_weight(st.pred, x);
  if (w == kInfiniteDistance || states[st.pred].dist + w != st.dist)
    throw InternalError(
        "tree tracing found a corrupted predecessor chain at vertex " +
        std::to_string(x));
  out.push_back({std::min(st.pred, x), std::max(st.pred, x), w});
  return st.pred != st.src;
}

SteinerTree finish_tree(std::vector<TreeEdge> edges) {
  std::sort(edges.begin(), edges.end(), [](const TreeEdge& a,
                                           const TreeEdge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw InternalError("tree tracing produced a duplicate edge");
  SteinerTree tree;
  tree.total_distance = 0;
  for (const TreeEdge& e : edges) tree.total_distance += e.w;
  tree.edges = std::move(edges);
  return tree;
}

}  // namespace

SteinerTree trace_tree_edges(const Graph& graph,
                             std::span<const VertexState> states,
                             const CrossCellEdgeMap& active_bridges,
                             const PartitionMap& partitions,
                             const EngineConfig& config, PhaseStats& stats) {
  const std::size_t P = partitions.partition_count();
  std::vector<std::vector<TreeEdge>> collected(P);
  std::vector<std::uint8_t> claimed(graph.vertex_count(), 0);

  // Each surviving bridge contributes its concrete graph edge up front (on
  // the partition owning the smaller-cell endpoint) and starts a chain walk
  // at both endpoints.
  std::vector<Visitor<ChainStep>> init;
  init.reserve(active_bridges.size() * 2);
  for (const auto& [pair, bridge] : active_bridges) {
    const Weight w = graph.edge_weight(bridge.u, bridge.v);
    if (w == kInfiniteDistance)
      throw InternalError("tree tracing: bridge (" +
                          std::to_string(bridge.u) + ", " +
                          std::to_string(bridge.v) + ") is not a graph edge");
    collected[partitions.owner(bridge.u)].push_back(
        {std::min(bridge.u, bridge.v), std::max(bridge.u, bridge.v), w});
    init.push_back({bridge.u, bridge.v, 0, {}});
    init.push_back({bridge.v, bridge.u, 0, {}});
  }

  const auto handler = [&](const Visitor<ChainStep>& msg, const auto& send) {
    const VertexId x = msg.target;
    if (claim_chain_vertex(graph, states, claimed, x,
                           collected[partitions.owner(x)]))
      send(Visitor<ChainStep>{states[x].pred, x, 0, {}});
  };

  run_to_quiescence<ChainStep>(graph, partitions, config, init, handler,
                               stats);

  std::vector<TreeEdge> edges;
  for (auto& part : collected)
    edges.insert(edges.end(), part.begin(), part.end());
  return finish_tree(std::move(edges));
}

SteinerTree assemble_tree_from_states(const Graph& graph,
                                      std::span<const VertexState> states,
                                      const CrossCellEdgeMap& active_bridges) {
  std::vector<TreeEdge> edges;
  std::vector<std::uint8_t> claimed(graph.vertex_count(), 0);
  for (const auto& [pair, bridge] : active_bridges) {
    const Weight w = graph.edge_weight(bridge.u, bridge.v);
    if (w == kInfiniteDistance)
      throw InternalError("tree assembly: bridge (" +
                          std::to_string(bridge.u) + ", " +
                          std::to_string(bridge.v) + ") is not a graph edge");
    edges.push_back({std::min(bridge.u, bridge.v),
                     std::max(bridge.u, bridge.v), w});
    for (VertexId endpoint : {bridge.u, bridge.v}) {
      VertexId x = endpoint;
      while (claim_chain_vertex(graph, states, claimed, x, edges))
        x = states[x].pred;
    }
  }
  return finish_tree(std::move(edges));
}

SolveResult solve_steiner(const Graph& graph, std::span<const VertexId> seeds,
                          const PartitionMap& partitions,
                          const EngineConfig& config) {
  const std::vector<VertexId> seed_list = normalize_seeds(graph, seeds);
  SolveResult result;
  for (const char* label : kPipelinePhaseLabels) result.metrics.phase(label);

  auto t0 = Clock::now();
  const std::vector<VertexState> states = compute_voronoi_cells(
      graph, seed_list, partitions, config,
      result.metrics.phase(phase::kVoronoiCell));
  result.metrics.phase(phase::kVoronoiCell).wall_time_ms = ms_since(t0);

  t0 = Clock::now();
  const LocalMinDistEdges locals = local_min_dist_edges(
      graph, states, partitions, config,
      result.metrics.phase(phase::kLocalMinDistEdge));
  result.metrics.phase(phase::kLocalMinDistEdge).wall_time_ms = ms_since(t0);

  t0 = Clock::now();
  const CrossCellEdgeMap bridges = global_min_reduce(locals.per_partition);
  const DistanceGraph dg = build_distance_graph(bridges, seed_list);
  result.metrics.phase(phase::kGlobalMinDistEdge).wall_time_ms = ms_since(t0);

  t0 = Clock::now();
  const std::vector<DistanceGraph::Edge> mst = mst_prim(dg);
  result.metrics.phase(phase::kMst).wall_time_ms = ms_since(t0);

  t0 = Clock::now();
  const CrossCellEdgeMap active = prune_cross_cell_edges(bridges, mst);
  result.metrics.phase(phase::kEdgePruning).wall_time_ms = ms_since(t0);

  t0 = Clock::now();
  result.tree = trace_tree_edges(graph, states, active, partitions, config,
                                 result.metrics.phase(phase::kTreeEdge));
  result.metrics.phase(phase::kTreeEdge).wall_time_ms = ms_since(t0);

  return result;
}

bool ValidationReport::all_pass() const {
  for (const ValidationCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::first_failure() const {
  for (const ValidationCheck& c : checks)
    if (!c.pass) return c.name + ": " + c.detail;
  return {};
}

ValidationReport validate_tree(const SteinerTree& tree,
                               std::span<const VertexId> seeds,
                               const Graph& graph) {
  ValidationReport report;
  const auto add = [&report](std::string name, bool pass, std::string detail) {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  // Edges must be real, canonical, and unique.
  bool edges_ok = true;
  std::string edges_detail = "all edges exist with matching weights";
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const TreeEdge& e : tree.edges) {
    if (e.u >= e.v || e.v >= graph.vertex_count()) {
      edges_ok = false;
      edges_detail = "edge (" + std::to_string(e.u) + ", " +
                     std::to_string(e.v) + ") is not canonical (u < v) or "
                     "out of range";
      break;
    }
    if (!seen.insert({e.u, e.v}).second) {
      edges_ok = false;
      edges_detail = "edge (" + std::to_string(e.u) + ", " +
                     std::to_string(e.v) + ") appears twice";
      break;
    }
    const Weight w = graph.edge_weight(e.u, e.v);
    if (w != e.w) {
      edges_ok = false;
      edges_detail =
          "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") " +
          (w == kInfiniteDistance
               ? "does not exist in the graph"
               : "has weight " + std::to_string(w) + ", tree claims " +
                     std::to_string(e.w));
      break;
    }
  }
  add("edges_exist", edges_ok, edges_detail);

  // Vertex set of the tree.
  std::vector<VertexId> verts;
  for (const TreeEdge& e : tree.edges) {
    verts.push_back(e.u);
    verts.push_back(e.v);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  const auto vert_index = [&verts](VertexId v) {
    return static_cast<std::size_t>(
        std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };

  bool acyclic = true;
  DisjointSets dsu(verts.size());
  for (const TreeEdge& e : tree.edges)
    if (e.v < graph.vertex_count() && !dsu.unite(vert_index(e.u), vert_index(e.v)))
      acyclic = false;
  add("acyclic", acyclic,
      acyclic ? "no cycles" : "edge set contains a cycle");

  // Connected: |edges| == |verts| - 1 together with acyclicity implies one
  // component; stated directly for a readable failure.
  const bool connected =
      verts.empty() || tree.edges.size() + 1 == verts.size();
  add("connected", connected && acyclic,
      connected ? "single component"
                : "edge/vertex count mismatch: " +
                      std::to_string(tree.edges.size()) + " edges over " +
                      std::to_string(verts.size()) + " vertices");

  // Every seed present. The empty tree is a valid result only for |S| <= 1.
  bool spans = true;
  std::string spans_detail = "all seeds spanned";
  if (tree.edges.empty()) {
    spans = seeds.size() <= 1;
    if (!spans) spans_detail = "tree is empty but |S| > 1";
  } else {
    for (VertexId s : seeds) {
      if (!std::binary_search(verts.begin(), verts.end(), s)) {
        spans = false;
        spans_detail = "seed " + std::to_string(s) + " is not in the tree";
        break;
      }
    }
  }
  add("spans_seeds", spans, spans_detail);

  // Leaves must be seeds, otherwise the tree carries removable weight.
  std::map<VertexId, std::size_t> degree;
  for (const TreeEdge& e : tree.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  bool leaves_ok = true;
  std::string leaves_detail = "every leaf is a seed";
  for (const auto& [v, d] : degree) {
    if (d == 1 && !std::binary_search(seeds.begin(), seeds.end(), v)) {
      leaves_ok = false;
      leaves_detail = "leaf " + std::to_string(v) + " is not a seed";
      break;
    }
  }
  add("leaves_are_seeds", leaves_ok, leaves_detail);

  Weight total = 0;
  for (const TreeEdge& e : tree.edges) total += e.w;
  add("total_distance", total == tree.total_distance,
      total == tree.total_distance
          ? "total matches edge sum"
          : "edge sum " + std::to_string(total) + " != recorded total " +
                std::to_string(tree.total_distance));

  return report;
}

void save_tree(const SteinerTree& tree, std::size_t seed_count,
               std::ostream& out) {
  out << "# steiner tree: seeds=" << seed_count
      << " edges=" << tree.edges.size()
      << " total_distance=" << tree.total_distance << '\n';
  for (const TreeEdge& e : tree.edges)
    out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

std::string tree_to_string(const SteinerTree& tree, std::size_t seed_count) {
  std::ostringstream out;
  save_tree(tree, seed_count, out);
  return out.str();
}

}  // namespace steiner
