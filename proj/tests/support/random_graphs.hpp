#pragma once

// Deterministic graph generators for tests. Everything draws through
// steiner::Rng, so a fixed seed reproduces the identical instance anywhere.

#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "steiner/graph.hpp"
#include "steiner/rng.hpp"
#include "steiner/types.hpp"

namespace testsupport {

using steiner::Graph;
using steiner::Rng;
using steiner::UndirectedEdge;
using steiner::VertexId;
using steiner::Weight;

/// Connected graph: random spanning tree over a shuffled vertex order plus
/// `extra_edges` random non-duplicate edges, weights uniform in
/// [w_min, w_max].
inline Graph random_connected_graph(Rng& rng, std::size_t n,
                                    std::size_t extra_edges, Weight w_min,
                                    Weight w_max) {
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform(0, i - 1));
    std::swap(order[i - 1], order[j]);
  }

  std::vector<UndirectedEdge> edges;
  std::set<std::pair<VertexId, VertexId>> used;
  const auto add = [&](VertexId u, VertexId v) {
    const auto key = std::minmax(u, v);
    if (u == v || !used.insert({key.first, key.second}).second) return false;
    edges.push_back({u, v, static_cast<Weight>(rng.uniform(w_min, w_max))});
    return true;
  };

  for (std::size_t i = 1; i < n; ++i)
    add(order[i], order[rng.uniform(0, i - 1)]);
  std::size_t added = 0, attempts = 0;
  while (added < extra_edges && attempts < 100 * extra_edges + 100) {
    ++attempts;
    if (add(static_cast<VertexId>(rng.uniform(0, n - 1)),
            static_cast<VertexId>(rng.uniform(0, n - 1))))
      ++added;
  }
  return Graph::from_undirected_edges(n, edges);
}

/// Preferential-attachment graph: a small complete core, then each new
/// vertex attaches to `attach` distinct endpoints sampled proportionally to
/// degree. Average degree approaches 2 * attach.
inline Graph scale_free_graph(Rng& rng, std::size_t n, std::size_t attach,
                              Weight w_min, Weight w_max) {
  std::vector<UndirectedEdge> edges;
  std::vector<VertexId> endpoint_pool;  // one entry per edge endpoint
  const auto add = [&](VertexId u, VertexId v) {
    edges.push_back({u, v, static_cast<Weight>(rng.uniform(w_min, w_max))});
    endpoint_pool.push_back(u);
    endpoint_pool.push_back(v);
  };

  const std::size_t core = attach + 1;
  for (VertexId i = 0; i < core; ++i)
    for (VertexId j = i + 1; j < core; ++j) add(i, j);
  for (std::size_t v = core; v < n; ++v) {
    std::set<VertexId> targets;
    while (targets.size() < attach)
      targets.insert(
          endpoint_pool[rng.uniform(0, endpoint_pool.size() - 1)]);
    for (VertexId t : targets) add(static_cast<VertexId>(v), t);
  }
  return Graph::from_undirected_edges(n, edges);
}

/// k distinct vertex ids from [0, n), sorted ascending.
inline std::vector<VertexId> sample_vertices(Rng& rng, std::size_t n,
                                             std::size_t k) {
  std::vector<VertexId> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<VertexId> picked = rng.sample_without_replacement(all, k);
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace testsupport
