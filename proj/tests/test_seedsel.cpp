#include "steiner/seedsel.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <vector>

#include "doctest.h"
#include "steiner/baselines.hpp"
#include "steiner/errors.hpp"
#include "steiner/graph.hpp"
#include "steiner/rng.hpp"
#include "support/random_graphs.hpp"

using namespace steiner;

namespace {

Graph path5() {
  const UndirectedEdge edges[] = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}};
  return Graph::from_undirected_edges(5, edges);
}

std::vector<VertexId> select(const Graph& g, SeedStrategy strategy,
                             std::size_t count, std::uint64_t rng_seed) {
  SeedSpec spec;
  spec.strategy = strategy;
  spec.count = count;
  spec.rng_seed = rng_seed;
  return select_seeds(g, spec);
}

/// Finds an rng seed whose random first pick is `wanted`, so the
/// deterministic continuation of the strategy can be frozen.
std::uint64_t rng_seed_with_first_pick(const Graph& g, SeedStrategy strategy,
                                       VertexId wanted) {
  for (std::uint64_t rng_seed = 0; rng_seed < 64; ++rng_seed) {
    const auto first = select(g, strategy, 1, rng_seed);
    if (first == std::vector<VertexId>{wanted}) return rng_seed;
  }
  FAIL("no rng seed reaches the wanted first pick");
  return 0;
}

/// Unweighted hop distance, for spread assertions.
std::size_t hop_distance(const Graph& g, VertexId from, VertexId to) {
  std::vector<std::size_t> dist(g.vertex_count(), SIZE_MAX);
  std::deque<VertexId> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    if (v == to) return dist[v];
    for (VertexId nb : g.neighbors(v))
      if (dist[nb] == SIZE_MAX) {
        dist[nb] = dist[v] + 1;
        queue.push_back(nb);
      }
  }
  return SIZE_MAX;
}

}  // namespace

TEST_CASE("strategy names round-trip; unknown names are rejected") {
  for (SeedStrategy s :
       {SeedStrategy::kBfsLevel, SeedStrategy::kUniformRandom,
        SeedStrategy::kEccentric, SeedStrategy::kProximate})
    CHECK(parse_seed_strategy(to_string(s)) == s);
  CHECK(to_string(SeedStrategy::kBfsLevel) == "bfs_level");
  CHECK_THROWS_AS(parse_seed_strategy("nearest"), DomainError);
}

TEST_CASE("bfs_level: largest-remainder quotas, root-side tie-break") {
  const Graph g = path5();
  // Five singleton levels. count=1: every remainder ties; the root level
  // wins the only seat.
  CHECK(select(g, SeedStrategy::kBfsLevel, 1, 7) ==
        std::vector<VertexId>{0});
  // count=2 and 3: seats fill outward from the root on ties.
  CHECK(select(g, SeedStrategy::kBfsLevel, 2, 7) ==
        std::vector<VertexId>{0, 1});
  CHECK(select(g, SeedStrategy::kBfsLevel, 3, 7) ==
        std::vector<VertexId>{0, 1, 2});
  CHECK(select(g, SeedStrategy::kBfsLevel, 5, 7) ==
        std::vector<VertexId>{0, 1, 2, 3, 4});
}

TEST_CASE("bfs_level: quotas are proportional to level sizes") {
  // Star: level 0 holds 1 vertex, level 1 holds 6. count=3 gives the outer
  // level all three seats (18/7 = 2 rem 4 beats 3/7 = 0 rem 3).
  const UndirectedEdge edges[] = {{0, 1, 1}, {0, 2, 1}, {0, 3, 1},
                                  {0, 4, 1}, {0, 5, 1}, {0, 6, 1}};
  const Graph star = Graph::from_undirected_edges(7, edges);
  for (std::uint64_t rng_seed : {0, 1, 2, 3}) {
    const auto seeds = select(star, SeedStrategy::kBfsLevel, 3, rng_seed);
    CHECK(seeds.size() == 3);
    CHECK(!std::binary_search(seeds.begin(), seeds.end(), VertexId{0}));
    for (VertexId s : seeds) CHECK(s >= 1);
  }
}

TEST_CASE("uniform_random: deterministic, distinct, inside the largest "
          "component") {
  const UndirectedEdge edges[] = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1},
                                  {3, 4, 1}, {5, 6, 1}};
  const Graph g = Graph::from_undirected_edges(7, edges);

  for (std::uint64_t rng_seed = 0; rng_seed < 10; ++rng_seed) {
    const auto seeds = select(g, SeedStrategy::kUniformRandom, 3, rng_seed);
    CHECK(seeds == select(g, SeedStrategy::kUniformRandom, 3, rng_seed));
    CHECK(std::set<VertexId>(seeds.begin(), seeds.end()).size() == 3);
    for (VertexId s : seeds) CHECK(s <= 4);  // never the 5-6 island
    CHECK(std::is_sorted(seeds.begin(), seeds.end()));
  }

  // Distinct rng seeds eventually give distinct selections.
  std::set<std::vector<VertexId>> distinct;
  for (std::uint64_t rng_seed = 0; rng_seed < 10; ++rng_seed)
    distinct.insert(select(g, SeedStrategy::kUniformRandom, 3, rng_seed));
  CHECK(distinct.size() > 1);
}

TEST_CASE("eccentric: frozen walk on the path (max summed hops, min-id "
          "ties)") {
  const Graph g = path5();
  const std::uint64_t rng_seed =
      rng_seed_with_first_pick(g, SeedStrategy::kEccentric, 0);
  // From 0 the farthest vertex is 4; then every remaining vertex ties at
  // summed distance 4 and the smallest id (1) wins.
  CHECK(select(g, SeedStrategy::kEccentric, 3, rng_seed) ==
        std::vector<VertexId>{0, 1, 4});
}

TEST_CASE("proximate: frozen walk on the path (min summed hops, min-id "
          "ties)") {
  const Graph g = path5();
  const std::uint64_t rng_seed =
      rng_seed_with_first_pick(g, SeedStrategy::kProximate, 2);
  // From 2: vertices 1 and 3 tie at distance 1 -> 1; then 0 and 3 tie at
  // summed distance 3 -> 0.
  CHECK(select(g, SeedStrategy::kProximate, 2, rng_seed) ==
        std::vector<VertexId>{1, 2});
  CHECK(select(g, SeedStrategy::kProximate, 3, rng_seed) ==
        std::vector<VertexId>{0, 1, 2});
}

TEST_CASE("eccentric spreads seeds farther apart than proximate") {
  // Two triangle clusters joined by a long path.
  const UndirectedEdge edges[] = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1},  // A
                                  {7, 8, 1}, {7, 9, 1}, {8, 9, 1},  // B
                                  {2, 3, 1}, {3, 4, 1}, {4, 5, 1},
                                  {5, 6, 1}, {6, 7, 1}};            // bridge
  const Graph g = Graph::from_undirected_edges(10, edges);

  for (std::uint64_t rng_seed : {0, 1, 2, 3, 4}) {
    const auto far = select(g, SeedStrategy::kEccentric, 2, rng_seed);
    const auto near = select(g, SeedStrategy::kProximate, 2, rng_seed);
    CHECK(hop_distance(g, far[0], far[1]) >
          hop_distance(g, near[0], near[1]));
  }
}

TEST_CASE("proximate seed sets solve cheaper than eccentric ones on "
          "average") {
  Rng graph_rng(2024);
  const Graph g =
      testsupport::random_connected_graph(graph_rng, 60, 120, 1, 10);

  std::uint64_t proximate_total = 0;
  std::uint64_t eccentric_total = 0;
  for (std::uint64_t rng_seed = 0; rng_seed < 30; ++rng_seed) {
    proximate_total +=
        mehlhorn_steiner(g, select(g, SeedStrategy::kProximate, 6, rng_seed))
            .total_distance;
    eccentric_total +=
        mehlhorn_steiner(g, select(g, SeedStrategy::kEccentric, 6, rng_seed))
            .total_distance;
  }
  CHECK(proximate_total < eccentric_total);
}

TEST_CASE("select_seeds: domain errors for impossible requests") {
  const Graph g = path5();
  SeedSpec zero;
  zero.count = 0;
  CHECK_THROWS_AS(select_seeds(g, zero), DomainError);

  const UndirectedEdge edges[] = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1},
                                  {3, 4, 1}, {5, 6, 1}};
  const Graph with_island = Graph::from_undirected_edges(7, edges);
  SeedSpec too_many;
  too_many.count = 6;  // 7 vertices, but the largest component has only 5
  CHECK_THROWS_AS(select_seeds(with_island, too_many), DomainError);

  SeedSpec one;
  one.count = 1;
  CHECK_THROWS_AS(select_seeds(Graph(), one), DomainError);
}

TEST_CASE("every strategy is deterministic for a fixed (graph, spec)") {
  Rng rng(99);
  const Graph g = testsupport::random_connected_graph(rng, 25, 40, 1, 9);
  for (SeedStrategy strategy :
       {SeedStrategy::kBfsLevel, SeedStrategy::kUniformRandom,
        SeedStrategy::kEccentric, SeedStrategy::kProximate}) {
    for (std::uint64_t rng_seed : {0, 5, 11}) {
      const auto a = select(g, strategy, 4, rng_seed);
      const auto b = select(g, strategy, 4, rng_seed);
      CHECK(a == b);
      CHECK(a.size() == 4);
      CHECK(std::is_sorted(a.begin(), a.end()));
      CHECK(std::set<VertexId>(a.begin(), a.end()).size() == 4);
    }
  }
}
