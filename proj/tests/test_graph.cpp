#include "steiner/graph.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "steiner/errors.hpp"
#include "steiner/rng.hpp"

using namespace steiner;

namespace {

LoadedGraph load_text(const std::string& text, bool read_weights = true) {
  std::istringstream in(text);
  return load_edge_list(in, read_weights);
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

std::vector<VertexId> vec(std::span<const VertexId> s) {
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("rng: uniform draws stay in range and are deterministic") {
  Rng a(42), b(42);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t x = a.uniform(10, 17);
    CHECK(x >= 10);
    CHECK(x <= 17);
    CHECK(x == b.uniform(10, 17));
  }
  Rng c(1);
  CHECK(c.uniform(5, 5) == 5);
  CHECK_THROWS_AS(c.uniform(3, 2), DomainError);
}

TEST_CASE("rng: sampling without replacement yields distinct pool members") {
  Rng rng(7);
  const std::vector<int> pool = {2, 4, 6, 8, 10, 12};
  const auto picked = rng.sample_without_replacement(pool, 4);
  CHECK(picked.size() == 4);
  CHECK(std::set<int>(picked.begin(), picked.end()).size() == 4);
  for (int x : picked) CHECK(std::count(pool.begin(), pool.end(), x) == 1);

  Rng again(7);
  CHECK(again.sample_without_replacement(pool, 4) == picked);
  CHECK_THROWS_AS(rng.sample_without_replacement(pool, 7), DomainError);
}

TEST_CASE("load_edge_list: comments, defaults, self-loops, duplicates, remap") {
  const auto loaded = load_text(
      "# comment line\n"
      "3 1 5\n"
      "1 3 2\n"
      "\n"
      "7 7 9\n"
      "1 2\n"
      "9 3 4\n");

  CHECK(loaded.stats.record_count == 5);
  CHECK(loaded.stats.self_loops_dropped == 1);
  CHECK(loaded.stats.duplicates_merged == 1);
  CHECK(loaded.original_ids == std::vector<std::uint64_t>{1, 2, 3, 9});

  const Graph& g = loaded.graph;
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.arc_count() == 6);
  CHECK(vec(g.neighbors(0)) == std::vector<VertexId>{1, 2});
  CHECK(g.edge_weight(0, 1) == 1);   // "1 2" took the default weight
  CHECK(g.edge_weight(0, 2) == 2);   // duplicate collapsed to the minimum
  CHECK(g.edge_weight(2, 0) == 2);   // symmetric
  CHECK(g.edge_weight(2, 3) == 4);
  CHECK(g.edge_weight(1, 3) == kInfiniteDistance);
  CHECK(!g.has_edge(1, 2));
  CHECK(g.degree(0) == 2);
  CHECK(g.degree(1) == 1);
}

TEST_CASE("load_edge_list: parse errors carry 1-based line numbers") {
  const auto bad_id = message_of([] { load_text("0 1\nx 2\n"); });
  CHECK(bad_id.find("line 2") != std::string::npos);
  CHECK(bad_id.find("'x'") != std::string::npos);

  const auto trailing = message_of([] { load_text("# c\n\n1 2 3 4\n"); });
  CHECK(trailing.find("line 3") != std::string::npos);
  CHECK(trailing.find("trailing") != std::string::npos);

  CHECK_THROWS_AS(load_text("5\n"), ParseError);
  CHECK_THROWS_AS(load_text("1 2 x\n"), ParseError);
  CHECK_THROWS_AS(load_text("1 2 3.5\n"), ParseError);
}

TEST_CASE("load_edge_list: non-positive weights are domain errors") {
  CHECK_THROWS_AS(load_text("0 1 0\n"), DomainError);
  CHECK_THROWS_AS(load_text("0 1 -5\n"), DomainError);
  const auto msg = message_of([] { load_text("0 1 1\n2 3 -7\n"); });
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("-7") != std::string::npos);
}

TEST_CASE("load_edge_list: read_weights=false ignores the third column") {
  const auto loaded = load_text("0 1 500\n1 2 zzz\n", /*read_weights=*/false);
  CHECK(loaded.graph.edge_weight(0, 1) == 1);
  CHECK(loaded.graph.edge_weight(1, 2) == 1);
}

TEST_CASE("load_edge_list: empty input yields the empty graph") {
  const auto loaded = load_text("# nothing\n\n");
  CHECK(loaded.graph.vertex_count() == 0);
  CHECK(loaded.graph.edge_count() == 0);
  CHECK(loaded.original_ids.empty());
}

TEST_CASE("save_edge_list: output reloads to an identical graph") {
  const auto loaded = load_text("10 20 3\n20 30 1\n10 40 7\n30 40 2\n");
  std::ostringstream out;
  save_edge_list(loaded.graph, out);

  const auto reloaded = load_text(out.str());
  CHECK(reloaded.graph == loaded.graph);
  // Saved ids are already dense, so reloading remaps by identity.
  CHECK(reloaded.original_ids == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(reloaded.stats.duplicates_merged == 0);
  CHECK(reloaded.stats.self_loops_dropped == 0);
}

TEST_CASE("from_undirected_edges: rejects bad input") {
  const UndirectedEdge out_of_range[] = {{0, 5, 1}};
  CHECK_THROWS_AS(Graph::from_undirected_edges(3, out_of_range), DomainError);
  const UndirectedEdge loop[] = {{1, 1, 1}};
  CHECK_THROWS_AS(Graph::from_undirected_edges(3, loop), DomainError);
  const UndirectedEdge zero_w[] = {{0, 1, 0}};
  CHECK_THROWS_AS(Graph::from_undirected_edges(3, zero_w), DomainError);
}

TEST_CASE("from_undirected_edges: neighbor lists are sorted; duplicates keep min") {
  const UndirectedEdge edges[] = {{4, 0, 9}, {0, 2, 5}, {2, 0, 3}, {0, 1, 1}};
  const Graph g = Graph::from_undirected_edges(5, edges);
  CHECK(vec(g.neighbors(0)) == std::vector<VertexId>{1, 2, 4});
  CHECK(g.edge_weight(0, 2) == 3);
  CHECK(g.edge_count() == 3);
}

TEST_CASE("synthesize_weights: deterministic, bounded, topology-preserving") {
  const auto loaded = load_text(
      "0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n2 4 1\n3 4 1\n4 5 1\n"
      "5 6 1\n5 7 1\n6 7 1\n0 7 1\n1 6 1\n2 5 1\n3 6 1\n4 7 1\n0 5 1\n"
      "1 7 1\n2 6 1\n");
  const Graph& g = loaded.graph;

  const Graph a = synthesize_weights(g, 3, 11, 99);
  const Graph b = synthesize_weights(g, 3, 11, 99);
  CHECK(a == b);

  for (std::size_t u = 0; u < a.vertex_count(); ++u) {
    CHECK(vec(a.neighbors(u)) == vec(g.neighbors(u)));
    for (std::size_t i = 0; i < a.neighbors(u).size(); ++i) {
      const Weight w = a.weights(u)[i];
      CHECK(w >= 3);
      CHECK(w <= 11);
      CHECK(a.edge_weight(a.neighbors(u)[i], u) == w);  // symmetric draw
    }
  }

  CHECK(synthesize_weights(g, 3, 11, 100) != a);
  CHECK(synthesize_weights(g, 4, 4, 0).edge_weight(0, 1) == 4);
  CHECK_THROWS_AS(synthesize_weights(g, 0, 5, 1), DomainError);
  CHECK_THROWS_AS(synthesize_weights(g, 6, 5, 1), DomainError);
}

TEST_CASE("largest_connected_component: size ties keep the smallest id") {
  const UndirectedEdge edges[] = {{0, 5, 1}, {5, 6, 1}, {1, 2, 1}, {2, 3, 1}};
  const Graph g = Graph::from_undirected_edges(8, edges);
  // Components {0,5,6} and {1,2,3} tie at size 3; 4 and 7 are singletons.
  CHECK(largest_connected_component(g) == std::vector<VertexId>{0, 5, 6});

  const UndirectedEdge bigger[] = {
      {0, 5, 1}, {5, 6, 1}, {1, 2, 1}, {2, 3, 1}, {3, 7, 1}};
  CHECK(largest_connected_component(Graph::from_undirected_edges(8, bigger)) ==
        std::vector<VertexId>{1, 2, 3, 7});

  CHECK(largest_connected_component(Graph()).empty());
}

TEST_CASE("partition map: modulo ownership") {
  const PartitionMap pm(3);
  CHECK(pm.partition_count() == 3);
  CHECK(pm.owner(0) == 0);
  CHECK(pm.owner(7) == 1);
  CHECK(pm.owner(8) == 2);
  CHECK_THROWS_AS(PartitionMap(0), DomainError);

  const PartitionMap one(1);
  for (VertexId v = 0; v < 10; ++v) CHECK(one.owner(v) == 0);
}

TEST_CASE("summarize: degree and weight digest") {
  const auto loaded = load_text("0 1 1\n0 2 2\n2 3 4\n");
  const GraphSummary s = summarize(loaded.graph);
  CHECK(s.vertex_count == 4);
  CHECK(s.arc_count == 6);
  CHECK(s.max_degree == 2);
  CHECK(s.avg_degree == doctest::Approx(1.5));
  CHECK(s.weight_min == 1);
  CHECK(s.weight_max == 4);

  const GraphSummary empty = summarize(Graph());
  CHECK(empty.vertex_count == 0);
  CHECK(empty.weight_min == 0);
  CHECK(empty.weight_max == 0);
}
