#include "steiner/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "steiner/rng.hpp"

namespace steiner {

namespace {

/// Strict full-token unsigned parse; empty/partial/overflowing tokens fail.
bool parse_u64(std::string_view token, std::uint64_t& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_i64(std::string_view token, std::int64_t& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

[[noreturn]] void parse_fail(std::uint64_t line_no, const std::string& what) {
  throw ParseError("edge list line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph Graph::from_undirected_edges(std::size_t vertex_count,
                                   std::span<const UndirectedEdge> edges) {
  // Normalize to (min,max), order canonically, and collapse duplicates to the
  // minimum weight before laying out the CSR arrays.
  std::vector<UndirectedEdge> canon;
  canon.reserve(edges.size());
  for (const UndirectedEdge& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count)
      throw DomainError("Graph: edge endpoint out of range");
    if (e.u == e.v) throw DomainError("Graph: self-loops are not allowed");
    if (e.w < 1) throw DomainError("Graph: edge weight must be >= 1");
    canon.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  std::sort(canon.begin(), canon.end(), [](const auto& a, const auto& b) {
    return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
  });
  canon.erase(std::unique(canon.begin(), canon.end(),
                          [](const auto& a, const auto& b) {
                            return a.u == b.u && a.v == b.v;
                          }),
              canon.end());

  Graph g;
  g.offsets_.assign(vertex_count + 1, 0);
  for (const UndirectedEdge& e : canon) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.resize(canon.size() * 2);
  g.weights_.resize(canon.size() * 2);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const UndirectedEdge& e : canon) {
    g.targets_[cursor[e.u]] = e.v;
    g.weights_[cursor[e.u]++] = e.w;
    g.targets_[cursor[e.v]] = e.u;
    g.weights_[cursor[e.v]++] = e.w;
  }
  // The forward fill leaves each neighbor list sorted by insertion order of
  // the canonical edge list, which is (u,v)-sorted, so targets within a list
  // arrive ascending for the "min side" but not for the "max side"; sort each
  // list explicitly to establish the invariant.
  for (std::size_t v = 0; v < vertex_count; ++v) {
    const auto begin = g.offsets_[v];
    const auto end = g.offsets_[v + 1];
    std::vector<std::pair<VertexId, Weight>> adj;
    adj.reserve(end - begin);
    for (auto i = begin; i < end; ++i)
      adj.emplace_back(g.targets_[i], g.weights_[i]);
    std::sort(adj.begin(), adj.end());
    for (auto i = begin; i < end; ++i) {
      g.targets_[i] = adj[i - begin].first;
      g.weights_[i] = adj[i - begin].second;
    }
  }
  return g;
}

Weight Graph::edge_weight(VertexId u, VertexId v) const {
  const auto nb = neighbors(u);
  const auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return kInfiniteDistance;
  return weights(u)[static_cast<std::size_t>(it - nb.begin())];
}

GraphSummary summarize(const Graph& graph) {
  GraphSummary s;
  s.vertex_count = graph.vertex_count();
  s.arc_count = graph.arc_count();
  s.avg_degree = s.vertex_count == 0
                     ? 0.0
                     : static_cast<double>(s.arc_count) /
                           static_cast<double>(s.vertex_count);
  for (std::size_t v = 0; v < graph.vertex_count(); ++v)
    s.max_degree = std::max<std::uint64_t>(s.max_degree, graph.degree(v));
  bool first = true;
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    for (Weight w : graph.weights(static_cast<VertexId>(v))) {
      if (first) {
        s.weight_min = s.weight_max = w;
        first = false;
      } else {
        s.weight_min = std::min(s.weight_min, w);
        s.weight_max = std::max(s.weight_max, w);
      }
    }
  }
  return s;
}

LoadedGraph load_edge_list(std::istream& in, bool read_weights) {
  struct RawEdge {
    std::uint64_t u, v;
    Weight w;
  };
  std::vector<RawEdge> records;
  LoadStats stats;

  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tok_u, tok_v, tok_w, extra;
    if (!(fields >> tok_u)) continue;  // blank line
    if (tok_u.front() == '#') continue;
    if (!(fields >> tok_v)) parse_fail(line_no, "expected two vertex ids");
    const bool has_third = static_cast<bool>(fields >> tok_w);
    if (fields >> extra) parse_fail(line_no, "trailing field '" + extra + "'");

    std::uint64_t u = 0, v = 0;
    if (!parse_u64(tok_u, u))
      parse_fail(line_no, "bad vertex id '" + tok_u + "'");
    if (!parse_u64(tok_v, v))
      parse_fail(line_no, "bad vertex id '" + tok_v + "'");

    Weight w = 1;
    if (read_weights && has_third) {
      std::int64_t signed_w = 0;
      if (!parse_i64(tok_w, signed_w))
        parse_fail(line_no, "bad weight '" + tok_w + "'");
      if (signed_w < 1)
        throw DomainError("edge list line " + std::to_string(line_no) +
                          ": weight must be >= 1, got " +
                          std::to_string(signed_w));
      w = static_cast<Weight>(signed_w);
    }

    ++stats.record_count;
    if (u == v) {
      ++stats.self_loops_dropped;
      continue;
    }
    records.push_back({std::min(u, v), std::max(u, v), w});
  }
  if (in.bad()) throw ParseError("edge list: stream read failure");

  // Dense remap over the ids that survive self-loop dropping.
  std::vector<std::uint64_t> ids;
  ids.reserve(records.size() * 2);
  for (const RawEdge& r : records) {
    ids.push_back(r.u);
    ids.push_back(r.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const auto dense = [&ids](std::uint64_t original) {
    return static_cast<VertexId>(
        std::lower_bound(ids.begin(), ids.end(), original) - ids.begin());
  };

  std::vector<UndirectedEdge> edges;
  edges.reserve(records.size());
  for (const RawEdge& r : records)
    edges.push_back({dense(r.u), dense(r.v), r.w});
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
  });
  std::vector<UndirectedEdge> merged;
  merged.reserve(edges.size());
  for (const UndirectedEdge& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
      ++stats.duplicates_merged;  // sorted by weight, so the first one is min
    else
      merged.push_back(e);
  }

  LoadedGraph out;
  out.graph = Graph::from_undirected_edges(ids.size(), merged);
  out.original_ids = std::move(ids);
  out.stats = stats;
  return out;
}

void save_edge_list(const Graph& graph, std::ostream& out) {
  out << "# undirected weighted edge list: u v w (u < v, ascending)\n";
  for (std::size_t u = 0; u < graph.vertex_count(); ++u) {
    const auto nb = graph.neighbors(static_cast<VertexId>(u));
    const auto ws = graph.weights(static_cast<VertexId>(u));
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (u < nb[i]) out << u << ' ' << nb[i] << ' ' << ws[i] << '\n';
  }
  if (!out) throw ParseError("edge list: stream write failure");
}

Graph synthesize_weights(const Graph& graph, Weight w_min, Weight w_max,
                         std::uint64_t rng_seed) {
  if (w_min < 1) throw DomainError("synthesize_weights: w_min must be >= 1");
  if (w_max < w_min)
    throw DomainError("synthesize_weights: w_max must be >= w_min");
  Rng rng(rng_seed);
  std::vector<UndirectedEdge> edges;
  edges.reserve(graph.edge_count());
  // Canonical (min id, max id) ascending visit order makes the draw sequence
  // a function of topology + seed alone.
  for (std::size_t u = 0; u < graph.vertex_count(); ++u)
    for (VertexId v : graph.neighbors(static_cast<VertexId>(u)))
      if (u < v)
        edges.push_back({static_cast<VertexId>(u), v,
                         static_cast<Weight>(rng.uniform(w_min, w_max))});
  return Graph::from_undirected_edges(graph.vertex_count(), edges);
}

std::vector<VertexId> largest_connected_component(const Graph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<VertexId> best, current, frontier;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    current.clear();
    frontier.assign(1, static_cast<VertexId>(start));
    visited[start] = 1;
    while (!frontier.empty()) {
      const VertexId v = frontier.back();
      frontier.pop_back();
      current.push_back(v);
      for (VertexId nb : graph.neighbors(v)) {
        if (!visited[nb]) {
          visited[nb] = 1;
          frontier.push_back(nb);
        }
      }
    }
    // Scanning starts ascending, so the first component to reach a given size
    // contains the smallest id; strict > implements the min-id tie-break.
    if (current.size() > best.size()) best = current;
  }
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace steiner
