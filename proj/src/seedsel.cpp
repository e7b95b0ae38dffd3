#include "steiner/seedsel.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

#include "steiner/errors.hpp"
#include "steiner/rng.hpp"

namespace steiner {

namespace {

constexpr std::uint32_t kUnreachedLevel =
    std::numeric_limits<std::uint32_t>::max();

/// Hop levels from `root`; unreached vertices keep kUnreachedLevel.
std::vector<std::uint32_t> bfs_levels(const Graph& graph, VertexId root) {
  std::vector<std::uint32_t> level(graph.vertex_count(), kUnreachedLevel);
  std::deque<VertexId> queue{root};
  level[root] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (VertexId nb : graph.neighbors(v)) {
      if (level[nb] == kUnreachedLevel) {
        level[nb] = level[v] + 1;
        queue.push_back(nb);
      }
    }
  }
  return level;
}

std::vector<VertexId> select_bfs_level(const Graph& graph,
                                       const std::vector<VertexId>& component,
                                       std::size_t count,
                                       std::uint64_t rng_seed) {
  // Levels from the smallest id in the component; bucket members ascending.
  const std::vector<std::uint32_t> level = bfs_levels(graph, component[0]);
  std::vector<std::vector<VertexId>> buckets;
  for (VertexId v : component) {
    if (level[v] >= buckets.size()) buckets.resize(level[v] + 1);
    buckets[level[v]].push_back(v);  // component is sorted, so buckets are
  }

  // Largest-remainder apportionment of `count` across levels, proportional
  // to level size. Exact integer arithmetic; remainder ties favor the level
  // nearer the root.
  const std::uint64_t total = component.size();
  std::vector<std::size_t> quota(buckets.size(), 0);
  std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t l = 0; l < buckets.size(); ++l) {
    const std::uint64_t share = count * static_cast<std::uint64_t>(buckets[l].size());
    quota[l] = static_cast<std::size_t>(share / total);
    assigned += quota[l];
    remainders.emplace_back(share % total, l);
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a,
                                                     const auto& b) {
    return std::tie(b.first, a.second) < std::tie(a.first, b.second);
  });
  for (std::size_t i = 0; assigned < count; ++i, ++assigned)
    ++quota[remainders[i].second];

  Rng rng(rng_seed);
  std::vector<VertexId> seeds;
  seeds.reserve(count);
  for (std::size_t l = 0; l < buckets.size(); ++l) {
    for (VertexId v : rng.sample_without_replacement(buckets[l], quota[l]))
      seeds.push_back(v);
  }
  return seeds;
}

std::vector<VertexId> select_uniform_random(
    const std::vector<VertexId>& component, std::size_t count,
    std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return rng.sample_without_replacement(component, count);
}

/// Shared body of the eccentric/proximate strategies: start from a random
/// component vertex, then repeatedly pick the extremum (by `prefer_max`) of
/// the hop distances summed over everything selected so far; ties fall to
/// the smallest id.
std::vector<VertexId> select_by_summed_levels(
    const Graph& graph, const std::vector<VertexId>& component,
    std::size_t count, std::uint64_t rng_seed, bool prefer_max) {
  Rng rng(rng_seed);
  std::vector<std::uint8_t> selected(graph.vertex_count(), 0);
  std::vector<std::uint64_t> summed(graph.vertex_count(), 0);

  std::vector<VertexId> seeds;
  seeds.reserve(count);
  VertexId last = component[static_cast<std::size_t>(
      rng.uniform(0, component.size() - 1))];
  seeds.push_back(last);
  selected[last] = 1;

  while (seeds.size() < count) {
    const std::vector<std::uint32_t> level = bfs_levels(graph, last);
    for (VertexId v : component) summed[v] += level[v];
    VertexId best = kNoVertex;
    for (VertexId v : component) {
      if (selected[v]) continue;
      if (best == kNoVertex ||
          (prefer_max ? summed[v] > summed[best] : summed[v] < summed[best]))
        best = v;  // component scans ascending: ties keep the smaller id
    }
    last = best;
    seeds.push_back(last);
    selected[last] = 1;
  }
  return seeds;
}

}  // namespace

std::string to_string(SeedStrategy strategy) {
  switch (strategy) {
    case SeedStrategy::kBfsLevel:
      return "bfs_level";
    case SeedStrategy::kUniformRandom:
      return "uniform_random";
    case SeedStrategy::kEccentric:
      return "eccentric";
    case SeedStrategy::kProximate:
      return "proximate";
  }
  throw InternalError("to_string: unknown seed strategy");
}

SeedStrategy parse_seed_strategy(std::string_view name) {
  if (name == "bfs_level") return SeedStrategy::kBfsLevel;
  if (name == "uniform_random") return SeedStrategy::kUniformRandom;
  if (name == "eccentric") return SeedStrategy::kEccentric;
  if (name == "proximate") return SeedStrategy::kProximate;
  throw DomainError("unknown seed strategy '" + std::string(name) +
                    "' (expected bfs_level, uniform_random, eccentric, or "
                    "proximate)");
}

std::vector<VertexId> select_seeds(const Graph& graph, const SeedSpec& spec) {
  if (spec.count == 0) throw DomainError("seed selection: count must be >= 1");
  const std::vector<VertexId> component = largest_connected_component(graph);
  if (spec.count > component.size())
    throw DomainError("seed selection: count " + std::to_string(spec.count) +
                      " exceeds the largest component (" +
                      std::to_string(component.size()) + " vertices)");

  std::vector<VertexId> seeds;
  switch (spec.strategy) {
    case SeedStrategy::kBfsLevel:
      seeds = select_bfs_level(graph, component, spec.count, spec.rng_seed);
      break;
    case SeedStrategy::kUniformRandom:
      seeds = select_uniform_random(component, spec.count, spec.rng_seed);
      break;
    case SeedStrategy::kEccentric:
      seeds = select_by_summed_levels(graph, component, spec.count,
                                      spec.rng_seed, /*prefer_max=*/true);
      break;
    case SeedStrategy::kProximate:
      seeds = select_by_summed_levels(graph, component, spec.count,
                                      spec.rng_seed, /*prefer_max=*/false);
      break;
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

}  // namespace steiner
