#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "steiner/graph.hpp"
#include "steiner/types.hpp"

namespace steiner {

/// Seed (terminal) placement strategies. All operate inside the largest
/// connected component so the resulting seed set is always solvable.
///  - kBfsLevel: hop-level-proportional quotas from the smallest-id root,
///    sampled per level (largest-remainder apportionment).
///  - kUniformRandom: uniform sample of the component.
///  - kEccentric: repeatedly picks the vertex maximizing the summed hop
///    distance to everything already selected (spread-out seeds).
///  - kProximate: the argmin mirror (clustered seeds).
enum class SeedStrategy { kBfsLevel, kUniformRandom, kEccentric, kProximate };

/// Canonical names: bfs_level, uniform_random, eccentric, proximate.
std::string to_string(SeedStrategy strategy);
SeedStrategy parse_seed_strategy(std::string_view name);  // DomainError if unknown

struct SeedSpec {
  SeedStrategy strategy = SeedStrategy::kUniformRandom;
  std::size_t count = 1;
  std::uint64_t rng_seed = 0;
};

/// Selects spec.count distinct seeds, returned sorted ascending.
/// Deterministic for fixed (graph, spec). Throws DomainError when count is 0
/// or exceeds the largest component's size.
std::vector<VertexId> select_seeds(const Graph& graph, const SeedSpec& spec);

}  // namespace steiner
