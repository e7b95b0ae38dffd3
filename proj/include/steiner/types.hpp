#pragma once

#include <cstdint>
#include <limits>

namespace steiner {

/// Dense vertex identifier. Graphs remap arbitrary input ids to [0, n).
using VertexId = std::uint32_t;

/// Edge weight / path distance. Weights are integers >= 1; distances are sums
/// of weights and use the full 64-bit range.
using Weight = std::uint64_t;

/// Sentinel for "no vertex" (unset predecessor/source).
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Sentinel for "unreached" tentative distance.
inline constexpr Weight kInfiniteDistance = std::numeric_limits<Weight>::max();

}  // namespace steiner
