#pragma once

#include <vector>

#include "chaosbound/shape.hpp"

namespace chaosbound {

/// A minimum left-right vertex separator together with its Menger
/// certificate: a maximum family of vertex-disjoint left-right paths, one per
/// separator vertex, each containing exactly one left and one right vertex.
struct SeparatorResult {
  std::vector<int> separator;
  std::vector<std::vector<int>> disjoint_paths;

  int size() const { return static_cast<int>(separator.size()); }
};

/// Vertex-splitting max-flow with unit vertex capacities. Vertices in both
/// tuples lie on every left-right path, so they are pre-assigned to the
/// separator (as length-one paths) before the flow computation. Among the
/// minimum cuts the one closest to the left side is returned.
SeparatorResult min_vertex_separator(const Shape& shape);

/// True iff removing `separator` leaves no path from a left to a right
/// vertex (left/right vertices inside the separator count as removed).
bool is_vertex_separator(const Shape& shape, const std::vector<int>& separator);

}  // namespace chaosbound
