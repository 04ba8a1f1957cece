#pragma once

#include <span>
#include <vector>

#include "lew/lattice.hpp"

namespace lew {

struct ErasureTrace {
  LatticePath input;
  LatticePath output;
  std::vector<int> retained_indices;  // strictly increasing positions j_0 < ... < j_k
};

// Chronological loop-erasure. The retained indices follow the
// last-occurrence recurrence j_{k+1} = max{ j : a_j = a_{j_k + 1} }.
ErasureTrace loop_erase(const LatticePath& p);

// Loop-erased vertex sequence only (no trace); used in sampling loops.
void loop_erase_vertices(std::span<const VertexId> in, std::vector<VertexId>& out);

// True iff the vertex sets of p and q meet; with interior_only, meetings at
// absorbing vertices of g are ignored.
bool paths_intersect(const WeightedDigraph& g, const LatticePath& p,
                     const LatticePath& q, bool interior_only = true);

// Ordered condition: for all i < j, paths[j] avoids LE(paths[i]) at
// non-absorbing vertices.
bool fomin_condition(const WeightedDigraph& g, std::span<const LatticePath> paths);

// Strip condition: consecutive pairs P_j vs LE(P_{j-1}) for j = 2..n plus the
// wrap pair P_1 vs LE(S P_n). For n = 1 only the wrap condition applies.
bool affine_condition(const WeightedDigraph& strip, std::span<const LatticePath> paths);

}  // namespace lew
