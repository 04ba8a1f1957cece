#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lew/lattice.hpp"
#include "lew/rng.hpp"

namespace lew::mc {

struct McConfig {
  uint64_t samples = 100000;
  uint64_t seed = 0;
  int max_steps = 0;  // 0: use the default 100 * N * M^2
  int threads = 1;
};

struct McEstimate {
  double p_hat = 0;
  double std_err = 0;
  uint64_t samples_used = 0;
  uint64_t aborts = 0;
  uint64_t hits = 0;
};

struct ZReport {
  double p_hat = 0;
  double std_err = 0;
  double exact = 0;
  double z = 0;
  bool pass = false;
  uint64_t samples_used = 0;
  uint64_t aborts = 0;
};

// One trajectory from `start` to its first boundary hit under the h+
// convention. Returns false (and discards the path) if max_steps is
// exceeded; such samples are counted as aborts by the estimators.
bool sample_walk(const WeightedDigraph& g, VertexId start, RngStream& rng,
                 int max_steps, LatticePath& out);

int default_max_steps(const WeightedDigraph& g);

// P(walker i is absorbed exactly at targets[i] for all i, and the ordered
// loop-erasure condition holds). Compare against fomin_determinant.
McEstimate estimate_fomin_lhs(const WeightedDigraph& g,
                              std::span<const VertexId> sources,
                              std::span<const VertexId> targets,
                              const McConfig& cfg);

// P(the absorption columns match some cyclic shift of the targets, with the
// winding offsets of a single rigid translation, and the strip loop-erasure
// conditions hold). Walks are simulated on the periodic strip. This is the
// rotating-destination event associated with the twist-summed determinant;
// see the verification notes in the acceptance suite for how the routes
// relate numerically.
McEstimate estimate_affine_lhs(const WeightedDigraph& strip,
                               std::span<const VertexId> sources,
                               std::span<const VertexId> targets,
                               const McConfig& cfg);

// P(walker i is absorbed at the rigid translate S^m of its own target, with
// one common m over the family, and the strip loop-erasure conditions hold).
// Equals sum_of_determinants on the quotient cylinder.
McEstimate estimate_affine_rigid_lhs(const WeightedDigraph& strip,
                                     std::span<const VertexId> sources,
                                     std::span<const VertexId> targets,
                                     const McConfig& cfg);

// Cylinder event: walks on the quotient cylinder whose absorption points are
// some cyclic permutation of the targets and whose paths satisfy the ordered
// condition P_j avoiding LE(P_i) for all i < j. For an odd number of walkers
// this equals the plain cylinder determinant.
McEstimate estimate_cyclic_cylinder_lhs(const WeightedDigraph& cyl,
                                        std::span<const VertexId> sources,
                                        std::span<const VertexId> targets,
                                        const McConfig& cfg);

ZReport z_report(const McEstimate& est, double exact);

}  // namespace lew::mc
