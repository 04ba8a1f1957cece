#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "lew/lattice.hpp"

namespace lew {

enum class HitMethod { DirectSolve, TwistedCylinder, WindowedStrip };

// Seam phase zeta for the affine determinant: +1 for an odd number of
// walkers, -1 for an even number.
struct TwistPhase {
  int zeta = 1;
  static TwistPhase for_walker_count(int n) { return TwistPhase{n % 2 == 1 ? 1 : -1}; }
};

struct HittingMatrix {
  std::vector<VertexId> sources;
  std::vector<VertexId> targets;
  Eigen::MatrixXd entries;
  std::optional<TwistPhase> twist;
  HitMethod method = HitMethod::DirectSolve;
};

struct DeterminantReport {
  HittingMatrix matrix;
  double value = 0;
  double condition_estimate = 0;  // 1-norm estimate for the (I - Q) solve
};

// Entry (i,j) is the probability that the chain started at sources[i] is
// first absorbed at targets[j], with the h+ convention for boundary starts
// (the first step must enter the interior; absorption at step 0 excluded).
// Solves (I - Q) x = r per target on the finite graph.
HittingMatrix hitting_probability_matrix(const WeightedDigraph& g,
                                         std::span<const VertexId> sources,
                                         std::span<const VertexId> targets);

DeterminantReport fomin_determinant(const WeightedDigraph& g,
                                    std::span<const VertexId> sources,
                                    std::span<const VertexId> targets);

// Entry (i,j) = sum_k zeta^k h_strip(a_i, S^k b_j), evaluated exactly as a
// seam-twisted absorbing-chain solve on the cylinder. zeta = -1 runs a real
// solve on the orientation double cover.
HittingMatrix twisted_hitting_matrix(const WeightedDigraph& cyl,
                                     std::span<const VertexId> sources,
                                     std::span<const VertexId> targets,
                                     TwistPhase zeta);

// det of twisted_hitting_matrix with zeta chosen by the parity of n.
DeterminantReport affine_determinant(const WeightedDigraph& cyl,
                                     std::span<const VertexId> sources,
                                     std::span<const VertexId> targets);

// (1/n) sum_{u=0}^{n-1} det( sum_k eta^{uk} h(a_i, S^k b_j) ) with
// eta = e^{2 pi i / n}, via complex seam solves. The imaginary part of the
// total must vanish to 1e-10; it is returned for inspection.
struct SumOfDeterminants {
  double value = 0;
  double imag_residual = 0;
};
SumOfDeterminants sum_of_determinants(const WeightedDigraph& cyl,
                                      std::span<const VertexId> sources,
                                      std::span<const VertexId> targets);

// Truncation oracle: solve on the strip window of +/- W periods around the
// base period with absorbing window ends, then sum zeta^k h(a, S^k b) over
// the windings that fit. Converges to twisted_hitting_matrix as W grows.
HittingMatrix windowed_twisted_matrix(const WeightedDigraph& strip,
                                      std::span<const VertexId> sources,
                                      std::span<const VertexId> targets,
                                      TwistPhase zeta, int W);

// Total absorption probability from every interior vertex (should be 1 for a
// proper Markov graph).
Eigen::VectorXd absorption_probabilities(const WeightedDigraph& g);

// Hager/Higham style 1-norm condition estimate of a dense matrix.
double condition_estimate_dense(const Eigen::MatrixXd& a);

}  // namespace lew
