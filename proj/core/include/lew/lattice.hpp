#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lew/errors.hpp"

namespace lew {

struct VertexId {
  int col = 0;
  int row = 0;
  friend bool operator==(const VertexId&, const VertexId&) = default;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct VertexIdHash {
  size_t operator()(const VertexId& v) const {
    uint64_t h = (static_cast<uint64_t>(static_cast<uint32_t>(v.col)) << 32) |
                 static_cast<uint32_t>(v.row);
    h ^= h >> 33;
    h *= 0xFF51AFD7ED558CCDull;
    h ^= h >> 33;
    return static_cast<size_t>(h);
  }
};

enum class GraphKind { FinitePlanar, PeriodicStrip, Cylinder };

// What happens to the "down" weight at row 0 of a strip/cylinder/grid.
enum class BottomRule { Reflect, Redistribute, Absorb };

struct RowWeights {
  double up = 0, down = 0, left = 0, right = 0;
  double sum() const { return up + down + left + right; }
};

// Horizontal translation S^k by k periods; composes additively.
struct Translation {
  int shift = 1;
  friend Translation operator*(Translation a, Translation b) {
    return Translation{a.shift + b.shift};
  }
};

struct Edge {
  VertexId from, to;
  double weight = 0;
  int seam = 0;  // +1 if the edge wraps col M-1 -> 0, -1 for the reverse, else 0
};

struct LatticePath {
  std::vector<VertexId> vertices;
  double weight = 1.0;

  int length() const { return static_cast<int>(vertices.size()) - 1; }
  bool empty() const { return vertices.empty(); }
  const VertexId& front() const { return vertices.front(); }
  const VertexId& back() const { return vertices.back(); }
};

struct ProjectedPath {
  LatticePath cylinder_path;
  int winding = 0;
};

class WeightedDigraph {
 public:
  // Periodic lattice strip Z x {0..N}; weights repeat with period M.
  // `rows` has N entries (rows 0..N-1) or N+1 entries, where row N is the
  // absorbing boundary and only its `down` weight is used (boundary starts).
  static WeightedDigraph strip(int M, int N, std::vector<RowWeights> rows,
                               BottomRule bottom = BottomRule::Reflect);

  // Quotient of the strip modulo the horizontal translation by (M, 0).
  static WeightedDigraph cylinder(int M, int N, std::vector<RowWeights> rows,
                                  BottomRule bottom = BottomRule::Reflect);

  // Finite W x H grid, absorbing top row, reflecting side columns.
  static WeightedDigraph grid(int W, int H, std::vector<RowWeights> rows,
                              BottomRule bottom = BottomRule::Reflect);

  // Finite planar graph from an explicit edge list. Vertices live in
  // [0,W) x [0,H). No stochasticity or absorption check is performed, so
  // general nonnegative weights (e.g. path-counting weights) are allowed.
  static WeightedDigraph finite(int W, int H, std::vector<Edge> edges,
                                std::vector<VertexId> absorbing);

  // Up/right-only acyclic lattice with unit weights and absorbing top row.
  static WeightedDigraph acyclic_lattice(int W, int H);

  GraphKind kind() const { return kind_; }
  int period() const { return period_; }
  int height() const { return height_; }
  int width() const { return width_; }
  bool markov() const { return markov_; }

  bool is_absorbing(VertexId v) const;
  bool contains(VertexId v) const;
  VertexId canonical(VertexId v) const;  // reduces col mod M on the cylinder

  // Finite kinds only (FinitePlanar, Cylinder).
  int vertex_count() const;
  int index_of(VertexId v) const;
  VertexId vertex_at(int idx) const;
  const std::vector<Edge>& edges() const;

  // Out-edges from v, valid for every kind (computed from the weight table
  // for strips). Appends to `out`.
  void out_edges(VertexId v, std::vector<Edge>& out) const;

  const std::vector<RowWeights>& row_table() const { return rows_; }
  BottomRule bottom_rule() const { return bottom_; }

  // Cumulative per-row direction weights (up, down, left, right) used by the
  // samplers; row-indexed for table-built kinds.
  struct DirCdf {
    double c[4];  // cumulative weights
    int dc[4];    // column deltas
    int dr[4];    // row deltas
    double total;
  };
  const DirCdf& row_cdf(int row) const { return cdfs_[static_cast<size_t>(row)]; }

 private:
  WeightedDigraph() = default;
  static std::vector<RowWeights> normalize_rows(int N, std::vector<RowWeights> rows,
                                                BottomRule bottom);
  void build_finite_table_edges();
  void build_cdfs();

  GraphKind kind_ = GraphKind::FinitePlanar;
  int period_ = 0;  // M for strip/cylinder
  int height_ = 0;  // N: rows run 0..N
  int width_ = 0;   // finite kinds: columns run 0..W-1
  bool markov_ = false;
  BottomRule bottom_ = BottomRule::Reflect;
  std::vector<RowWeights> rows_;
  std::vector<Edge> edges_;           // finite kinds
  std::vector<uint8_t> absorbing_;    // finite kinds, indexed by vertex
  std::vector<DirCdf> cdfs_;          // table-built kinds
};

// S^k translation of a vertex on the periodic strip.
VertexId translate(const WeightedDigraph& g, VertexId v, Translation t);
LatticePath translate(const WeightedDigraph& g, const LatticePath& p, Translation t);

// Quotient map strip -> cylinder; winding is the net number of seam
// crossings, i.e. floor(end_col/M) - floor(start_col/M).
ProjectedPath project_to_cylinder(const WeightedDigraph& strip, const LatticePath& p);

// Lift of a cylinder path starting at the given strip vertex. Requires
// M >= 3 so that step directions are unambiguous.
LatticePath lift_to_strip(const WeightedDigraph& strip, const ProjectedPath& p,
                          VertexId start);

// Product of edge weights along p; throws if consecutive vertices are not
// joined by an edge of g.
double path_weight(const WeightedDigraph& g, const LatticePath& p);

}  // namespace lew
