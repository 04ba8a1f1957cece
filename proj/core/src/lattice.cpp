#include "lew/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lew/hitting.hpp"

namespace lew {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int mod_pos(int a, int b) {
  int m = a % b;
  return m < 0 ? m + b : m;
}

void check_absorption(const WeightedDigraph& g) {
  const Eigen::VectorXd p = absorption_probabilities(g);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (std::abs(p[i] - 1.0) > 1e-10) {
      throw Unreachable("absorption probability " + std::to_string(p[i]) +
                        " != 1 from some interior vertex");
    }
  }
}

}  // namespace

std::vector<RowWeights> WeightedDigraph::normalize_rows(int N, std::vector<RowWeights> rows,
                                                        BottomRule bottom) {
  if (static_cast<int>(rows.size()) == N) {
    rows.push_back(RowWeights{0, 1, 0, 0});  // boundary row: h+ starts step down
  }
  if (static_cast<int>(rows.size()) != N + 1) {
    throw DomainError("weight table must have N or N+1 rows");
  }
  for (const RowWeights& r : rows) {
    if (r.up < 0 || r.down < 0 || r.left < 0 || r.right < 0) {
      throw DomainError("negative edge weight");
    }
  }
  if (rows[static_cast<size_t>(N)].up != 0) {
    throw DomainError("boundary row cannot have an up weight");
  }
  RowWeights& r0 = rows[0];
  switch (bottom) {
    case BottomRule::Reflect:
      r0.up += r0.down;
      r0.down = 0;
      break;
    case BottomRule::Redistribute: {
      const double rest = r0.up + r0.left + r0.right;
      if (r0.down > 0) {
        if (rest <= 0) throw DomainError("cannot redistribute row-0 down weight");
        const double scale = (rest + r0.down) / rest;
        r0.up *= scale;
        r0.left *= scale;
        r0.right *= scale;
        r0.down = 0;
      }
      break;
    }
    case BottomRule::Absorb:
      if (N < 2) throw DomainError("absorbing bottom requires N >= 2");
      // row 0 becomes boundary; only its up weight is used (h+ starts)
      r0.down = r0.left = r0.right = 0;
      break;
  }
  for (int r = 0; r < N; ++r) {
    if (rows[static_cast<size_t>(r)].sum() > 1.0 + 1e-9) {
      throw NonStochastic("out-weights of row " + std::to_string(r) + " exceed 1");
    }
  }
  return rows;
}

void WeightedDigraph::build_cdfs() {
  cdfs_.clear();
  cdfs_.resize(rows_.size());
  for (size_t r = 0; r < rows_.size(); ++r) {
    const RowWeights& w = rows_[r];
    DirCdf& c = cdfs_[r];
    const double ws[4] = {w.up, w.down, w.left, w.right};
    const int dcol[4] = {0, 0, -1, 1};
    const int drow[4] = {1, -1, 0, 0};
    double acc = 0;
    for (int d = 0; d < 4; ++d) {
      acc += ws[d];
      c.c[d] = acc;
      c.dc[d] = dcol[d];
      c.dr[d] = drow[d];
    }
    c.total = acc;
  }
}

WeightedDigraph WeightedDigraph::strip(int M, int N, std::vector<RowWeights> rows,
                                       BottomRule bottom) {
  if (M < 1 || N < 1) throw DomainError("strip requires M >= 1 and N >= 1");
  WeightedDigraph g;
  g.kind_ = GraphKind::PeriodicStrip;
  g.period_ = M;
  g.height_ = N;
  g.width_ = 0;
  g.bottom_ = bottom;
  g.rows_ = normalize_rows(N, std::move(rows), bottom);
  g.build_cdfs();
  g.markov_ = true;
  // absorption is a property of the row process; check it on the quotient
  check_absorption(cylinder(M, N, g.rows_, bottom == BottomRule::Absorb
                                               ? BottomRule::Absorb
                                               : BottomRule::Reflect));
  return g;
}

WeightedDigraph WeightedDigraph::cylinder(int M, int N, std::vector<RowWeights> rows,
                                          BottomRule bottom) {
  if (M < 1 || N < 1) throw DomainError("cylinder requires M >= 1 and N >= 1");
  WeightedDigraph g;
  g.kind_ = GraphKind::Cylinder;
  g.period_ = M;
  g.width_ = M;
  g.height_ = N;
  g.bottom_ = bottom;
  g.rows_ = normalize_rows(N, std::move(rows), bottom);
  g.build_cdfs();
  g.absorbing_.assign(static_cast<size_t>(M * (N + 1)), 0);
  for (int c = 0; c < M; ++c) {
    g.absorbing_[static_cast<size_t>(N * M + c)] = 1;
    if (bottom == BottomRule::Absorb) g.absorbing_[static_cast<size_t>(c)] = 1;
  }
  g.build_finite_table_edges();
  g.markov_ = true;
  check_absorption(g);
  return g;
}

WeightedDigraph WeightedDigraph::grid(int W, int H, std::vector<RowWeights> rows,
                                      BottomRule bottom) {
  if (W < 1 || H < 2) throw DomainError("grid requires W >= 1 and H >= 2");
  const int N = H - 1;
  WeightedDigraph g;
  g.kind_ = GraphKind::FinitePlanar;
  g.period_ = 0;
  g.width_ = W;
  g.height_ = N;
  g.bottom_ = bottom;
  g.rows_ = normalize_rows(N, std::move(rows), bottom);
  if (W == 1) {
    for (const RowWeights& r : g.rows_) {
      if (r.left > 0 || r.right > 0) {
        throw DomainError("width-1 grid cannot carry horizontal weights");
      }
    }
  }
  g.build_cdfs();
  g.absorbing_.assign(static_cast<size_t>(W * (N + 1)), 0);
  for (int c = 0; c < W; ++c) {
    g.absorbing_[static_cast<size_t>(N * W + c)] = 1;
    if (bottom == BottomRule::Absorb) g.absorbing_[static_cast<size_t>(c)] = 1;
  }
  g.build_finite_table_edges();
  g.markov_ = true;
  check_absorption(g);
  return g;
}

void WeightedDigraph::build_finite_table_edges() {
  edges_.clear();
  const int W = width_;
  const int N = height_;
  const bool wrap = kind_ == GraphKind::Cylinder;
  auto add = [&](VertexId from, int dc, int dr, double w) {
    if (w <= 0) return;
    int c = from.col + dc;
    int r = from.row + dr;
    if (r < 0 || r > N) return;
    int seam = 0;
    if (wrap) {
      if (c == W) {
        c = 0;
        seam = 1;
      } else if (c == -1) {
        c = W - 1;
        seam = -1;
      }
    } else {
      // reflecting side columns: fold the exiting weight onto the opposite step
      if (c == W) {
        c = from.col - 1;
        if (c < 0) return;
      } else if (c == -1) {
        c = from.col + 1;
        if (c >= W) return;
      }
    }
    edges_.push_back(Edge{from, VertexId{c, r}, w, seam});
  };
  for (int r = 0; r <= N; ++r) {
    const RowWeights& w = rows_[static_cast<size_t>(r)];
    for (int c = 0; c < W; ++c) {
      const VertexId v{c, r};
      if (is_absorbing(v)) {
        // boundary vertices keep only their step into the interior (h+ starts)
        if (r == N) add(v, 0, -1, w.down);
        if (r == 0 && bottom_ == BottomRule::Absorb) add(v, 0, 1, w.up);
        continue;
      }
      add(v, 0, 1, w.up);
      add(v, 0, -1, w.down);
      add(v, -1, 0, w.left);
      add(v, 1, 0, w.right);
    }
  }
  // merge parallel edges produced by side reflection
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.to, a.seam) < std::tie(b.from, b.to, b.seam);
  });
  std::vector<Edge> merged;
  for (const Edge& e : edges_) {
    if (!merged.empty() && merged.back().from == e.from && merged.back().to == e.to &&
        merged.back().seam == e.seam) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }
  edges_ = std::move(merged);
}

WeightedDigraph WeightedDigraph::finite(int W, int H, std::vector<Edge> edges,
                                        std::vector<VertexId> absorbing) {
  if (W < 1 || H < 1) throw DomainError("finite graph requires W >= 1 and H >= 1");
  WeightedDigraph g;
  g.kind_ = GraphKind::FinitePlanar;
  g.width_ = W;
  g.height_ = H - 1;
  g.absorbing_.assign(static_cast<size_t>(W * H), 0);
  for (const VertexId& v : absorbing) {
    if (!g.contains(v)) throw DomainError("absorbing vertex outside the graph");
    g.absorbing_[static_cast<size_t>(g.index_of(v))] = 1;
  }
  for (const Edge& e : edges) {
    if (!g.contains(e.from) || !g.contains(e.to)) {
      throw DomainError("edge endpoint outside the graph");
    }
    if (e.weight < 0) throw DomainError("negative edge weight");
  }
  g.edges_ = std::move(edges);
  g.markov_ = false;
  return g;
}

WeightedDigraph WeightedDigraph::acyclic_lattice(int W, int H) {
  std::vector<Edge> edges;
  std::vector<VertexId> absorbing;
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      const VertexId v{c, r};
      if (r == H - 1) {
        absorbing.push_back(v);
        continue;
      }
      if (c + 1 < W) edges.push_back(Edge{v, VertexId{c + 1, r}, 1.0, 0});
      edges.push_back(Edge{v, VertexId{c, r + 1}, 1.0, 0});
    }
  }
  return finite(W, H, std::move(edges), std::move(absorbing));
}

bool WeightedDigraph::is_absorbing(VertexId v) const {
  if (!contains(v)) return false;
  switch (kind_) {
    case GraphKind::PeriodicStrip:
      return v.row == height_ || (bottom_ == BottomRule::Absorb && v.row == 0);
    case GraphKind::Cylinder:
      return absorbing_[static_cast<size_t>(index_of(canonical(v)))] != 0;
    case GraphKind::FinitePlanar:
      return absorbing_[static_cast<size_t>(index_of(v))] != 0;
  }
  return false;
}

bool WeightedDigraph::contains(VertexId v) const {
  if (v.row < 0 || v.row > height_) return false;
  if (kind_ == GraphKind::PeriodicStrip) return true;
  const int c = kind_ == GraphKind::Cylinder ? canonical(v).col : v.col;
  return c >= 0 && c < width_;
}

VertexId WeightedDigraph::canonical(VertexId v) const {
  if (kind_ != GraphKind::Cylinder) return v;
  return VertexId{mod_pos(v.col, period_), v.row};
}

int WeightedDigraph::vertex_count() const {
  if (kind_ == GraphKind::PeriodicStrip) throw WrongGraphKind("strip has no finite vertex set");
  return width_ * (height_ + 1);
}

int WeightedDigraph::index_of(VertexId v) const {
  const VertexId c = canonical(v);
  return c.row * width_ + c.col;
}

VertexId WeightedDigraph::vertex_at(int idx) const {
  return VertexId{idx % width_, idx / width_};
}

const std::vector<Edge>& WeightedDigraph::edges() const {
  if (kind_ == GraphKind::PeriodicStrip) throw WrongGraphKind("strip has no finite edge list");
  return edges_;
}

void WeightedDigraph::out_edges(VertexId v, std::vector<Edge>& out) const {
  if (kind_ == GraphKind::PeriodicStrip) {
    if (!contains(v)) return;
    const RowWeights& w = rows_[static_cast<size_t>(v.row)];
    if (is_absorbing(v)) {
      if (v.row == height_ && w.down > 0) {
        out.push_back(Edge{v, VertexId{v.col, v.row - 1}, w.down, 0});
      }
      if (v.row == 0 && bottom_ == BottomRule::Absorb && w.up > 0) {
        out.push_back(Edge{v, VertexId{v.col, 1}, w.up, 0});
      }
      return;
    }
    if (w.up > 0) out.push_back(Edge{v, VertexId{v.col, v.row + 1}, w.up, 0});
    if (w.down > 0) out.push_back(Edge{v, VertexId{v.col, v.row - 1}, w.down, 0});
    if (w.left > 0) out.push_back(Edge{v, VertexId{v.col - 1, v.row}, w.left, 0});
    if (w.right > 0) out.push_back(Edge{v, VertexId{v.col + 1, v.row}, w.right, 0});
    return;
  }
  const VertexId c = canonical(v);
  for (const Edge& e : edges_) {
    if (e.from == c) out.push_back(e);
  }
}

VertexId translate(const WeightedDigraph& g, VertexId v, Translation t) {
  if (g.kind() != GraphKind::PeriodicStrip) {
    throw WrongGraphKind("translate is defined on the periodic strip");
  }
  return VertexId{v.col + t.shift * g.period(), v.row};
}

LatticePath translate(const WeightedDigraph& g, const LatticePath& p, Translation t) {
  LatticePath out;
  out.weight = p.weight;
  out.vertices.reserve(p.vertices.size());
  for (const VertexId& v : p.vertices) out.vertices.push_back(translate(g, v, t));
  return out;
}

ProjectedPath project_to_cylinder(const WeightedDigraph& strip, const LatticePath& p) {
  if (strip.kind() != GraphKind::PeriodicStrip) {
    throw WrongGraphKind("project_to_cylinder expects a strip path");
  }
  const int M = strip.period();
  ProjectedPath out;
  out.cylinder_path.weight = p.weight;
  out.cylinder_path.vertices.reserve(p.vertices.size());
  for (const VertexId& v : p.vertices) {
    out.cylinder_path.vertices.push_back(VertexId{mod_pos(v.col, M), v.row});
  }
  if (!p.empty()) {
    out.winding = floor_div(p.back().col, M) - floor_div(p.front().col, M);
  }
  return out;
}

LatticePath lift_to_strip(const WeightedDigraph& strip, const ProjectedPath& p,
                          VertexId start) {
  if (strip.kind() != GraphKind::PeriodicStrip) {
    throw WrongGraphKind("lift_to_strip expects a strip");
  }
  const int M = strip.period();
  if (M < 3) throw DomainError("lift requires M >= 3 (step directions ambiguous)");
  const auto& cyl = p.cylinder_path.vertices;
  LatticePath out;
  out.weight = p.cylinder_path.weight;
  if (cyl.empty()) return out;
  if (mod_pos(start.col, M) != cyl.front().col || start.row != cyl.front().row) {
    throw DomainError("lift start does not project to the path start");
  }
  out.vertices.push_back(start);
  int col = start.col;
  for (size_t i = 1; i < cyl.size(); ++i) {
    const int dc = mod_pos(cyl[i].col - cyl[i - 1].col, M);
    if (dc == 1) {
      ++col;
    } else if (dc == M - 1) {
      --col;
    } else if (dc != 0) {
      throw DomainError("cylinder path has a non-lattice step");
    }
    out.vertices.push_back(VertexId{col, cyl[i].row});
  }
  return out;
}

double path_weight(const WeightedDigraph& g, const LatticePath& p) {
  double w = 1.0;
  std::vector<Edge> out;
  for (size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    out.clear();
    g.out_edges(p.vertices[i], out);
    double step = 0;
    const VertexId to = g.canonical(p.vertices[i + 1]);
    for (const Edge& e : out) {
      if (g.canonical(e.to) == to) step += e.weight;
    }
    if (step <= 0) throw Error("path uses a missing edge");
    w *= step;
  }
  return w;
}

}  // namespace lew
