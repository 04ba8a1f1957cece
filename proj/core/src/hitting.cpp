#include "lew/hitting.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

namespace lew {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<std::complex<double>>;
using Triplet = Eigen::Triplet<double>;
using TripletC = Eigen::Triplet<std::complex<double>>;

struct InteriorIndex {
  std::vector<int> of_vertex;  // -1 for absorbing
  std::vector<int> vertex_of;
  int count = 0;
};

InteriorIndex interior_index(const WeightedDigraph& g) {
  InteriorIndex idx;
  const int V = g.vertex_count();
  idx.of_vertex.assign(static_cast<size_t>(V), -1);
  for (int v = 0; v < V; ++v) {
    if (!g.is_absorbing(g.vertex_at(v))) {
      idx.of_vertex[static_cast<size_t>(v)] = idx.count++;
      idx.vertex_of.push_back(v);
    }
  }
  return idx;
}

void require_finite(const WeightedDigraph& g, const char* what) {
  if (g.kind() == GraphKind::PeriodicStrip) {
    throw WrongGraphKind(std::string(what) + " requires a finite graph or a cylinder");
  }
}

void require_targets_boundary(const WeightedDigraph& g, std::span<const VertexId> targets) {
  for (const VertexId& b : targets) {
    if (!g.contains(b) || !g.is_absorbing(b)) {
      throw TargetNotBoundary("target is not an absorbing boundary vertex");
    }
  }
}

// Hager/Higham 1-norm estimate of ||inv(A)||_1 given solvers for A and A^T.
template <typename Solve, typename SolveT>
double inv_norm1_estimate(int n, Solve solve, SolveT solveT) {
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double est = 0;
  for (int iter = 0; iter < 5; ++iter) {
    Eigen::VectorXd y = solve(x);
    est = y.lpNorm<1>();
    Eigen::VectorXd xi(n);
    for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0 ? 1.0 : -1.0;
    Eigen::VectorXd z = solveT(xi);
    int jmax = 0;
    double zmax = 0;
    for (int i = 0; i < n; ++i) {
      if (std::abs(z[i]) > zmax) {
        zmax = std::abs(z[i]);
        jmax = i;
      }
    }
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x[jmax] = 1.0;
  }
  return est;
}

double norm1(const SpMat& a) {
  Eigen::VectorXd colsum = Eigen::VectorXd::Zero(a.cols());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      colsum[it.col()] += std::abs(it.value());
    }
  }
  return colsum.size() ? colsum.maxCoeff() : 0.0;
}

// (I - Q) on the interior of a finite graph, with an optional complex seam
// phase applied to cylinder edges. Owns factorizations of A and A^T.
class AbsorbingSystem {
 public:
  AbsorbingSystem(const WeightedDigraph& g, std::complex<double> seam_phase)
      : g_(g), idx_(interior_index(g)), phase_(seam_phase) {
    complex_ = seam_phase.imag() != 0.0;
    build();
  }

  const InteriorIndex& idx() const { return idx_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success) throw SingularSystem("absorbing solve failed");
    return x;
  }
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
    Eigen::VectorXcd x = luc_.solve(rhs);
    if (luc_.info() != Eigen::Success) throw SingularSystem("absorbing solve failed");
    return x;
  }

  double condition_estimate() const {
    if (complex_ || idx_.count == 0) return 0.0;
    const double inv_norm = inv_norm1_estimate(
        idx_.count, [&](const Eigen::VectorXd& v) { return lu_.solve(v); },
        [&](const Eigen::VectorXd& v) { return luT_.solve(v); });
    return inv_norm * a_norm1_;
  }

  std::complex<double> edge_phase(const Edge& e) const {
    if (e.seam == 0) return 1.0;
    return e.seam > 0 ? phase_ : std::conj(phase_) / std::norm(phase_);
  }

  // weight (with phase) of the first step a -> interior, for boundary starts
  template <typename Scalar>
  void accumulate_source_row(VertexId a, const Eigen::Vector<Scalar, Eigen::Dynamic>& x,
                             Scalar& out) const {
    for (const Edge& e : g_.edges()) {
      if (!(g_.canonical(e.from) == g_.canonical(a))) continue;
      const int j = idx_.of_vertex[static_cast<size_t>(g_.index_of(e.to))];
      if (j < 0) continue;
      if constexpr (std::is_same_v<Scalar, double>) {
        out += e.weight * x[j];
      } else {
        out += e.weight * edge_phase(e) * x[j];
      }
    }
  }

 private:
  void build() {
    const int n = idx_.count;
    std::vector<Triplet> tr;
    std::vector<TripletC> trc;
    for (int i = 0; i < n; ++i) {
      tr.emplace_back(i, i, 1.0);
      trc.emplace_back(i, i, 1.0);
    }
    for (const Edge& e : g_.edges()) {
      const int i = idx_.of_vertex[static_cast<size_t>(g_.index_of(e.from))];
      const int j = idx_.of_vertex[static_cast<size_t>(g_.index_of(e.to))];
      if (i < 0 || j < 0) continue;
      if (complex_) {
        trc.emplace_back(i, j, -e.weight * edge_phase(e));
      } else {
        tr.emplace_back(i, j, -e.weight * edge_phase(e).real());
      }
    }
    if (complex_) {
      SpMatC a(n, n);
      a.setFromTriplets(trc.begin(), trc.end());
      luc_.compute(a);
      if (luc_.info() != Eigen::Success) throw SingularSystem("I - Q is singular");
    } else {
      SpMat a(n, n);
      a.setFromTriplets(tr.begin(), tr.end());
      a_norm1_ = norm1(a);
      lu_.compute(a);
      if (lu_.info() != Eigen::Success) throw SingularSystem("I - Q is singular");
      SpMat at = a.transpose();
      luT_.compute(at);
      if (luT_.info() != Eigen::Success) throw SingularSystem("I - Q is singular");
    }
  }

  const WeightedDigraph& g_;
  InteriorIndex idx_;
  std::complex<double> phase_;
  bool complex_ = false;
  double a_norm1_ = 0;
  Eigen::SparseLU<SpMat> lu_, luT_;
  Eigen::SparseLU<SpMatC> luc_;
};

// rhs for a target: r(v) = sum of (possibly phased) weights of edges v -> b.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> target_rhs(const WeightedDigraph& g,
                                                 const AbsorbingSystem& sys, VertexId b) {
  Eigen::Vector<Scalar, Eigen::Dynamic> r =
      Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(sys.idx().count);
  const VertexId bc = g.canonical(b);
  for (const Edge& e : g.edges()) {
    if (!(g.canonical(e.to) == bc)) continue;
    const int i = sys.idx().of_vertex[static_cast<size_t>(g.index_of(e.from))];
    if (i < 0) continue;
    if constexpr (std::is_same_v<Scalar, double>) {
      r[i] += e.weight * sys.edge_phase(e).real();
    } else {
      r[i] += e.weight * sys.edge_phase(e);
    }
  }
  return r;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> solve_matrix(
    const WeightedDigraph& g, const AbsorbingSystem& sys,
    std::span<const VertexId> sources, std::span<const VertexId> targets) {
  const int n = static_cast<int>(sources.size());
  const int m = static_cast<int>(targets.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h(n, m);
  for (int j = 0; j < m; ++j) {
    const auto rhs = target_rhs<Scalar>(g, sys, targets[static_cast<size_t>(j)]);
    const auto x = sys.solve(rhs);
    for (int i = 0; i < n; ++i) {
      const VertexId a = sources[static_cast<size_t>(i)];
      if (!g.contains(a)) throw DomainError("source vertex outside the graph");
      const int ai = sys.idx().of_vertex[static_cast<size_t>(g.index_of(a))];
      if (ai >= 0) {
        h(i, j) = x[ai];
      } else {
        Scalar acc{};
        sys.accumulate_source_row(a, x, acc);
        h(i, j) = acc;
      }
    }
  }
  return h;
}

double det_small(const Eigen::MatrixXd& m) {
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Cylinder endpoints may carry a strip winding label, col = canonical + M*k.
// The twisted entry for labelled endpoints is phase^(k_source - k_target)
// times the entry for the canonical representatives.
int winding_label(const WeightedDigraph& cyl, VertexId v) {
  return floor_div(v.col, cyl.period());
}

}  // namespace

HittingMatrix hitting_probability_matrix(const WeightedDigraph& g,
                                         std::span<const VertexId> sources,
                                         std::span<const VertexId> targets) {
  require_finite(g, "hitting_probability_matrix");
  require_targets_boundary(g, targets);
  AbsorbingSystem sys(g, 1.0);
  HittingMatrix hm;
  hm.sources.assign(sources.begin(), sources.end());
  hm.targets.assign(targets.begin(), targets.end());
  hm.entries = solve_matrix<double>(g, sys, sources, targets);
  hm.method = HitMethod::DirectSolve;
  return hm;
}

DeterminantReport fomin_determinant(const WeightedDigraph& g,
                                    std::span<const VertexId> sources,
                                    std::span<const VertexId> targets) {
  require_finite(g, "fomin_determinant");
  require_targets_boundary(g, targets);
  if (sources.size() != targets.size()) throw DomainError("need |sources| == |targets|");
  AbsorbingSystem sys(g, 1.0);
  DeterminantReport rep;
  rep.matrix.sources.assign(sources.begin(), sources.end());
  rep.matrix.targets.assign(targets.begin(), targets.end());
  rep.matrix.entries = solve_matrix<double>(g, sys, sources, targets);
  rep.matrix.method = HitMethod::DirectSolve;
  rep.value = det_small(rep.matrix.entries);
  rep.condition_estimate = sys.condition_estimate();
  return rep;
}

HittingMatrix twisted_hitting_matrix(const WeightedDigraph& cyl,
                                     std::span<const VertexId> sources,
                                     std::span<const VertexId> targets,
                                     TwistPhase zeta) {
  if (cyl.kind() != GraphKind::Cylinder) {
    throw SeamUndefined("twisted solve needs a cylinder with its seam");
  }
  require_targets_boundary(cyl, targets);
  HittingMatrix hm;
  hm.sources.assign(sources.begin(), sources.end());
  hm.targets.assign(targets.begin(), targets.end());
  hm.twist = zeta;
  hm.method = HitMethod::TwistedCylinder;
  if (zeta.zeta == 1) {
    AbsorbingSystem sys(cyl, 1.0);
    hm.entries = solve_matrix<double>(cyl, sys, sources, targets);
    return hm;
  }
  // sign of the winding labels carried by the endpoint columns
  auto label_sign = [&](size_t i, size_t j) {
    const int k = winding_label(cyl, sources[i]) - winding_label(cyl, targets[j]);
    return k % 2 == 0 ? 1.0 : -1.0;
  };
  // zeta = -1: real solve on the orientation double cover. Sheets swap on
  // every seam crossing; the twisted entry is h((a,0)->(b,0)) - h((a,0)->(b,1)).
  const int V = cyl.vertex_count();
  std::vector<Edge> cover_edges;
  cover_edges.reserve(cyl.edges().size() * 2);
  auto lift = [&](VertexId v, int sheet) { return VertexId{v.col, v.row + sheet * (cyl.height() + 1)}; };
  for (const Edge& e : cyl.edges()) {
    const int flip = e.seam == 0 ? 0 : 1;
    for (int s = 0; s < 2; ++s) {
      cover_edges.push_back(Edge{lift(e.from, s), lift(e.to, s ^ flip), e.weight, 0});
    }
  }
  std::vector<VertexId> cover_absorbing;
  for (int v = 0; v < V; ++v) {
    const VertexId u = cyl.vertex_at(v);
    if (cyl.is_absorbing(u)) {
      cover_absorbing.push_back(lift(u, 0));
      cover_absorbing.push_back(lift(u, 1));
    }
  }
  WeightedDigraph cover = WeightedDigraph::finite(cyl.width(), 2 * (cyl.height() + 1),
                                                  std::move(cover_edges), std::move(cover_absorbing));
  AbsorbingSystem sys(cover, 1.0);
  std::vector<VertexId> src0(sources.begin(), sources.end());
  std::vector<VertexId> tgt0, tgt1;
  for (const VertexId& b : targets) {
    const VertexId bc = cyl.canonical(b);
    tgt0.push_back(lift(bc, 0));
    tgt1.push_back(lift(bc, 1));
  }
  for (VertexId& a : src0) a = lift(cyl.canonical(a), 0);
  const Eigen::MatrixXd h0 = solve_matrix<double>(cover, sys, src0, tgt0);
  const Eigen::MatrixXd h1 = solve_matrix<double>(cover, sys, src0, tgt1);
  hm.entries = h0 - h1;
  for (size_t i = 0; i < sources.size(); ++i) {
    for (size_t j = 0; j < targets.size(); ++j) {
      hm.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *=
          label_sign(i, j);
    }
  }
  return hm;
}

DeterminantReport affine_determinant(const WeightedDigraph& cyl,
                                     std::span<const VertexId> sources,
                                     std::span<const VertexId> targets) {
  if (sources.size() != targets.size()) throw DomainError("need |sources| == |targets|");
  const int n = static_cast<int>(sources.size());
  DeterminantReport rep;
  rep.matrix = twisted_hitting_matrix(cyl, sources, targets, TwistPhase::for_walker_count(n));
  rep.value = det_small(rep.matrix.entries);
  AbsorbingSystem sys(cyl, 1.0);
  rep.condition_estimate = sys.condition_estimate();
  return rep;
}

SumOfDeterminants sum_of_determinants(const WeightedDigraph& cyl,
                                      std::span<const VertexId> sources,
                                      std::span<const VertexId> targets) {
  if (cyl.kind() != GraphKind::Cylinder) {
    throw SeamUndefined("sum_of_determinants needs a cylinder");
  }
  require_targets_boundary(cyl, targets);
  if (sources.size() != targets.size()) throw DomainError("need |sources| == |targets|");
  const int n = static_cast<int>(sources.size());
  std::complex<double> total = 0;
  for (int u = 0; u < n; ++u) {
    const double ang = 2.0 * M_PI * u / n;
    const std::complex<double> phase{std::cos(ang), std::sin(ang)};
    Eigen::MatrixXcd m;
    if (u == 0) {
      AbsorbingSystem sys(cyl, 1.0);
      m = solve_matrix<double>(cyl, sys, sources, targets).cast<std::complex<double>>();
    } else {
      AbsorbingSystem sys(cyl, phase);
      m = solve_matrix<std::complex<double>>(cyl, sys, sources, targets);
    }
    for (size_t i = 0; i < sources.size(); ++i) {
      for (size_t j = 0; j < targets.size(); ++j) {
        const int k = winding_label(cyl, sources[i]) - winding_label(cyl, targets[j]);
        if (k != 0) {
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *=
              std::pow(phase, static_cast<double>(k));
        }
      }
    }
    total += Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
  }
  total /= static_cast<double>(n);
  return SumOfDeterminants{total.real(), std::abs(total.imag())};
}

HittingMatrix windowed_twisted_matrix(const WeightedDigraph& strip,
                                      std::span<const VertexId> sources,
                                      std::span<const VertexId> targets,
                                      TwistPhase zeta, int W) {
  if (strip.kind() != GraphKind::PeriodicStrip) {
    throw WrongGraphKind("windowed oracle expects a strip");
  }
  if (W < 1) throw DomainError("window width must be >= 1");
  const int M = strip.period();
  const int N = strip.height();
  int cmin = sources.front().col, cmax = sources.front().col;
  for (const VertexId& v : sources) {
    cmin = std::min(cmin, v.col);
    cmax = std::max(cmax, v.col);
  }
  for (const VertexId& v : targets) {
    cmin = std::min(cmin, v.col);
    cmax = std::max(cmax, v.col);
  }
  const int lo = cmin - W * M;
  const int hi = cmax + W * M;
  const int width = hi - lo + 1;

  // window graph: side exits are dropped (absorbing window ends)
  std::vector<Edge> edges;
  std::vector<VertexId> absorbing;
  std::vector<Edge> scratch;
  for (int r = 0; r <= N; ++r) {
    for (int c = lo; c <= hi; ++c) {
      const VertexId v{c, r};
      if (strip.is_absorbing(v)) {
        absorbing.push_back(VertexId{c - lo, r});
      }
      scratch.clear();
      strip.out_edges(v, scratch);
      for (const Edge& e : scratch) {
        if (e.to.col < lo || e.to.col > hi) continue;
        edges.push_back(Edge{VertexId{c - lo, r}, VertexId{e.to.col - lo, e.to.row}, e.weight, 0});
      }
    }
  }
  WeightedDigraph win = WeightedDigraph::finite(width, N + 1, std::move(edges), std::move(absorbing));
  AbsorbingSystem sys(win, 1.0);

  std::vector<VertexId> shifted_sources;
  for (const VertexId& a : sources) shifted_sources.push_back(VertexId{a.col - lo, a.row});

  HittingMatrix hm;
  hm.sources.assign(sources.begin(), sources.end());
  hm.targets.assign(targets.begin(), targets.end());
  hm.twist = zeta;
  hm.method = HitMethod::WindowedStrip;
  hm.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sources.size()),
                                     static_cast<Eigen::Index>(targets.size()));
  for (size_t j = 0; j < targets.size(); ++j) {
    for (int k = -W; k <= W; ++k) {
      const int col = targets[j].col + k * M;
      if (col < lo || col > hi) continue;
      std::vector<VertexId> tgt{VertexId{col - lo, targets[j].row}};
      const Eigen::MatrixXd hk = solve_matrix<double>(win, sys, shifted_sources, tgt);
      const double phase = (zeta.zeta == 1 || k % 2 == 0) ? 1.0 : -1.0;
      for (size_t i = 0; i < sources.size(); ++i) {
        hm.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            phase * hk(static_cast<Eigen::Index>(i), 0);
      }
    }
  }
  return hm;
}

Eigen::VectorXd absorption_probabilities(const WeightedDigraph& g) {
  require_finite(g, "absorption_probabilities");
  AbsorbingSystem sys(g, 1.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.idx().count);
  for (const Edge& e : g.edges()) {
    const int i = sys.idx().of_vertex[static_cast<size_t>(g.index_of(e.from))];
    if (i < 0) continue;
    if (g.is_absorbing(e.to)) rhs[i] += e.weight;
  }
  return sys.solve(rhs);
}

double condition_estimate_dense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DomainError("square matrix required");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd inv = lu.inverse();
  double na = 0, ni = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    na = std::max(na, a.col(j).cwiseAbs().sum());
    ni = std::max(ni, inv.col(j).cwiseAbs().sum());
  }
  return na * ni;
}

}  // namespace lew
