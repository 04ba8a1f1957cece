#include <doctest.h>

#include <map>

#include "lew/hitting.hpp"
#include "lew/lattice.hpp"

using namespace lew;

namespace {

std::vector<RowWeights> uniform_rows(int N) {
  return std::vector<RowWeights>(static_cast<size_t>(N), RowWeights{0.25, 0.25, 0.25, 0.25});
}

// Oracle: truncated path enumeration on the uniform M=4, N=1 cylinder as a
// length-L distribution sweep; the un-absorbed interior mass certifies the
// truncation error.
struct EnumResult {
  std::array<double, 4> h;   // absorption split by target column, start col 0
  double tail = 0;
};

EnumResult enumerate_cylinder4(int start_col, int L) {
  std::array<double, 4> p{};  // interior mass per column (row 0)
  p[static_cast<size_t>(start_col)] = 1.0;
  EnumResult res{};
  for (int step = 0; step < L; ++step) {
    std::array<double, 4> q{};
    for (int c = 0; c < 4; ++c) {
      res.h[static_cast<size_t>(c)] += 0.5 * p[static_cast<size_t>(c)];  // reflected up
      q[static_cast<size_t>((c + 1) % 4)] += 0.25 * p[static_cast<size_t>(c)];
      q[static_cast<size_t>((c + 3) % 4)] += 0.25 * p[static_cast<size_t>(c)];
    }
    p = q;
  }
  for (double m : p) res.tail += m;
  return res;
}

// Oracle: vertex-disjoint up/right path families counted by a column-interval
// sweep over rows (no determinants involved).
long lgv_count(int W, int H, const std::vector<int>& a_cols, const std::vector<int>& b_cols) {
  const int n = static_cast<int>(a_cols.size());
  // state: strictly decreasing up-step columns, packed as digits
  std::map<std::vector<int>, long> states;
  // row 0: path i moves right from a_cols[i] to x_i, intervals disjoint
  std::vector<int> x(static_cast<size_t>(n));
  std::function<void(int, std::map<std::vector<int>, long>&, const std::vector<int>&, bool)>
      extend = [&](int i, std::map<std::vector<int>, long>& out, const std::vector<int>& entry,
                   bool from_start) {
        if (i == n) {
          out[x] += 1;
          return;
        }
        const int lo = entry[static_cast<size_t>(i)];
        const int hi = i == 0 ? W - 1 : std::min(W - 1, x[static_cast<size_t>(i - 1)] - 1);
        // disjointness with the previous path's interval: x_i may run up to
        // entry[i-1] - 1
        const int cap = i == 0 ? hi : std::min(hi, entry[static_cast<size_t>(i - 1)] - 1);
        (void)from_start;
        for (int c = lo; c <= cap; ++c) {
          x[static_cast<size_t>(i)] = c;
          extend(i + 1, out, entry, from_start);
        }
      };
  extend(0, states, a_cols, true);
  for (int r = 1; r <= H - 2; ++r) {
    std::map<std::vector<int>, long> next;
    for (const auto& [entry, count] : states) {
      std::map<std::vector<int>, long> ext;
      extend(0, ext, entry, false);
      for (const auto& [st, c2] : ext) next[st] += count * c2;
    }
    states = std::move(next);
  }
  const auto it = states.find(b_cols);
  return it == states.end() ? 0 : it->second;
}

}  // namespace

TEST_CASE("deterministic up chain: h(a, top(a)) = 1") {
  std::vector<RowWeights> rows{RowWeights{1, 0, 0, 0}};
  auto cyl = WeightedDigraph::cylinder(1, 1, rows);
  std::vector<VertexId> a{VertexId{0, 0}}, b{VertexId{0, 1}};
  const auto hm = hitting_probability_matrix(cyl, a, b);
  CHECK(hm.entries(0, 0) == doctest::Approx(1.0));
  const auto rep = fomin_determinant(cyl, a, b);
  CHECK(rep.value == doctest::Approx(1.0));
}

TEST_CASE("uniform cylinder M=4: rotational symmetry of hitting probabilities") {
  auto cyl = WeightedDigraph::cylinder(4, 1, uniform_rows(1));
  std::vector<VertexId> b;
  for (int c = 0; c < 4; ++c) b.push_back(VertexId{c, 1});
  for (int c = 0; c < 4; ++c) {
    std::vector<VertexId> a{VertexId{c, 0}, VertexId{(c + 2) % 4, 0}};
    const auto hm = hitting_probability_matrix(cyl, a, b);
    CHECK(hm.entries(0, static_cast<Eigen::Index>(c)) ==
          doctest::Approx(hm.entries(1, static_cast<Eigen::Index>((c + 2) % 4))));
  }
}

TEST_CASE("uniform cylinder M=4: full matrix matches truncated enumeration") {
  auto cyl = WeightedDigraph::cylinder(4, 1, uniform_rows(1));
  std::vector<VertexId> a, b;
  for (int c = 0; c < 4; ++c) {
    a.push_back(VertexId{c, 0});
    b.push_back(VertexId{c, 1});
  }
  const auto hm = hitting_probability_matrix(cyl, a, b);
  const int L = 64;
  for (int i = 0; i < 4; ++i) {
    const auto oracle = enumerate_cylinder4(i, L);
    REQUIRE(oracle.tail < 1e-14);
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(hm.entries(i, j) - oracle.h[static_cast<size_t>(j)]) <
            oracle.tail + 1e-12);
    }
  }
  // row sums over the full boundary are 1
  for (int i = 0; i < 4; ++i) {
    CHECK(hm.entries.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("h+ convention: boundary starts first step into the interior") {
  auto cyl = WeightedDigraph::cylinder(3, 1, uniform_rows(1));
  std::vector<VertexId> a{VertexId{0, 1}};  // on the absorbing boundary
  std::vector<VertexId> b;
  for (int c = 0; c < 3; ++c) b.push_back(VertexId{c, 1});
  const auto hm = hitting_probability_matrix(cyl, a, b);
  CHECK(hm.entries.row(0).sum() == doctest::Approx(1.0).epsilon(1e-10));
  // stepping down then eventually absorbing anywhere, not at step 0
  CHECK(hm.entries(0, 0) < 1.0);
  CHECK(hm.entries(0, 0) > hm.entries(0, 1));
}

TEST_CASE("fomin determinant basics") {
  auto g = WeightedDigraph::grid(6, 5, uniform_rows(4));
  std::vector<VertexId> a{VertexId{4, 0}};
  std::vector<VertexId> b{VertexId{4, 4}};
  const auto rep1 = fomin_determinant(g, a, b);
  const auto hm = hitting_probability_matrix(g, a, b);
  CHECK(rep1.value == doctest::Approx(hm.entries(0, 0)));
  CHECK(rep1.condition_estimate > 1.0);

  std::vector<VertexId> a2{VertexId{4, 0}, VertexId{1, 0}};
  std::vector<VertexId> b2{VertexId{3, 4}, VertexId{3, 4}};
  const auto rep2 = fomin_determinant(g, a2, b2);
  CHECK(rep2.value == doctest::Approx(0.0));

  std::vector<VertexId> b3{VertexId{4, 4}, VertexId{1, 4}};
  const auto rep3 = fomin_determinant(g, a2, b3);
  CHECK(rep3.value >= -1e-12);
  CHECK(rep3.value > 0);
}

TEST_CASE("solver error paths") {
  auto g = WeightedDigraph::grid(4, 3, uniform_rows(2));
  std::vector<VertexId> a{VertexId{0, 0}};
  std::vector<VertexId> binterior{VertexId{0, 1}};
  CHECK_THROWS_AS(hitting_probability_matrix(g, a, binterior), TargetNotBoundary);
  auto strip = WeightedDigraph::strip(4, 2, uniform_rows(2));
  std::vector<VertexId> b{VertexId{0, 2}};
  CHECK_THROWS_AS(hitting_probability_matrix(strip, a, b), WrongGraphKind);
  CHECK_THROWS_AS(twisted_hitting_matrix(g, a, std::vector<VertexId>{VertexId{0, 2}},
                                         TwistPhase{1}),
                  SeamUndefined);
}

TEST_CASE("twisted entries: zeta=+1 collapses to plain cylinder probabilities") {
  auto cyl = WeightedDigraph::cylinder(6, 3, uniform_rows(3));
  std::vector<VertexId> a{VertexId{4, 0}, VertexId{1, 0}};
  std::vector<VertexId> b{VertexId{4, 3}, VertexId{1, 3}};
  const auto tw = twisted_hitting_matrix(cyl, a, b, TwistPhase{1});
  const auto plain = hitting_probability_matrix(cyl, a, b);
  CHECK((tw.entries - plain.entries).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("twisted entries: deterministic up chain with zeta=-1 gives 1") {
  std::vector<RowWeights> rows{RowWeights{1, 0, 0, 0}};
  auto cyl = WeightedDigraph::cylinder(1, 1, rows);
  std::vector<VertexId> a{VertexId{0, 0}}, b{VertexId{0, 1}};
  const auto tw = twisted_hitting_matrix(cyl, a, b, TwistPhase{-1});
  CHECK(tw.entries(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("twisted cylinder solve vs windowed-strip oracle, geometric in W") {
  auto strip = WeightedDigraph::strip(6, 3, uniform_rows(3));
  auto cyl = WeightedDigraph::cylinder(6, 3, uniform_rows(3));
  std::vector<VertexId> a{VertexId{4, 0}, VertexId{1, 0}};
  std::vector<VertexId> b{VertexId{4, 3}, VertexId{1, 3}};
  for (int zeta : {1, -1}) {
    const auto exact = twisted_hitting_matrix(cyl, a, b, TwistPhase{zeta});
    double prev = 1e9;
    for (int W = 1; W <= 8; ++W) {
      const auto win = windowed_twisted_matrix(strip, a, b, TwistPhase{zeta}, W);
      const double diff = (exact.entries - win.entries).cwiseAbs().maxCoeff();
      if (prev > 1e-13) CHECK(diff < prev);
      if (W >= 2 && prev > 1e-12) CHECK(diff < 0.8 * prev);
      prev = diff;
    }
    CHECK(prev < 1e-9);
  }
}

TEST_CASE("affine determinant: n=1 equals the plain quotient hitting probability") {
  auto cyl = WeightedDigraph::cylinder(5, 2, uniform_rows(2));
  std::vector<VertexId> a{VertexId{2, 0}}, b{VertexId{3, 2}};
  const auto rep = affine_determinant(cyl, a, b);
  const auto plain = hitting_probability_matrix(cyl, a, b);
  CHECK(rep.value == doctest::Approx(plain.entries(0, 0)));
}

TEST_CASE("affine determinant: repeated target column vanishes (n even)") {
  auto cyl = WeightedDigraph::cylinder(6, 2, uniform_rows(2));
  std::vector<VertexId> a{VertexId{4, 0}, VertexId{1, 0}};
  std::vector<VertexId> b{VertexId{2, 2}, VertexId{2, 2}};
  const auto rep = affine_determinant(cyl, a, b);
  CHECK(std::abs(rep.value) < 1e-14);
}

TEST_CASE("affine determinant is nonnegative for ordered endpoints") {
  auto cyl = WeightedDigraph::cylinder(6, 3, uniform_rows(3));
  for (int n = 2; n <= 3; ++n) {
    std::vector<VertexId> a, b;
    const int cols3[3] = {4, 2, 0};
    const int cols2[2] = {3, 0};
    for (int i = 0; i < n; ++i) {
      const int c = n == 2 ? cols2[i] : cols3[i];
      a.push_back(VertexId{c, 0});
      b.push_back(VertexId{c, 3});
    }
    const auto rep = affine_determinant(cyl, a, b);
    CHECK(rep.value >= -1e-12);
    CHECK(rep.value > 0);
  }
}

TEST_CASE("sum of determinants: n=1 equals the affine determinant") {
  auto cyl = WeightedDigraph::cylinder(4, 2, uniform_rows(2));
  std::vector<VertexId> a{VertexId{1, 0}}, b{VertexId{2, 2}};
  const auto sum = sum_of_determinants(cyl, a, b);
  const auto aff = affine_determinant(cyl, a, b);
  CHECK(sum.value == doctest::Approx(aff.value));
  CHECK(sum.imag_residual < 1e-12);
}

TEST_CASE("sum of determinants: complex intermediates cancel for n=2") {
  auto cyl = WeightedDigraph::cylinder(6, 3, uniform_rows(3));
  std::vector<VertexId> a{VertexId{3, 0}, VertexId{0, 0}};
  std::vector<VertexId> b{VertexId{3, 3}, VertexId{0, 3}};
  const auto sum = sum_of_determinants(cyl, a, b);
  CHECK(sum.imag_residual < 1e-10);
  // (det_0 + det_{zeta=-1})/2 recovers the plain and twisted determinants
  const auto plain = fomin_determinant(cyl, a, b);
  const auto twisted = affine_determinant(cyl, a, b);
  CHECK(sum.value == doctest::Approx((plain.value + twisted.value) / 2.0).epsilon(1e-10));
}

TEST_CASE("cyclic destination shifts of the sum of determinants rebuild the affine det") {
  auto cyl = WeightedDigraph::cylinder(6, 3, uniform_rows(3));
  for (int n : {2, 3}) {
    std::vector<VertexId> a, b;
    const int cols3[3] = {4, 2, 0};
    const int cols2[2] = {3, 0};
    for (int i = 0; i < n; ++i) {
      const int c = n == 2 ? cols2[i] : cols3[i];
      a.push_back(VertexId{c, 0});
      b.push_back(VertexId{c, 3});
    }
    const auto aff = affine_determinant(cyl, a, b);
    double total = 0;
    for (int ell = 0; ell < n; ++ell) {
      std::vector<VertexId> bshift(static_cast<size_t>(n));
      for (int j = 1; j <= n; ++j) {
        int src = (j - ell) % n;
        if (src <= 0) src += n;
        const int kj = j <= ell ? 1 : 0;
        bshift[static_cast<size_t>(j - 1)] =
            VertexId{b[static_cast<size_t>(src - 1)].col + 6 * kj, 3};
      }
      total += sum_of_determinants(cyl, a, bshift).value;
    }
    CHECK(total == doctest::Approx(aff.value).epsilon(1e-10));
  }
}

TEST_CASE("n-odd route: affine determinant equals the plain cylinder Fomin determinant") {
  auto cyl = WeightedDigraph::cylinder(6, 3, uniform_rows(3));
  std::vector<VertexId> a{VertexId{4, 0}, VertexId{2, 0}, VertexId{0, 0}};
  std::vector<VertexId> b{VertexId{4, 3}, VertexId{2, 3}, VertexId{0, 3}};
  const auto aff = affine_determinant(cyl, a, b);
  const auto plain = fomin_determinant(cyl, a, b);
  CHECK(std::abs(aff.value - plain.value) < 1e-10);
}

TEST_CASE("acyclic reduction: determinant equals the disjoint-path count") {
  const int W = 6, H = 5;
  auto g = WeightedDigraph::acyclic_lattice(W, H);
  SUBCASE("n = 1") {
    std::vector<VertexId> a{VertexId{1, 0}}, b{VertexId{3, 4}};
    const auto rep = fomin_determinant(g, a, b);
    const long count = lgv_count(W, H, {1}, {3});
    CHECK(rep.value == doctest::Approx(static_cast<double>(count)));
  }
  SUBCASE("n = 2") {
    std::vector<VertexId> a{VertexId{2, 0}, VertexId{0, 0}};
    std::vector<VertexId> b{VertexId{4, 4}, VertexId{1, 4}};
    const auto rep = fomin_determinant(g, a, b);
    const long count = lgv_count(W, H, {2, 0}, {4, 1});
    CHECK(count > 0);
    CHECK(rep.value == doctest::Approx(static_cast<double>(count)));
  }
  SUBCASE("n = 3") {
    std::vector<VertexId> a{VertexId{3, 0}, VertexId{1, 0}, VertexId{0, 0}};
    std::vector<VertexId> b{VertexId{5, 4}, VertexId{3, 4}, VertexId{0, 4}};
    const auto rep = fomin_determinant(g, a, b);
    const long count = lgv_count(W, H, {3, 1, 0}, {5, 3, 0});
    CHECK(count > 0);
    CHECK(rep.value == doctest::Approx(static_cast<double>(count)));
  }
}

TEST_CASE("dense condition estimate sanity") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  CHECK(condition_estimate_dense(eye) == doctest::Approx(1.0));
  Eigen::MatrixXd scaled = eye;
  scaled(0, 0) = 1e-6;
  CHECK(condition_estimate_dense(scaled) == doctest::Approx(1e6));
}
