#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lew/identities.hpp"
#include "lew/rmt.hpp"
#include "lew/rng.hpp"

using namespace lew;
namespace I = lew::ident;

namespace {

double naive_perm4(const Eigen::MatrixXd& a) {
  std::vector<int> p{0, 1, 2, 3};
  double s = 0;
  do {
    s += a(0, p[0]) * a(1, p[1]) * a(2, p[2]) * a(3, p[3]);
  } while (std::next_permutation(p.begin(), p.end()));
  return s;
}

}  // namespace

TEST_CASE("permanent: identity, ones, diagonal, naive cross-check") {
  CHECK(I::permanent(Eigen::MatrixXd::Identity(4, 4)) == doctest::Approx(1.0));
  CHECK(I::permanent(Eigen::MatrixXd::Ones(3, 3)) == doctest::Approx(6.0));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 2, 3, 5;
  CHECK(I::permanent(d) == doctest::Approx(30.0));
  CHECK(I::permanent(d) ==
        doctest::Approx(Eigen::PartialPivLU<Eigen::MatrixXd>(d).determinant()));
  RngStream rng(4, 0, 0);
  Eigen::MatrixXd a(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a(i, j) = 2 * rng.uniform() - 1;
  }
  CHECK(I::permanent(a) == doctest::Approx(naive_perm4(a)).epsilon(1e-12));
  CHECK_THROWS_AS(I::permanent(Eigen::MatrixXd::Ones(11, 11)), TooLarge);
}

TEST_CASE("carlitz factorization: n=1 trivial, n=2..4 random points") {
  const double x1[] = {0.4};
  const double t1[] = {1.2};
  const auto c1 = I::carlitz_factorization_check(x1, t1);
  CHECK(c1.pass);
  CHECK(c1.lhs.real() == doctest::Approx(c1.rhs.real()).epsilon(1e-14));
  RngStream rng(8, 0, 0);
  for (int n = 2; n <= 4; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> x, th;
      for (int i = 0; i < n; ++i) {
        x.push_back(1.6 * rng.uniform() - 0.8);
        th.push_back(0.15 + (M_PI - 0.3) * rng.uniform());
      }
      std::sort(x.begin(), x.end(), std::greater<>());
      std::sort(th.begin(), th.end());
      bool well_separated = true;
      for (int i = 0; i + 1 < n; ++i) {
        if (x[i] - x[i + 1] < 0.05 || th[i + 1] - th[i] < 0.05) well_separated = false;
      }
      if (!well_separated) continue;
      const auto c = I::carlitz_factorization_check(x, th);
      INFO(c.name, " rel_err=", c.rel_err);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("confluent limit: monomials are exact, exponentials converge linearly") {
  const double eps[] = {1e-2, 1e-3, 1e-4};
  const double mono[] = {0, 0, 0};
  const auto mono_cases =
      I::confluent_vandermonde_check(I::TestFunctions::Monomials, mono, 0.7, eps);
  for (const auto& c : mono_cases) {
    CHECK(c.rel_err < 1e-13);
  }
  // n=2 exponentials at x0 = 0: the limit equals the rate difference
  const double rates2[] = {1.5, -0.5};
  const auto e2 = I::confluent_vandermonde_check(I::TestFunctions::Exponentials, rates2,
                                                 0.0, eps);
  for (const auto& c : e2) {
    CHECK(c.rhs.real() == doctest::Approx(-2.0));  // C = 1, a_2 - a_1 with our row order
    CHECK(c.pass);
  }
  // error decreases linearly in eps
  const double r01 = e2[0].rel_err / e2[1].rel_err;
  const double r12 = e2[1].rel_err / e2[2].rel_err;
  CHECK(r01 > 3.0);
  CHECK(r01 < 30.0);
  CHECK(r12 > 3.0);
  CHECK(r12 < 30.0);

  const double rates3[] = {0.9, 0.1, -1.1};
  const auto e3 = I::confluent_vandermonde_check(I::TestFunctions::Exponentials, rates3,
                                                 0.2, eps);
  for (const auto& c : e3) CHECK(c.pass);
  CHECK(e3[0].rel_err > e3[1].rel_err);
  CHECK(e3[1].rel_err > e3[2].rel_err);
}

TEST_CASE("poisson summation check across r values") {
  for (double r : {0.05, 0.1, 0.3}) {
    for (double twist : {0.0, 0.5}) {
      const auto c = I::poisson_summation_check(r, twist, 0.3, -0.8);
      INFO("r=", r, " twist=", twist, " rel_err=", c.rel_err);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("cauchy product formulas, n=2 quadrant hand expansion") {
  const double x[] = {1.5, 0.5};
  const double y[] = {2.0, 1.0};
  // hand expansion of the 2x2 determinant
  auto k = [](double a, double b) { return (2.0 / M_PI) * a / (a * a + b * b); };
  const double hand = k(x[0], y[0]) * k(x[1], y[1]) - k(x[0], y[1]) * k(x[1], y[0]);
  const double prod = rmt::quadrant_closed_form(x, y);
  CHECK(prod == doctest::Approx(hand).epsilon(1e-13));
  const auto c = I::cauchy_product_formula_check(I::CauchyDomain::Quadrant, x, y);
  CHECK(c.pass);
}

TEST_CASE("identity suites run deterministically and pass") {
  for (const char* which : {"permanent", "carlitz", "vandermonde", "poisson", "cauchy"}) {
    const auto cases = I::run_suite(which, 7);
    CHECK(!cases.empty());
    for (const auto& c : cases) {
      INFO(c.name, " rel_err=", c.rel_err, " tol=", c.tol);
      CHECK(c.pass);
    }
    const auto again = I::run_suite(which, 7);
    REQUIRE(again.size() == cases.size());
    for (size_t i = 0; i < cases.size(); ++i) {
      CHECK(again[i].rel_err == cases[i].rel_err);  // bitwise reproducible
    }
  }
  CHECK_THROWS_AS(I::run_suite("nope", 1), DomainError);
}
