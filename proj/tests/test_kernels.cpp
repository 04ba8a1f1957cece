#include <doctest.h>

#include <cmath>
#include <complex>

#include "lew/kernels.hpp"
#include "lew/rng.hpp"

using namespace lew;
namespace K = lew::kernels;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// fixed-order composite Gauss-Legendre on [a, b]; independent quadrature oracle
template <typename F>
double quad(F f, double a, double b, int pieces = 64) {
  static const double xs[8] = {-0.9602898564975362, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975362};
  static const double wsave[8] = {0.1012285362903763, 0.2223810344533745,
                                  0.3137066458778873, 0.3626837833783620,
                                  0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};
  double total = 0;
  const double h = (b - a) / pieces;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < 8; ++i) {
      total += wsave[i] * f(lo + 0.5 * h * (xs[i] + 1.0)) * 0.5 * h;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("quadrant kernel values and normalization") {
  CHECK(K::quadrant(1, 1) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(K::quadrant(2, 1) == doctest::Approx(4.0 / (5.0 * kPi)).epsilon(1e-14));
  const double total =
      quad([](double u) { return K::quadrant(1.0, std::tan(u)) / std::pow(std::cos(u), 2); },
           1e-12, kPi / 2 - 1e-12, 256);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(K::quadrant(-1, 1), DomainError);
  CHECK_THROWS_AS(K::quadrant(1, 0), DomainError);
}

TEST_CASE("strip kernel values, invariance, exp form") {
  CHECK(K::strip(0.7, 0, 0) == doctest::Approx(1.0 / 1.4).epsilon(1e-14));
  RngStream rng(3, 0, 0);
  for (int i = 0; i < 50; ++i) {
    const double t = 0.3 + rng.uniform();
    const double x = 4 * rng.uniform() - 2, y = 4 * rng.uniform() - 2;
    CHECK(K::strip(t, x, y) == doctest::Approx(K::strip(t, 0, y - x)).epsilon(1e-14));
  }
  const double viaexp = 1.0 / (std::exp(kPi) + std::exp(-kPi));
  CHECK(K::strip(1, 0, 2) == doctest::Approx(viaexp).epsilon(1e-14));
  const double total = quad([](double y) { return K::strip(1.0, 0.0, y); }, -40, 40, 256);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("halfdisk kernel values and normalization") {
  for (double th : {0.3, 1.1, 2.9}) {
    CHECK(K::halfdisk(0, th) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  }
  CHECK(K::halfdisk(0.5, kPi / 2) == doctest::Approx(3.0 / (5.0 * kPi)).epsilon(1e-14));
  for (double x : {0.7, -0.7}) {
    const double total = quad([x](double th) { return K::halfdisk(x, th); }, 1e-12, kPi - 1e-12, 256);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(K::halfdisk(1.0, 1.0), DomainError);
}

TEST_CASE("excursion kernel values") {
  CHECK(K::excursion_halfdisk(0, kPi / 2) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK(K::excursion_halfdisk(0.3, 1e-8) < 1e-7);  // sin factor kills it
  const double total =
      quad([](double th) { return K::excursion_halfdisk(0.0, th); }, 1e-12, kPi - 1e-12, 256);
  CHECK(total == doctest::Approx(4.0 / kPi).epsilon(1e-10));
}

TEST_CASE("conformal covariance maps the strip kernel to the quadrant kernel") {
  RngStream rng(9, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const double t = 0.4 + 1.6 * rng.uniform();
    const double x = 3 * rng.uniform() - 1.5;
    const double y = 3 * rng.uniform() - 1.5;
    const double a = kPi / (2.0 * t);
    const double fx = std::exp(a * x);
    const double fy = std::exp(a * y);
    const double dfy = a * fy;  // |f'| at the absorbing boundary point
    const double lhs = K::strip(t, x, y);
    const double rhs = dfy * K::quadrant(fx, fy);
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("circle heat sum: image and dual evaluations agree on a 10x10 grid") {
  for (double t : {0.5, 2.0}) {
    for (double twist : {0.0, 0.5}) {
      for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
          const double th = -kPi + 2 * kPi * (i + 0.5) / 10;
          const double nu = -kPi + 2 * kPi * (j + 0.5) / 10;
          const auto img = K::circle_heat_sum(t, twist, th, nu);
          const auto dual = K::circle_heat_sum_dual(t, twist, th, nu);
          const double scale = std::max({std::abs(img.value), std::abs(dual.value), 1e-3});
          CHECK(std::abs(img.value - dual.value) / scale < 1e-11);
        }
      }
    }
  }
}

TEST_CASE("circle heat sum: wrapped normalization and theta forms") {
  const double total =
      quad([](double nu) { return K::circle_heat_sum(0.8, 0.0, 0.0, nu).value; }, 0, 2 * kPi, 64);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  RngStream rng(10, 0, 0);
  for (int i = 0; i < 20; ++i) {
    const double t = 0.4 + 3 * rng.uniform();
    const double s = 2 * kPi * rng.uniform() - kPi;
    const auto v0 = K::circle_heat_sum_dual(t, 0.0, 0.0, s);
    CHECK(K::circle_theta_entry(t, 0.0, 0.0, s) ==
          doctest::Approx(v0.value).epsilon(1e-12));
    const auto v5 = K::circle_heat_sum_dual(t, 0.5, 0.0, s);
    CHECK(K::circle_theta_entry(t, 0.5, 0.0, s) ==
          doctest::Approx(v5.value).epsilon(1e-12));
  }
}

TEST_CASE("circle heat sum with general phase matches the twist cases") {
  const double t = 1.3, th = 0.4, nu = -1.1;
  const auto v0 = K::circle_heat_sum_dual(t, 0.0, th, nu);
  const auto c0 = K::circle_heat_sum_phase(t, 0.0, th, nu);
  CHECK(std::abs(c0 - std::complex<double>(v0.value, 0)) < 1e-13);
  const auto v5 = K::circle_heat_sum_dual(t, 0.5, th, nu);
  const auto c5 = K::circle_heat_sum_phase(t, 0.5, th, nu);
  CHECK(std::abs(c5 - std::complex<double>(v5.value, 0)) < 1e-13);
}

TEST_CASE("annulus sum: dual agreement and direct truncated image sum") {
  for (double r : {0.05, 0.1, 0.3}) {
    for (double twist : {0.0, 0.5}) {
      for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
          const double th = -kPi + 2 * kPi * (i + 0.5) / 10;
          const double nu = -kPi + 2 * kPi * (j + 0.5) / 10;
          const auto img = K::annulus_sum(r, twist, th, nu);
          const auto dual = K::annulus_sum_dual(r, twist, th, nu);
          const double scale = std::max({std::abs(img.value), std::abs(dual.value), 1e-3});
          CHECK(std::abs(img.value - dual.value) / scale < 1e-11);
        }
      }
    }
  }
  {
    const double r = 0.1, L = std::abs(std::log(r));
    double direct = 0;
    for (int k = -60; k <= 60; ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      direct += sign / (2.0 * L * std::cosh(kPi * (2.0 * kPi * k) / (2.0 * L)));
    }
    const auto v = K::annulus_sum(r, 0.5, 0.7, 0.7);
    CHECK(v.value == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("annulus sum leading asymptotics as r -> 0") {
  const double r = 1e-6, L = std::abs(std::log(r));
  const double s = 0.9;
  const auto v = K::annulus_sum_dual(r, 0.5, 0.0, s);
  const double leading = std::cos(s / 2.0) / (kPi * std::cosh(L / 2.0));
  CHECK(v.value == doctest::Approx(leading).epsilon(1e-5));
}

TEST_CASE("jacobi theta basics") {
  CHECK(K::jacobi_theta(3, 0.0, 0.0).real() == doctest::Approx(1.0));
  for (double q : {0.1, 0.35, 0.7}) {
    CHECK(K::jacobi_theta(4, 0.0, q).real() ==
          doctest::Approx(K::jacobi_theta(3, 0.0, -q).real()).epsilon(1e-13));
  }
  double direct = 1.0;
  for (int n = 1; n <= 20; ++n) direct += 2.0 * std::pow(0.1, n * n);
  CHECK(K::jacobi_theta(3, 0.0, 0.1).real() == doctest::Approx(direct).epsilon(1e-14));
  CHECK(K::jacobi_theta(3, 0.0, 0.1).real() == doctest::Approx(1.2002).epsilon(1e-4));
  CHECK_THROWS_AS(K::jacobi_theta(3, 0.0, 1.0), Nonconvergent);
  CHECK_THROWS_AS(K::jacobi_theta(5, 0.0, 0.1), DomainError);
}

TEST_CASE("annulus theta-ratio form matches the sums") {
  for (double r : {0.05, 0.1, 0.3}) {
    for (double twist : {0.0, 0.5}) {
      for (int i = 0; i < 8; ++i) {
        const double s = -2.5 + 5.0 * i / 7.0;
        const auto dual = K::annulus_sum_dual(r, twist, 0.0, s);
        const double theta_form = K::annulus_theta_entry(r, twist, 0.0, s);
        CHECK(std::abs(theta_form - dual.value) /
                  std::max(std::abs(dual.value), 1e-3) <
              1e-10);
      }
    }
  }
}

TEST_CASE("certified tails really bound the truncation error") {
  const double r = 0.3, L = std::abs(std::log(r));
  for (double twist : {0.0, 0.5}) {
    const double s = 1.234;
    const auto v = K::annulus_sum_dual(r, twist, 0.0, s);
    double big = 0;
    for (int k = -2000; k <= 2000; ++k) {
      big += std::cos(s * (twist + k)) / std::cosh(L * (twist + k));
    }
    big /= 2.0 * kPi;
    CHECK(std::abs(v.value - big) <= v.tail_bound + 1e-15);
    CHECK(v.terms > 0);
  }
}
