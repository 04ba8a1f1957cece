#include <doctest.h>

#include <cmath>

#include "lew/kernels.hpp"
#include "lew/rmt.hpp"
#include "lew/rng.hpp"

using namespace lew;
namespace R = lew::rmt;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("chamber membership predicates") {
  R::ChamberSpec weyl{R::Chamber::WeylC, 3};
  const double good[] = {2.0, 0.5, -1.0};
  const double bad[] = {0.5, 2.0, -1.0};
  CHECK(weyl.contains(good));
  CHECK_FALSE(weyl.contains(bad));
  R::ChamberSpec th{R::Chamber::Theta, 2};
  const double tgood[] = {0.5, 2.0};
  CHECK(th.contains(tgood));
  R::ChamberSpec aff{R::Chamber::AffineC, 3};
  const double agood[] = {2.5, 0.3, -2.9};
  const double abig[] = {3.5, 0.3, -2.9};  // span exceeds 2 pi
  CHECK(aff.contains(agood));
  CHECK_FALSE(aff.contains(abig));
}

TEST_CASE("km gaussian density basics") {
  const double x1[] = {0.3}, y1[] = {1.0};
  CHECK(R::km_gaussian_density(1.0, x1, y1) ==
        doctest::Approx(std::exp(-0.49 / 2) / std::sqrt(2 * kPi)).epsilon(1e-14));
  const double x2[] = {1.0, 0.0}, y2[] = {2.0, 1.0};
  auto p = [](double t, double a, double b) {
    return std::exp(-(a - b) * (a - b) / (2 * t)) / std::sqrt(2 * kPi * t);
  };
  const double cof = p(1, 1, 2) * p(1, 0, 1) - p(1, 1, 1) * p(1, 0, 2);
  CHECK(R::km_gaussian_density(1.0, x2, y2) == doctest::Approx(cof).epsilon(1e-13));
  const double yeq[] = {1.0, 1.0};
  CHECK(R::km_gaussian_density(1.0, x2, yeq) == doctest::Approx(0.0));
}

TEST_CASE("goe limit density: orientation and wall vanishing") {
  const double y[] = {1.0, -1.0};
  CHECK(R::goe_limit_density(1.0, y) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
  const double wall[] = {1.0, 1.0};
  CHECK(R::goe_limit_density(1.0, wall) == doctest::Approx(0.0));
  // positive on the chamber (oriented Vandermonde)
  const double y3[] = {1.5, 0.2, -0.9};
  CHECK(R::goe_limit_density(2.0, y3) > 0);
}

TEST_CASE("quadrant determinant density and limit values") {
  const double x1[] = {1.0}, y1[] = {1.0};
  CHECK(R::quadrant_det_density(x1, y1) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  // paper formula substitution at n=1, t=1, y=1: (t^2+y^2)^{-1} = 1/2
  CHECK(R::quadrant_limit_density(1.0, y1) == doctest::Approx(0.5).epsilon(1e-14));
  const double x2[] = {1.5, 0.5}, yeq[] = {1.0, 1.0};
  CHECK(R::quadrant_det_density(x2, yeq) == doctest::Approx(0.0).epsilon(1e-12));
  RngStream rng(12, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    double x[3], y[3];
    x[2] = 0.3 + rng.uniform();
    x[1] = x[2] + 0.5 + rng.uniform();
    x[0] = x[1] + 0.5 + rng.uniform();
    y[2] = 0.3 + rng.uniform();
    y[1] = y[2] + 0.5 + rng.uniform();
    y[0] = y[1] + 0.5 + rng.uniform();
    const double det = R::quadrant_det_density(x, y);
    const double prod = R::quadrant_closed_form(x, y);
    CHECK(std::abs(det - prod) / std::abs(prod) < 1e-12);
    CHECK(det > 0);
  }
}

TEST_CASE("halfdisk closed form, two product faces, and limit substitution") {
  const double th2[] = {kPi / 3, 2 * kPi / 3};
  CHECK(R::halfdisk_limit_density(th2) == doctest::Approx(2.0).epsilon(1e-14));
  RngStream rng(13, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    double x[2], th[2];
    x[1] = -0.8 + 0.7 * rng.uniform();
    x[0] = x[1] + 0.4 + 0.5 * rng.uniform();
    th[0] = 0.2 + rng.uniform();
    th[1] = th[0] + 0.5 + rng.uniform();
    const double det = R::halfdisk_det_density(x, th);
    const double prod = R::halfdisk_closed_form(x, th);
    CHECK(std::abs(det - prod) / std::abs(prod) < 1e-12);
    // the two faces of the limit product agree
    const double f1 = 2.0 * (std::cos(th[0]) - std::cos(th[1]));
    const double f2 = std::abs(std::exp(std::complex<double>(0, th[0])) -
                               std::exp(std::complex<double>(0, th[1]))) *
                      std::abs(std::exp(std::complex<double>(0, th[0])) -
                               std::exp(std::complex<double>(0, -th[1])));
    CHECK(f1 == doctest::Approx(f2).epsilon(1e-12));
  }
}

TEST_CASE("excursion factorization and the x -> 0 limit shape") {
  const double x1[] = {0.4}, t1[] = {1.1};
  CHECK(R::excursion_det_density(x1, t1) ==
        doctest::Approx(kernels::excursion_halfdisk(0.4, 1.1)).epsilon(1e-14));
  RngStream rng(14, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    double x[2], th[2];
    x[1] = -0.7 + 0.6 * rng.uniform();
    x[0] = x[1] + 0.3 + 0.4 * rng.uniform();
    th[0] = 0.3 + 0.8 * rng.uniform();
    th[1] = th[0] + 0.4 + 0.8 * rng.uniform();
    const double det = R::excursion_det_density(x, th);
    const double fac = R::excursion_factored_form(x, th);
    CHECK(std::abs(det - fac) / std::max(std::abs(det), 1e-300) < 1e-11);
  }
}

TEST_CASE("circle transition density: n=1 wrapped gaussian, positivity, cyclic sum") {
  const double th1[] = {0.4}, nu1[] = {-0.9};
  CHECK(R::circle_transition_density(1.2, th1, nu1) ==
        doctest::Approx(kernels::circle_heat_sum_dual(1.2, 0.0, 0.4, -0.9).value)
            .epsilon(1e-13));
  // positivity on random chamber pairs (n=2)
  RngStream rng(15, 0, 0);
  int checked = 0;
  for (int rep = 0; rep < 100; ++rep) {
    double th[2], nu[2];
    th[1] = -kPi + 2 * kPi * rng.uniform();
    th[0] = th[1] + 0.1 + (2 * kPi - 0.2) * rng.uniform();
    nu[1] = -kPi + 2 * kPi * rng.uniform();
    nu[0] = nu[1] + 0.1 + (2 * kPi - 0.2) * rng.uniform();
    R::ChamberSpec aff{R::Chamber::AffineC, 2};
    if (!aff.contains(th) || !aff.contains(nu)) continue;
    ++checked;
    CHECK(R::circle_transition_density(1.0, th, nu) > 0);
  }
  CHECK(checked > 50);
}

TEST_CASE("cyclic shifts rebuild the single determinant (t in {0.5, 1, 5})") {
  for (int n : {2, 3, 4}) {
    std::vector<double> th(static_cast<size_t>(n)), nu(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j) {
      th[static_cast<size_t>(j - 1)] = kPi * (n + 1 - 2.0 * j) / n;
      nu[static_cast<size_t>(j - 1)] = kPi * (n + 1 - 2.0 * j) / n + 0.2 / j;
    }
    for (double t : {0.5, 1.0, 5.0}) {
      const double single = R::circle_transition_density(t, th, nu);
      std::complex<double> total = 0;
      for (int ell = 0; ell < n; ++ell) {
        const auto nushift = R::cyclic_shift_in_chamber(nu, ell);
        total += R::circle_qstar(t, th, nushift);
      }
      INFO("n=", n, " t=", t, " single=", single, " sum=", total.real());
      CHECK(std::abs(total.imag()) < 1e-10);
      CHECK(std::abs(total.real() - single) <= 1e-10 * std::max(1.0, std::abs(single)));
    }
  }
}

TEST_CASE("normalize: COE n=2 constant equals 16 pi; quadrature vs MC") {
  R::ChamberSpec aff{R::Chamber::AffineC, 2};
  const double m = R::normalize([](std::span<const double> nu) { return R::coe_density(nu); },
                                aff);
  CHECK(m == doctest::Approx(16.0 * kPi).epsilon(1e-8));
  const auto mc = R::mc_normalize(
      [](std::span<const double> nu) { return R::coe_density(nu); }, aff, 200000, 7);
  CHECK(std::abs(mc.value - m) <= 3.0 * mc.std_err);
}

TEST_CASE("normalize: normalized densities integrate to one") {
  R::ChamberSpec th{R::Chamber::Theta, 2};
  const double m =
      R::normalize([](std::span<const double> t) { return R::halfdisk_limit_density(t); }, th);
  const double again = R::normalize(
      [m](std::span<const double> t) { return R::halfdisk_limit_density(t) / m; }, th);
  CHECK(again == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("chamber grids are deterministic, ordered, wall-separated") {
  R::ChamberSpec aff{R::Chamber::AffineC, 3};
  const auto g1 = R::chamber_grid(aff, 20, 0.05, -kPi, kPi, 5);
  const auto g2 = R::chamber_grid(aff, 20, 0.05, -kPi, kPi, 5);
  REQUIRE(g1.size() == 20);
  CHECK(g1 == g2);
  for (const auto& p : g1) {
    CHECK(aff.contains(p));
    for (size_t i = 0; i + 1 < p.size(); ++i) CHECK(p[i] - p[i + 1] >= 0.05);
    CHECK(p.front() <= p.back() + 2 * kPi - 0.05);
  }
  R::ChamberSpec weyl{R::Chamber::WeylC, 2};
  const auto g3 = R::chamber_grid(weyl, 20, 0.05, -2.0, 2.0, 1);
  for (const auto& p : g3) {
    CHECK(weyl.contains(p));
  }
}

TEST_CASE("COE exponent minimizers match brute force") {
  for (int n = 2; n <= 5; ++n) {
    const double x = n % 2 == 0 ? 0.5 : 0.0;
    // brute force over increasing integer tuples in [-6, 6]
    double best_sq = 1e18, best_abs = 1e18;
    std::vector<int> k(static_cast<size_t>(n));
    std::function<void(int, int)> rec = [&](int idx, int lo) {
      if (idx == n) {
        double ssq = 0, sab = 0;
        for (int v : k) {
          ssq += 0.5 * (x + v) * (x + v);
          sab += std::abs(x + v);
        }
        best_sq = std::min(best_sq, ssq);
        best_abs = std::min(best_abs, sab);
        return;
      }
      for (int v = lo; v <= 6; ++v) {
        k[static_cast<size_t>(idx)] = v;
        rec(idx + 1, v + 1);
      }
    };
    rec(0, -6);
    CHECK(best_sq == doctest::Approx(R::min_half_sum_squares(n)).epsilon(1e-14));
    CHECK(best_abs == doctest::Approx(R::min_sum_abs(n)).epsilon(1e-14));
  }
  CHECK(R::min_sum_abs(2) == doctest::Approx(1.0));          // (4 - 0) / 4
  CHECK(R::min_half_sum_squares(3) == doctest::Approx(1.0));  // 3*2*4/24
}

TEST_CASE("spread convergence: goe n=2 quick check") {
  const double spreads[] = {0.2, 0.1, 0.05};
  const auto rep = R::spread_convergence_report(R::LimitFamily::Goe, 2, 1.0, spreads, 10, 3);
  INFO("errors: ", rep.sup_rel_errors[0], " ", rep.sup_rel_errors[1], " ",
       rep.sup_rel_errors[2]);
  CHECK(rep.monotone);
  CHECK(rep.final_error < 5e-2);
  CHECK(rep.pass);
}

TEST_CASE("coe limit check: circle mode at moderate t") {
  const auto rep = R::coe_limit_check(R::CoeMode::CircleLargeT, 2, 30.0, 10, 4, 1e-6);
  INFO("sup rel err = ", rep.final_error);
  CHECK(rep.pass);
}
