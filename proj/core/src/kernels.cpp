#include "lew/kernels.hpp"

#include <cmath>

namespace lew::kernels {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Kahan {
  double sum = 0, c = 0;
  void add(double term) {
    const double y = term - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

double gaussian(double t, double s) {
  return std::exp(-s * s / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
}

void require_twist(double twist) {
  if (twist != 0.0 && twist != 0.5) throw DomainError("twist must be 0 or 1/2");
}

}  // namespace

double quadrant(double x, double y) {
  if (!(x > 0) || !(y > 0)) throw DomainError("quadrant kernel needs x > 0, y > 0");
  return (2.0 / kPi) * x / (x * x + y * y);
}

double strip(double t, double x, double y) {
  if (!(t > 0)) throw DomainError("strip kernel needs t > 0");
  return 1.0 / (2.0 * t * std::cosh(kPi * (y - x) / (2.0 * t)));
}

double halfdisk(double x, double theta) {
  if (!(std::abs(x) < 1) || !(theta > 0) || !(theta < kPi)) {
    throw DomainError("halfdisk kernel needs |x| < 1 and 0 < theta < pi");
  }
  return (1.0 - x * x) / (kPi * (1.0 - 2.0 * x * std::cos(theta) + x * x));
}

double excursion_halfdisk(double x, double theta) {
  if (!(std::abs(x) < 1) || !(theta > 0) || !(theta < kPi)) {
    throw DomainError("excursion kernel needs |x| < 1 and 0 < theta < pi");
  }
  const double d = 1.0 - 2.0 * x * std::cos(theta) + x * x;
  return (2.0 / kPi) * (1.0 - x * x) * std::sin(theta) / (d * d);
}

SumEval circle_heat_sum(double t, double twist, double theta, double nu) {
  if (!(t > 0)) throw DomainError("circle heat sum needs t > 0");
  require_twist(twist);
  const double s = nu - theta;
  // images beyond k* decay at least like a Gaussian in 2 pi (k - k*)
  const int kstar = static_cast<int>(std::ceil(std::abs(s) / (2.0 * kPi))) + 1;
  const int kdecay = static_cast<int>(std::ceil(std::sqrt(2.0 * t * 36.9) / (2.0 * kPi)));
  const int K = kstar + std::max(2, kdecay);  // 36.9 ~ log(1e16)
  Kahan sum;
  for (int k = -K; k <= K; ++k) {
    const double phase = twist == 0.0 ? 1.0 : (k % 2 == 0 ? 1.0 : -1.0);
    sum.add(phase * gaussian(t, s + 2.0 * kPi * k));
  }
  const double tail_top = gaussian(t, 2.0 * kPi * (K + 1 - kstar));
  const double rho = std::exp(-(2.0 * kPi) * (2.0 * kPi) * (K + 1 - kstar) / t);
  const double tail = 2.0 * tail_top / std::max(1e-300, 1.0 - rho);
  return SumEval{sum.sum, K, tail};
}

SumEval circle_heat_sum_dual(double t, double twist, double theta, double nu) {
  if (!(t > 0)) throw DomainError("circle heat sum needs t > 0");
  require_twist(twist);
  const double s = nu - theta;
  const int K = static_cast<int>(std::ceil(std::sqrt(2.0 * 36.9 / t))) + 2;
  Kahan sum;
  for (int k = -K; k <= K; ++k) {
    const double v = twist + k;
    sum.add(std::exp(-t * v * v / 2.0) * std::cos(s * v));
  }
  const double vtop = twist + K + 1;
  const double rho = std::exp(-t * (2.0 * vtop + 1) / 2.0);
  const double tail = 2.0 * std::exp(-t * vtop * vtop / 2.0) / std::max(1e-300, 1.0 - rho);
  return SumEval{sum.sum / (2.0 * kPi), K, tail / (2.0 * kPi)};
}

std::complex<double> circle_heat_sum_phase(double t, double phase_x, double theta,
                                           double nu) {
  if (!(t > 0)) throw DomainError("circle heat sum needs t > 0");
  const double s = nu - theta;
  const int K = static_cast<int>(std::ceil(std::sqrt(2.0 * 36.9 / t))) + 2;
  std::complex<double> sum = 0;
  for (int k = -K; k <= K; ++k) {
    const double v = phase_x + k;
    sum += std::exp(-t * v * v / 2.0) *
           std::complex<double>{std::cos(s * v), -std::sin(s * v)};
  }
  return sum / (2.0 * kPi);
}

SumEval annulus_sum(double r, double twist, double theta, double nu) {
  if (!(r > 0) || !(r < 1)) throw DomainError("annulus sum needs 0 < r < 1");
  require_twist(twist);
  const double L = std::abs(std::log(r));
  const double s = nu - theta;
  const double a = kPi / (2.0 * L);  // sech(a (s + 2 pi k)) decays like e^{-2 pi a |k|}
  const int kstar = static_cast<int>(std::ceil(std::abs(s) / (2.0 * kPi))) + 1;
  const int kdecay = static_cast<int>(std::ceil(36.9 / (2.0 * kPi * a)));
  const int K = kstar + std::max(2, kdecay);
  Kahan sum;
  for (int k = -K; k <= K; ++k) {
    const double phase = twist == 0.0 ? 1.0 : (k % 2 == 0 ? 1.0 : -1.0);
    sum.add(phase / (2.0 * L * std::cosh(a * (s + 2.0 * kPi * k))));
  }
  const double rho = std::exp(-2.0 * kPi * a);
  const double top = 1.0 / (L * std::cosh(a * 2.0 * kPi * (K + 1 - kstar)));
  return SumEval{sum.sum, K, 2.0 * top / (1.0 - rho)};
}

SumEval annulus_sum_dual(double r, double twist, double theta, double nu) {
  if (!(r > 0) || !(r < 1)) throw DomainError("annulus sum needs 0 < r < 1");
  require_twist(twist);
  const double L = std::abs(std::log(r));
  const double s = nu - theta;
  const int K = static_cast<int>(std::ceil(36.9 / L)) + 2;
  Kahan sum;
  for (int k = -K; k <= K; ++k) {
    const double v = twist + k;
    sum.add(std::cos(s * v) / std::cosh(L * v));
  }
  const double vtop = twist + K + 1;
  const double tail = 2.0 * (2.0 * std::exp(-L * vtop)) / (1.0 - r);
  return SumEval{sum.sum / (2.0 * kPi), K, tail / (2.0 * kPi)};
}

std::complex<double> jacobi_theta(int k, std::complex<double> z, double q) {
  if (!(std::abs(q) < 1)) throw Nonconvergent("theta series needs |q| < 1");
  if (k < 2 || k > 4) throw DomainError("theta index must be 2, 3 or 4");
  const double aq = std::abs(q);
  if (aq == 0.0) return k == 2 ? 0.0 : 1.0;
  std::complex<double> sum = k == 2 ? 0.0 : 1.0;
  const double log_q = std::log(aq);
  const double g = std::abs(z.imag());
  // |term(n)| <= bound(n) = 2 |q|^{e(n)} e^{w(n) g}; e, w as in the series
  auto bound = [&](int n) {
    const double e = k == 2 ? (n - 0.5) * (n - 0.5) : static_cast<double>(n) * n;
    const double w = k == 2 ? 2.0 * n - 1.0 : 2.0 * n;
    return 2.0 * std::exp(e * log_q + w * g);
  };
  bool converged = false;
  for (int n = 1; n <= 1000000; ++n) {
    std::complex<double> term;
    if (k == 2) {
      const double e = (n - 0.5) * (n - 0.5);
      term = 2.0 * std::pow(q, e) * std::cos((2.0 * n - 1.0) * z);
    } else {
      const double sign = (k == 4 && n % 2 == 1) ? -1.0 : 1.0;
      term = 2.0 * sign * std::pow(q, static_cast<double>(n) * n) * std::cos(2.0 * n * z);
    }
    sum += term;
    const double ratio = bound(n + 2) / std::max(1e-300, bound(n + 1));
    if (ratio < 1.0) {
      const double tail = bound(n + 1) / (1.0 - ratio);
      if (tail <= kTolTheta * std::abs(sum) + 1e-300) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) throw Nonconvergent("theta series did not converge");
  return sum;
}

double annulus_theta_entry(double r, double twist, double theta, double nu) {
  if (!(r > 0) || !(r < 1)) throw DomainError("annulus entry needs 0 < r < 1");
  require_twist(twist);
  const std::complex<double> z{(nu - theta) / 2.0, 0.0};
  const int top = twist == 0.0 ? 3 : 2;
  const std::complex<double> v = jacobi_theta(top, 0.0, r) * jacobi_theta(4, 0.0, r) *
                                 jacobi_theta(top, z, r) / jacobi_theta(4, z, r);
  return v.real() / (2.0 * kPi);
}

double circle_theta_entry(double t, double twist, double theta, double nu) {
  if (!(t > 0)) throw DomainError("circle entry needs t > 0");
  require_twist(twist);
  const std::complex<double> z{-(nu - theta) / 2.0, 0.0};
  const double q = std::exp(-t / 2.0);
  const int idx = twist == 0.0 ? 3 : 2;
  return jacobi_theta(idx, z, q).real() / (2.0 * kPi);
}

}  // namespace lew::kernels
