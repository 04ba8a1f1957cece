#pragma once

#include <complex>

#include "lew/errors.hpp"

namespace lew::kernels {

inline constexpr double kTolTheta = 1e-13;

// Boundary hitting density of the positive quadrant with reflecting x-axis
// and absorbing y-axis: (2/pi) x / (x^2 + y^2), y > 0.
double quadrant(double x, double y);

// Horizontal strip of height t, reflecting bottom, absorbing top:
// (1/2t) sech(pi (y - x) / 2t).
double strip(double t, double x, double y);

// Upper half unit disk, reflecting diameter, absorbing arc:
// (1/pi) (1 - x^2) / (1 - 2 x cos(theta) + x^2).
double halfdisk(double x, double theta);

// Excursion kernel of the half disk (whole boundary absorbing):
// (2/pi) (1 - x^2) sin(theta) / (1 - 2 x cos(theta) + x^2)^2.
double excursion_halfdisk(double x, double theta);

struct SumEval {
  double value = 0;
  int terms = 0;         // truncation K; the sum ran over |k| <= K
  double tail_bound = 0; // certified bound on the dropped tail
};

// sum_k e^{2 pi i x k} p_t(theta, nu + 2 pi k) for twist x in {0, 1/2},
// evaluated as the Gaussian image sum.
SumEval circle_heat_sum(double t, double twist, double theta, double nu);
// The same value via Poisson summation:
// (1/2pi) sum_k e^{-i (nu-theta)(x+k)} e^{-t (x+k)^2 / 2}.
SumEval circle_heat_sum_dual(double t, double twist, double theta, double nu);

// General complex phase x in [0,1) (used by the eta^u routes).
std::complex<double> circle_heat_sum_phase(double t, double phase_x,
                                           double theta, double nu);

// sum_k e^{2 pi i x k} h(theta, nu + 2 pi k) with h the strip sech kernel at
// t = |log r|; image sum and Poisson dual
// (1/2pi) sum_k sech(|log r| (x+k)) e^{-i (nu-theta)(x+k)}.
SumEval annulus_sum(double r, double twist, double theta, double nu);
SumEval annulus_sum_dual(double r, double twist, double theta, double nu);

// Jacobi theta functions theta_k(z, q), k in {2, 3, 4}, by their series;
// complex argument, nome |q| < 1.
std::complex<double> jacobi_theta(int k, std::complex<double> z, double q);

// Closed theta form of the annulus entries, s = nu - theta:
//   twist 0:   (1/2pi) theta3(0,r) theta4(0,r) theta3(s/2,r) / theta4(s/2,r)
//   twist 1/2: (1/2pi) theta2(0,r) theta4(0,r) theta2(s/2,r) / theta4(s/2,r)
double annulus_theta_entry(double r, double twist, double theta, double nu);

// Closed theta form of the circle entries: theta3 for twist 0 and theta2 for
// twist 1/2, both at (-(nu-theta)/2, e^{-t/2}) over 2 pi.
double circle_theta_entry(double t, double twist, double theta, double nu);

}  // namespace lew::kernels
