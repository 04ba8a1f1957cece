#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "lew/errors.hpp"
#include "lew/rng.hpp"

namespace lew::ident {

struct IdentityCase {
  std::string name;
  std::complex<double> lhs = 0;
  std::complex<double> rhs = 0;
  double rel_err = 0;
  double tol = 0;
  bool pass = false;
  bool skipped = false;  // degenerate inputs
};

IdentityCase make_case(std::string name, std::complex<double> lhs,
                       std::complex<double> rhs, double tol);

// Ryser evaluation; throws TooLarge for n > 10.
double permanent(const Eigen::MatrixXd& a);

// det(1/(1-2x_i cos(theta_j)+x_i^2)^2)
//   = det(1/(1-2x_i cos(theta_j)+x_i^2)) * per(same), tol 1e-10.
IdentityCase carlitz_factorization_check(std::span<const double> x,
                                         std::span<const double> theta);

enum class TestFunctions { Monomials, Exponentials };

// Ratio det(h_j(x + eps * delta_i)) / Vandermonde(eps * delta), delta_i = n - i,
// against prod(1/j!) * det(d^{i-1} h_j(x)); the error is O(eps).
std::vector<IdentityCase> confluent_vandermonde_check(TestFunctions fam,
                                                      std::span<const double> rates,
                                                      double x0,
                                                      std::span<const double> epsilons);

// Image sum vs Fourier dual of the annulus kernel sum (certified truncations).
IdentityCase poisson_summation_check(double r, double twist, double theta, double nu);

enum class CauchyDomain { Quadrant, Strip, HalfDisk };

// Numeric n x n determinant of the named kernel against its closed product
// form, tol 1e-12 relative.
IdentityCase cauchy_product_formula_check(CauchyDomain domain,
                                          std::span<const double> x,
                                          std::span<const double> y,
                                          double t = 1.0);

// One random chamber case for the named domain; ill-conditioned draws
// (1-norm condition estimate above 1e10) are regenerated.
IdentityCase draw_cauchy_case(CauchyDomain domain, RngStream& rng, int n);

// Deterministic suite used by `lew verify identities`.
std::vector<IdentityCase> run_suite(const std::string& which, uint64_t seed);

}  // namespace lew::ident
