#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lew/errors.hpp"

namespace lew::rmt {

enum class Chamber {
  WeylC,      // y_n < ... < y_1 in R^n
  PositiveD,  // 0 < y_n < ... < y_1
  DiskN,      // -1 < y_n < ... < y_1 < 1
  Theta,      // 0 < t_1 < ... < t_n < pi
  AffineC,    // nu_n < ... < nu_1 < nu_n + 2 pi, -pi <= nu_n < pi
};

struct ChamberSpec {
  Chamber kind = Chamber::WeylC;
  int n = 1;
  bool contains(std::span<const double> y) const;
};

// --- determinant densities and their limits ---------------------------------

double km_gaussian_density(double t, std::span<const double> x,
                           std::span<const double> y);
// exp(-sum y^2 / 2t) * prod_{i<j} (y_i - y_j); oriented positive on WeylC.
double goe_limit_density(double t, std::span<const double> y);

double quadrant_det_density(std::span<const double> x, std::span<const double> y);
double quadrant_closed_form(std::span<const double> x, std::span<const double> y);
double quadrant_limit_density(double t, std::span<const double> y);

double strip_det_density(double t, std::span<const double> x,
                         std::span<const double> y);
double strip_closed_form(double t, std::span<const double> x,
                         std::span<const double> y);
double strip_limit_density(double t, std::span<const double> y);

double halfdisk_det_density(std::span<const double> x, std::span<const double> theta);
double halfdisk_closed_form(std::span<const double> x, std::span<const double> theta);
double halfdisk_limit_density(std::span<const double> theta);

double excursion_det_density(std::span<const double> x, std::span<const double> theta);
// G(x) P(x,theta) prod sin(theta_j) prod 2(cos(theta_i) - cos(theta_j)).
double excursion_factored_form(std::span<const double> x, std::span<const double> theta);
double excursion_limit_density(std::span<const double> theta);

// Single determinant transition density of indistinguishable non-crossing
// circular particles; twist 0 for odd n, 1/2 for even n.
double circle_transition_density(double t, std::span<const double> theta,
                                 std::span<const double> nu);
// Labelled density q*_t as the average of the n eta^u-twisted determinants.
std::complex<double> circle_qstar(double t, std::span<const double> theta,
                                  std::span<const double> nu);
// Representative in the affine chamber of the cyclic shift [ell] of nu.
std::vector<double> cyclic_shift_in_chamber(std::span<const double> nu, int ell);

double annulus_det_density(double r, std::span<const double> theta,
                           std::span<const double> nu);
double coe_density(std::span<const double> nu);

// Minimisers of the COE limit exponents over increasing integer offsets.
double min_half_sum_squares(int n);  // n(n-1)(n+1)/24
double min_sum_abs(int n);           // (n^2 - [n odd]) / 4

// --- normalisation -----------------------------------------------------------

enum class IntegrationMethod { TensorQuadrature, McIntegration };

struct QuadratureOptions {
  double rel_tol = 1e-8;
  int min_nodes = 16;
  int max_nodes = 256;
  double map_scale = 1.0;  // scale of the maps on unbounded axes
  // For integrands with exponential tails, truncate unbounded axes to this
  // half-width (the dropped tail must be certified negligible by the caller);
  // 0 keeps the double-exponential maps for algebraic tails.
  double tail_box = 0.0;
};

double normalize(const std::function<double(std::span<const double>)>& density,
                 const ChamberSpec& chamber, const QuadratureOptions& opts = {});

struct McIntegral {
  double value = 0;
  double std_err = 0;
};
// Uniform Monte Carlo over a bounded chamber (DiskN, Theta, AffineC).
McIntegral mc_normalize(const std::function<double(std::span<const double>)>& density,
                        const ChamberSpec& chamber, uint64_t samples, uint64_t seed);

// Quasi-random interior grid with a minimum distance to the chamber walls.
// Unbounded chambers are sampled inside [lo, hi]^n before ordering.
std::vector<std::vector<double>> chamber_grid(const ChamberSpec& chamber, int count,
                                              double wall_distance, double lo, double hi,
                                              uint64_t seed);

// --- reports -----------------------------------------------------------------

struct DensityReport {
  std::string name;
  int n = 0;
  std::vector<std::vector<double>> grid;
  std::vector<double> spreads;
  std::vector<double> sup_rel_errors;  // one per spread (or a single entry)
  double normalization = 0;            // constant M of the final/limit density
  bool monotone = true;
  double final_error = 0;
  bool pass = false;
};

enum class LimitFamily { Goe, Quadrant, Strip, HalfDisk, Excursion };

// Normalised determinant density at shrinking start spreads against the
// normalised limit density, sup relative error per spread on a fixed grid.
DensityReport spread_convergence_report(LimitFamily family, int n, double t,
                                        std::span<const double> spreads,
                                        int grid_size, uint64_t seed,
                                        double tol_final = 5e-2);

enum class CoeMode { CircleLargeT, AnnulusSmallR };

DensityReport coe_limit_check(CoeMode mode, int n, double param, int grid_size,
                              uint64_t seed, double tol);

}  // namespace lew::rmt
