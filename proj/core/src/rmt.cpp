#include "lew/rmt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "lew/identities.hpp"
#include "lew/kernels.hpp"
#include "lew/rng.hpp"

namespace lew::rmt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double gaussian(double t, double s) {
  return std::exp(-s * s / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
}

// ---- Gauss-Legendre rules (Newton on P_n), cached by order -----------------

struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.x.resize(static_cast<size_t>(n));
  rule.w.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.x[static_cast<size_t>(i)] = x;
    rule.w[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

// ---- nested chamber integration --------------------------------------------

enum class AxisKind { Finite, HalfLine, FullLine };

// One integration axis; finite bounds may depend on the outer coordinates.
struct Axis {
  AxisKind kind = AxisKind::Finite;
  std::function<double(std::span<const double>)> lo;  // Finite / HalfLine base
  std::function<double(std::span<const double>)> hi;  // Finite only
};

// Infinite axes use double-exponential maps under a uniform trapezoid rule;
// finite axes use Gauss-Legendre.
double integrate_nested(const std::vector<Axis>& axes, int level,
                        std::vector<double>& point, const GaussRule& rule, double scale,
                        double tail_box,
                        const std::function<double(std::span<const double>)>& f) {
  const int d = static_cast<int>(axes.size());
  if (level == d) return f(point);
  const Axis& ax = axes[static_cast<size_t>(level)];
  std::span<const double> outer(point.data(), static_cast<size_t>(level));
  double total = 0;
  const int n = static_cast<int>(rule.x.size());
  if (ax.kind == AxisKind::Finite) {
    const double a = ax.lo(outer), b = ax.hi(outer);
    for (int i = 0; i < n; ++i) {
      point[static_cast<size_t>(level)] = 0.5 * (a + b) + 0.5 * (b - a) * rule.x[static_cast<size_t>(i)];
      const double inner = integrate_nested(axes, level + 1, point, rule, scale, tail_box, f);
      total += rule.w[static_cast<size_t>(i)] * 0.5 * (b - a) * inner;
    }
    return total;
  }
  if (tail_box > 0) {
    // exponential tails: sinh-compressed box keeps the nodes where the mass
    // is while the dropped tail beyond tail_box stays negligible
    const double wmax = std::asinh(tail_box / scale);
    const double wlo = ax.kind == AxisKind::HalfLine ? 0.0 : -wmax;
    const double base = ax.kind == AxisKind::HalfLine ? ax.lo(outer) : 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = 0.5 * (wlo + wmax) + 0.5 * (wmax - wlo) * rule.x[static_cast<size_t>(i)];
      point[static_cast<size_t>(level)] = base + scale * std::sinh(w);
      const double inner = integrate_nested(axes, level + 1, point, rule, scale, tail_box, f);
      total += rule.w[static_cast<size_t>(i)] * 0.5 * (wmax - wlo) * scale * std::cosh(w) * inner;
    }
    return total;
  }
  const double tmax = 3.7;
  const double h = 2.0 * tmax / (n - 1);
  const double half_pi = 0.5 * kPi;
  for (int i = 0; i < n; ++i) {
    const double t = -tmax + h * i;
    const double sh = half_pi * std::sinh(t);
    double y, jac;
    if (ax.kind == AxisKind::HalfLine) {
      // exp-sinh map for (a, infinity)
      const double e = std::exp(sh);
      y = ax.lo(outer) + scale * e;
      jac = scale * e * half_pi * std::cosh(t);
    } else {
      // sinh-sinh map for the full line
      y = scale * std::sinh(sh);
      jac = scale * std::cosh(sh) * half_pi * std::cosh(t);
    }
    const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
    point[static_cast<size_t>(level)] = y;
    const double inner = integrate_nested(axes, level + 1, point, rule, scale, tail_box, f);
    if (inner != 0.0) total += w * jac * inner;
  }
  return total;
}

std::vector<Axis> chamber_axes(const ChamberSpec& spec) {
  // integration order: coordinate n first (index 0 of `point`), then gaps or
  // nested bounds toward coordinate 1; the integrand adapter re-orders.
  std::vector<Axis> axes;
  const int n = spec.n;
  switch (spec.kind) {
    case Chamber::WeylC:
      axes.push_back(Axis{AxisKind::FullLine, {}, {}});
      for (int i = 1; i < n; ++i) {
        axes.push_back(Axis{AxisKind::HalfLine, [](auto) { return 0.0; }, {}});
      }
      break;
    case Chamber::PositiveD:
      axes.push_back(Axis{AxisKind::HalfLine, [](auto) { return 0.0; }, {}});
      for (int i = 1; i < n; ++i) {
        axes.push_back(Axis{AxisKind::HalfLine, [](auto) { return 0.0; }, {}});
      }
      break;
    case Chamber::DiskN:
      axes.push_back(Axis{AxisKind::Finite, [](auto) { return -1.0; },
                          [](auto) { return 1.0; }});
      for (int i = 1; i < n; ++i) {
        axes.push_back(Axis{AxisKind::Finite,
                            [i](std::span<const double> outer) { return outer[outer.size() - 1]; },
                            [](auto) { return 1.0; }});
      }
      break;
    case Chamber::Theta:
      axes.push_back(Axis{AxisKind::Finite, [](auto) { return 0.0; },
                          [](auto) { return kPi; }});
      for (int i = 1; i < n; ++i) {
        axes.push_back(Axis{AxisKind::Finite,
                            [](std::span<const double> outer) { return outer[outer.size() - 1]; },
                            [](auto) { return kPi; }});
      }
      break;
    case Chamber::AffineC:
      axes.push_back(Axis{AxisKind::Finite, [](auto) { return -kPi; },
                          [](auto) { return kPi; }});
      for (int i = 1; i < n; ++i) {
        axes.push_back(Axis{AxisKind::Finite,
                            [](std::span<const double> outer) { return outer[outer.size() - 1]; },
                            [](std::span<const double> outer) { return outer[0] + 2.0 * kPi; }});
      }
      break;
  }
  return axes;
}

// Maps integration coordinates (base + increasing nesting) to a chamber point
// (descending for all chambers except Theta, which is ascending).
void to_chamber_point(const ChamberSpec& spec, std::span<const double> q,
                      std::vector<double>& y) {
  const int n = spec.n;
  y.resize(static_cast<size_t>(n));
  switch (spec.kind) {
    case Chamber::WeylC:
    case Chamber::PositiveD: {
      // q[0] = y_n, q[i] = gap between y_{n-i} and y_{n-i+1}
      double acc = q[0];
      y[static_cast<size_t>(n - 1)] = acc;
      for (int i = 1; i < n; ++i) {
        acc += q[static_cast<size_t>(i)];
        y[static_cast<size_t>(n - 1 - i)] = acc;
      }
      break;
    }
    case Chamber::DiskN:
    case Chamber::AffineC:
      // q ascending from the base = y_n ... y_1
      for (int i = 0; i < n; ++i) y[static_cast<size_t>(n - 1 - i)] = q[static_cast<size_t>(i)];
      break;
    case Chamber::Theta:
      // q ascending = theta_1 ... theta_n directly
      for (int i = 0; i < n; ++i) y[static_cast<size_t>(i)] = q[static_cast<size_t>(i)];
      break;
  }
}

}  // namespace

bool ChamberSpec::contains(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != n) return false;
  auto desc = [&] {
    for (size_t i = 0; i + 1 < y.size(); ++i) {
      if (!(y[i] > y[i + 1])) return false;
    }
    return true;
  };
  switch (kind) {
    case Chamber::WeylC:
      return desc();
    case Chamber::PositiveD:
      return desc() && y.back() > 0;
    case Chamber::DiskN:
      return desc() && y.front() < 1 && y.back() > -1;
    case Chamber::Theta:
      for (size_t i = 0; i + 1 < y.size(); ++i) {
        if (!(y[i] < y[i + 1])) return false;
      }
      return y.front() > 0 && y.back() < kPi;
    case Chamber::AffineC:
      return desc() && y.back() >= -kPi && y.back() < kPi && y.front() < y.back() + 2 * kPi;
  }
  return false;
}

// ---- densities --------------------------------------------------------------

double km_gaussian_density(double t, std::span<const double> x, std::span<const double> y) {
  const int n = static_cast<int>(x.size());
  if (y.size() != x.size()) throw DomainError("need |x| == |y|");
  if (!(t > 0)) throw DomainError("t > 0 required");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = gaussian(t, y[static_cast<size_t>(j)] - x[static_cast<size_t>(i)]);
    }
  }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

double goe_limit_density(double t, std::span<const double> y) {
  if (!(t > 0)) throw DomainError("t > 0 required");
  double s2 = 0, vdm = 1;
  for (size_t i = 0; i < y.size(); ++i) {
    s2 += y[i] * y[i];
    for (size_t j = i + 1; j < y.size(); ++j) vdm *= y[i] - y[j];  // chamber-oriented
  }
  return std::exp(-s2 / (2.0 * t)) * vdm;
}

namespace {

template <typename Entry>
double det_of(int n, Entry entry) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = entry(i, j);
  }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

}  // namespace

double quadrant_det_density(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("need |x| == |y|");
  return det_of(static_cast<int>(x.size()), [&](int i, int j) {
    return kernels::quadrant(x[static_cast<size_t>(i)], y[static_cast<size_t>(j)]);
  });
}

double quadrant_closed_form(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  double v = 1.0;
  for (size_t i = 0; i < n; ++i) v *= (2.0 / kPi) * x[i];
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) v /= x[i] * x[i] + y[j] * y[j];
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      v *= (x[i] * x[i] - x[j] * x[j]) * (y[i] * y[i] - y[j] * y[j]);
    }
  }
  return v;
}

double quadrant_limit_density(double t, std::span<const double> y) {
  if (!(t > 0)) throw DomainError("t > 0 required");
  double v = 1.0;
  for (size_t j = 0; j < y.size(); ++j) {
    v *= std::pow(t * t + y[j] * y[j], -static_cast<double>(y.size()));
  }
  for (size_t i = 0; i < y.size(); ++i) {
    for (size_t j = i + 1; j < y.size(); ++j) v *= y[i] * y[i] - y[j] * y[j];
  }
  return v;
}

double strip_det_density(double t, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("need |x| == |y|");
  return det_of(static_cast<int>(x.size()), [&](int i, int j) {
    return kernels::strip(t, x[static_cast<size_t>(i)], y[static_cast<size_t>(j)]);
  });
}

double strip_closed_form(double t, std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  const double a = kPi / (2.0 * t);
  double v = std::pow(2.0 * t, -static_cast<double>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) v /= std::cosh(a * (y[j] - x[i]));
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      v *= std::sinh(a * (x[i] - x[j])) * std::sinh(a * (y[i] - y[j]));
    }
  }
  return v;
}

double strip_limit_density(double t, std::span<const double> y) {
  const double a = kPi / (2.0 * t);
  double v = 1.0;
  for (size_t j = 0; j < y.size(); ++j) v *= 1.0 / std::cosh(a * y[j]);
  for (size_t i = 0; i < y.size(); ++i) {
    for (size_t j = i + 1; j < y.size(); ++j) {
      v *= std::tanh(a * y[i]) - std::tanh(a * y[j]);
    }
  }
  return v;
}

double halfdisk_det_density(std::span<const double> x, std::span<const double> theta) {
  if (x.size() != theta.size()) throw DomainError("need |x| == |theta|");
  return det_of(static_cast<int>(x.size()), [&](int i, int j) {
    return kernels::halfdisk(x[static_cast<size_t>(i)], theta[static_cast<size_t>(j)]);
  });
}

double halfdisk_closed_form(std::span<const double> x, std::span<const double> theta) {
  const size_t n = x.size();
  double hp = std::pow(kPi, -static_cast<double>(n));
  for (size_t i = 0; i < n; ++i) hp *= 1.0 - x[i] * x[i];
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) hp *= (x[i] - x[j]) * (1.0 - x[i] * x[j]);
  }
  double v = hp;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      v /= 1.0 - 2.0 * x[i] * std::cos(theta[j]) + x[i] * x[i];
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      v *= 2.0 * (std::cos(theta[i]) - std::cos(theta[j]));
    }
  }
  return v;
}

double halfdisk_limit_density(std::span<const double> theta) {
  double v = 1.0;
  for (size_t i = 0; i < theta.size(); ++i) {
    for (size_t j = i + 1; j < theta.size(); ++j) {
      v *= 2.0 * (std::cos(theta[i]) - std::cos(theta[j]));
    }
  }
  return v;
}

double excursion_det_density(std::span<const double> x, std::span<const double> theta) {
  if (x.size() != theta.size()) throw DomainError("need |x| == |theta|");
  return det_of(static_cast<int>(x.size()), [&](int i, int j) {
    return kernels::excursion_halfdisk(x[static_cast<size_t>(i)], theta[static_cast<size_t>(j)]);
  });
}

double excursion_factored_form(std::span<const double> x, std::span<const double> theta) {
  const int n = static_cast<int>(x.size());
  double g = std::pow(2.0 / kPi, n);
  for (int i = 0; i < n; ++i) g *= 1.0 - x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      g *= (x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]) *
           (1.0 - x[static_cast<size_t>(i)] * x[static_cast<size_t>(j)]);
    }
  }
  Eigen::MatrixXd b(n, n);
  double pref = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = 1.0 -
                       2.0 * x[static_cast<size_t>(i)] * std::cos(theta[static_cast<size_t>(j)]) +
                       x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
      b(i, j) = 1.0 / d;
      pref /= d;
    }
  }
  const double p = pref * ident::permanent(b);
  double v = g * p;
  for (int j = 0; j < n; ++j) v *= std::sin(theta[static_cast<size_t>(j)]);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      v *= 2.0 * (std::cos(theta[static_cast<size_t>(i)]) - std::cos(theta[static_cast<size_t>(j)]));
    }
  }
  return v;
}

double excursion_limit_density(std::span<const double> theta) {
  double v = 1.0;
  for (size_t j = 0; j < theta.size(); ++j) v *= std::sin(theta[j]);
  for (size_t i = 0; i < theta.size(); ++i) {
    for (size_t j = i + 1; j < theta.size(); ++j) {
      v *= std::cos(theta[i]) - std::cos(theta[j]);
    }
  }
  return v;
}

double circle_transition_density(double t, std::span<const double> theta,
                                 std::span<const double> nu) {
  const int n = static_cast<int>(theta.size());
  if (nu.size() != theta.size()) throw DomainError("need |theta| == |nu|");
  const double twist = n % 2 == 1 ? 0.0 : 0.5;
  return det_of(n, [&](int i, int j) {
    return kernels::circle_heat_sum_dual(t, twist, theta[static_cast<size_t>(i)],
                                         nu[static_cast<size_t>(j)])
        .value;
  });
}

std::complex<double> circle_qstar(double t, std::span<const double> theta,
                                  std::span<const double> nu) {
  const int n = static_cast<int>(theta.size());
  std::complex<double> total = 0;
  for (int u = 0; u < n; ++u) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m(i, j) = kernels::circle_heat_sum_phase(t, static_cast<double>(u) / n,
                                                 theta[static_cast<size_t>(i)],
                                                 nu[static_cast<size_t>(j)]);
      }
    }
    total += Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
  }
  return total / static_cast<double>(n);
}

std::vector<double> cyclic_shift_in_chamber(std::span<const double> nu, int ell) {
  const int n = static_cast<int>(nu.size());
  std::vector<double> w(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    int src = (j - ell) % n;
    if (src <= 0) src += n;
    w[static_cast<size_t>(j - 1)] = nu[static_cast<size_t>(src - 1)] + (j <= ell ? 2.0 * kPi : 0.0);
  }
  const double base = w[static_cast<size_t>(n - 1)];
  const double shift = 2.0 * kPi * std::floor((base + kPi) / (2.0 * kPi));
  for (double& v : w) v -= shift;
  return w;
}

double annulus_det_density(double r, std::span<const double> theta,
                           std::span<const double> nu) {
  const int n = static_cast<int>(theta.size());
  if (nu.size() != theta.size()) throw DomainError("need |theta| == |nu|");
  const double twist = n % 2 == 1 ? 0.0 : 0.5;
  return det_of(n, [&](int i, int j) {
    return kernels::annulus_sum_dual(r, twist, theta[static_cast<size_t>(i)],
                                     nu[static_cast<size_t>(j)])
        .value;
  });
}

double coe_density(std::span<const double> nu) {
  double v = 1.0;
  for (size_t i = 0; i < nu.size(); ++i) {
    for (size_t j = i + 1; j < nu.size(); ++j) {
      v *= 2.0 * std::abs(std::sin((nu[i] - nu[j]) / 2.0));
    }
  }
  return v;
}

double min_half_sum_squares(int n) {
  return n * (n - 1.0) * (n + 1.0) / 24.0;
}

double min_sum_abs(int n) {
  return (n * n - (n % 2)) / 4.0;
}

// ---- normalisation ----------------------------------------------------------

double normalize(const std::function<double(std::span<const double>)>& density,
                 const ChamberSpec& chamber, const QuadratureOptions& opts) {
  const auto axes = chamber_axes(chamber);
  std::vector<double> ybuf;
  auto f = [&](std::span<const double> q) {
    to_chamber_point(chamber, q, ybuf);
    return density(ybuf);
  };
  double prev = 0;
  bool have_prev = false;
  for (int nodes = opts.min_nodes; nodes <= opts.max_nodes; nodes *= 2) {
    std::vector<double> point(axes.size());
    const double val = integrate_nested(axes, 0, point, gauss_rule(nodes), opts.map_scale,
                                        opts.tail_box, f);
    if (!std::isfinite(val)) throw NonIntegrable("chamber integral diverged");
    if (have_prev && std::abs(val - prev) <= opts.rel_tol * std::abs(val)) return val;
    prev = val;
    have_prev = true;
  }
  throw NonIntegrable("chamber quadrature did not converge");
}

McIntegral mc_normalize(const std::function<double(std::span<const double>)>& density,
                        const ChamberSpec& chamber, uint64_t samples, uint64_t seed) {
  const int n = chamber.n;
  double volume = 0;
  double lo = 0, hi = 0;
  switch (chamber.kind) {
    case Chamber::DiskN:
      lo = -1;
      hi = 1;
      break;
    case Chamber::Theta:
      lo = 0;
      hi = kPi;
      break;
    case Chamber::AffineC:
      break;
    default:
      throw NonIntegrable("mc_normalize requires a bounded chamber");
  }
  double fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  if (chamber.kind == Chamber::AffineC) {
    double fm1 = 1;
    for (int i = 2; i <= n - 1; ++i) fm1 *= i;
    volume = 2.0 * kPi * std::pow(2.0 * kPi, n - 1) / fm1;
  } else {
    volume = std::pow(hi - lo, n) / fact;
  }
  double sum = 0, sum2 = 0;
  std::vector<double> y(static_cast<size_t>(n));
  for (uint64_t s = 0; s < samples; ++s) {
    RngStream rng(seed, s, 3001);
    if (chamber.kind == Chamber::AffineC) {
      const double base = -kPi + 2.0 * kPi * rng.uniform();
      std::vector<double> gaps(static_cast<size_t>(n - 1));
      for (double& g : gaps) g = 2.0 * kPi * rng.uniform();
      std::sort(gaps.begin(), gaps.end(), std::greater<>());
      y[static_cast<size_t>(n - 1)] = base;
      for (int i = 0; i < n - 1; ++i) y[static_cast<size_t>(i)] = base + gaps[static_cast<size_t>(i)];
    } else {
      for (double& v : y) v = lo + (hi - lo) * rng.uniform();
      std::sort(y.begin(), y.end(), std::greater<>());
      if (chamber.kind == Chamber::Theta) std::reverse(y.begin(), y.end());
    }
    const double v = density(y);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(0.0, sum2 / static_cast<double>(samples) - mean * mean);
  McIntegral out;
  out.value = volume * mean;
  out.std_err = volume * std::sqrt(var / static_cast<double>(samples));
  return out;
}

std::vector<std::vector<double>> chamber_grid(const ChamberSpec& chamber, int count,
                                              double wall_distance, double lo, double hi,
                                              uint64_t seed) {
  const int n = chamber.n;
  const int bases[6] = {2, 3, 5, 7, 11, 13};
  if (n > 6) throw DomainError("chamber_grid supports n <= 6");
  auto halton = [&](int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
      f /= base;
      r += f * (index % base);
      index /= base;
    }
    return r;
  };
  double blo = lo, bhi = hi;
  switch (chamber.kind) {
    case Chamber::DiskN:
      blo = -1 + wall_distance;
      bhi = 1 - wall_distance;
      break;
    case Chamber::Theta:
      blo = wall_distance;
      bhi = kPi - wall_distance;
      break;
    case Chamber::AffineC:
      blo = -kPi;
      bhi = kPi;
      break;
    default:
      break;
  }
  std::vector<std::vector<double>> grid;
  int index = static_cast<int>(seed % 1000) + 1;
  std::vector<double> y(static_cast<size_t>(n));
  while (static_cast<int>(grid.size()) < count) {
    ++index;
    if (chamber.kind == Chamber::AffineC) {
      // base angle plus descending gaps inside one period
      const double base = blo + (bhi - blo) * halton(index, bases[0]);
      std::vector<double> gaps(static_cast<size_t>(n - 1));
      for (int i = 0; i < n - 1; ++i) {
        gaps[static_cast<size_t>(i)] = 2.0 * kPi * halton(index, bases[i + 1]);
      }
      std::sort(gaps.begin(), gaps.end(), std::greater<>());
      y[static_cast<size_t>(n - 1)] = base;
      for (int i = 0; i < n - 1; ++i) y[static_cast<size_t>(i)] = base + gaps[static_cast<size_t>(i)];
      bool ok = y[0] < base + 2.0 * kPi - wall_distance;
      for (int i = 0; i + 1 < n; ++i) {
        if (y[static_cast<size_t>(i)] - y[static_cast<size_t>(i + 1)] < wall_distance) ok = false;
      }
      if (!ok) continue;
    } else {
      for (int i = 0; i < n; ++i) {
        y[static_cast<size_t>(i)] = blo + (bhi - blo) * halton(index, bases[i]);
      }
      std::sort(y.begin(), y.end(), std::greater<>());
      if (chamber.kind == Chamber::Theta) std::reverse(y.begin(), y.end());
      bool ok = true;
      for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(y[static_cast<size_t>(i)] - y[static_cast<size_t>(i + 1)]) < wall_distance) {
          ok = false;
        }
      }
      if (chamber.kind == Chamber::PositiveD && y[static_cast<size_t>(n - 1)] < wall_distance) {
        ok = false;
      }
      if (!ok) continue;
    }
    grid.push_back(y);
  }
  return grid;
}

// ---- reports ----------------------------------------------------------------

namespace {

std::vector<double> symmetric_spread(int n, double eps, double center) {
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    x[static_cast<size_t>(i - 1)] = center + eps * (n + 1 - 2.0 * i) / 2.0;
  }
  return x;
}

}  // namespace

DensityReport spread_convergence_report(LimitFamily family, int n, double t,
                                        std::span<const double> spreads, int grid_size,
                                        uint64_t seed, double tol_final) {
  DensityReport rep;
  rep.n = n;
  rep.spreads.assign(spreads.begin(), spreads.end());

  ChamberSpec chamber;
  std::function<double(std::span<const double>, std::span<const double>)> det_density;
  std::function<double(std::span<const double>)> limit_density;
  double glo = 0, ghi = 0;
  QuadratureOptions qopts;
  switch (family) {
    case LimitFamily::Goe:
      rep.name = "goe";
      chamber = {Chamber::WeylC, n};
      det_density = [t](auto x, auto y) { return km_gaussian_density(t, x, y); };
      limit_density = [t](auto y) { return goe_limit_density(t, y); };
      glo = -2.2 * std::sqrt(t);
      ghi = 2.2 * std::sqrt(t);
      qopts.map_scale = std::sqrt(t);
      qopts.tail_box = 10.0 * std::sqrt(t);  // Gaussian tail < e^-50
      break;
    case LimitFamily::Quadrant:
      rep.name = "quadrant";
      chamber = {Chamber::PositiveD, n};
      det_density = [](auto x, auto y) { return quadrant_det_density(x, y); };
      limit_density = [t](auto y) { return quadrant_limit_density(t, y); };
      glo = 0.1 * t;
      ghi = 3.0 * t;
      qopts.map_scale = t;
      break;
    case LimitFamily::Strip:
      rep.name = "strip";
      chamber = {Chamber::WeylC, n};
      det_density = [t](auto x, auto y) { return strip_det_density(t, x, y); };
      limit_density = [t](auto y) { return strip_limit_density(t, y); };
      glo = -2.0 * t;
      ghi = 2.0 * t;
      qopts.map_scale = t;
      qopts.tail_box = 16.0 * t;  // sech tail < e^-25
      break;
    case LimitFamily::HalfDisk:
      rep.name = "halfdisk";
      chamber = {Chamber::Theta, n};
      det_density = [](auto x, auto y) { return halfdisk_det_density(x, y); };
      limit_density = [](auto y) { return halfdisk_limit_density(y); };
      break;
    case LimitFamily::Excursion:
      rep.name = "excursion";
      chamber = {Chamber::Theta, n};
      det_density = [](auto x, auto y) { return excursion_det_density(x, y); };
      limit_density = [](auto y) { return excursion_limit_density(y); };
      break;
  }
  rep.grid = chamber_grid(chamber, grid_size, 0.05, glo, ghi, seed);

  const double limit_center = family == LimitFamily::Quadrant ? t : 0.0;
  const double m_limit = normalize(limit_density, chamber, qopts);
  rep.normalization = m_limit;

  for (double eps : spreads) {
    const auto x = symmetric_spread(n, eps, limit_center);
    auto f = [&](std::span<const double> y) { return det_density(x, y); };
    const double m_eps = normalize(f, chamber, qopts);
    double sup = 0;
    for (const auto& y : rep.grid) {
      const double a = f(y) / m_eps;
      const double b = limit_density(y) / m_limit;
      sup = std::max(sup, std::abs(a - b) / std::abs(b));
    }
    rep.sup_rel_errors.push_back(sup);
  }
  rep.monotone = true;
  for (size_t i = 0; i + 1 < rep.sup_rel_errors.size(); ++i) {
    if (!(rep.sup_rel_errors[i + 1] < rep.sup_rel_errors[i])) rep.monotone = false;
  }
  rep.final_error = rep.sup_rel_errors.empty() ? 0 : rep.sup_rel_errors.back();
  rep.pass = rep.monotone && rep.final_error < tol_final;
  return rep;
}

DensityReport coe_limit_check(CoeMode mode, int n, double param, int grid_size,
                              uint64_t seed, double tol) {
  if (n < 2) throw DomainError("coe_limit_check needs n >= 2");
  DensityReport rep;
  rep.n = n;
  rep.name = mode == CoeMode::CircleLargeT ? "coe-circle" : "coe-annulus";
  ChamberSpec chamber{Chamber::AffineC, n};
  rep.grid = chamber_grid(chamber, grid_size, 0.05, -kPi, kPi, seed);

  // equally spaced start angles, listed in the chamber
  std::vector<double> theta(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    theta[static_cast<size_t>(j - 1)] = kPi * (n + 1 - 2.0 * j) / n;
  }

  std::function<double(std::span<const double>)> f;
  if (mode == CoeMode::CircleLargeT) {
    f = [&, param](std::span<const double> nu) {
      return circle_transition_density(param, theta, nu);
    };
  } else {
    f = [&, param](std::span<const double> nu) {
      return annulus_det_density(param, theta, nu);
    };
  }
  auto g = [](std::span<const double> nu) { return coe_density(nu); };

  QuadratureOptions qopts;
  const double mf = normalize(f, chamber, qopts);
  const double mg = normalize(g, chamber, qopts);
  rep.normalization = mg;

  double sup = 0;
  for (const auto& nu : rep.grid) {
    const double a = f(nu) / mf;
    const double b = g(nu) / mg;
    sup = std::max(sup, std::abs(a - b) / std::abs(b));
  }
  rep.sup_rel_errors.push_back(sup);
  rep.final_error = sup;
  rep.monotone = true;
  rep.pass = sup < tol;
  return rep;
}

}  // namespace lew::rmt
