#pragma once

// Quadrature on circles and on the disk with boundary weights (1-|z|^2)^alpha.
//
// Area measure is normalised, dA = dx dy / pi, so that the disk has mass 1.
// Radial integration runs in t = r^2, where dA = dt dtheta / (2 pi) and the
// boundary weight becomes (1-t)^alpha, which Gauss-Jacobi absorbs exactly.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "diskspec/core.hpp"

namespace diskspec {

template <class Real>
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Gauss rule on [-1, 1] for the weight (1-x)^a (1+x)^b.
template <class Real>
struct GaussRule {
  Vec<Real> nodes;
  Vec<Real> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Golub-Welsch seeds polished by Newton on the orthonormal recurrence;
/// weights are Christoffel numbers 1 / sum_k p_k(x)^2.
template <class Real>
GaussRule<Real> gauss_jacobi(int n, Real a, Real b) {
  using std::lgamma;
  using std::sqrt;
  using std::exp;
  using std::log;
  if (n < 1) throw DomainError("gauss_jacobi: order must be >= 1");
  if (!(a > Real(-1)) || !(b > Real(-1))) throw DomainError("gauss_jacobi: exponents must exceed -1");

  Vec<Real> alpha(n), beta(n + 1);
  const Real ab = a + b;
  alpha(0) = (b - a) / (ab + Real(2));
  for (int k = 1; k < n; ++k) {
    const Real s = Real(2 * k) + ab;
    alpha(k) = (b * b - a * a) / (s * (s + Real(2)));
  }
  beta(0) = exp((ab + Real(1)) * log(Real(2)) + lgamma(a + Real(1)) + lgamma(b + Real(1)) -
                lgamma(ab + Real(2)));
  if (n >= 1) {
    beta(1) = Real(4) * (Real(1) + a) * (Real(1) + b) /
              ((Real(2) + ab) * (Real(2) + ab) * (Real(3) + ab));
  }
  for (int k = 2; k <= n; ++k) {
    const Real s = Real(2 * k) + ab;
    beta(k) = Real(4) * Real(k) * (Real(k) + a) * (Real(k) + b) * (Real(k) + ab) /
              (s * s * (s + Real(1)) * (s - Real(1)));
  }

  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> jacobi =
      Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = alpha(k);
    if (k + 1 < n) jacobi(k, k + 1) = jacobi(k + 1, k) = sqrt(beta(k + 1));
  }
  Eigen::SelfAdjointEigenSolver<decltype(jacobi)> solver(jacobi, Eigen::EigenvaluesOnly);
  Vec<Real> x = solver.eigenvalues();

  // p_k orthonormal: sqrt(beta_{k+1}) p_{k+1} = (x - alpha_k) p_k - sqrt(beta_k) p_{k-1}.
  auto evaluate = [&](Real t, Real& pn, Real& dpn, Real& christoffel) {
    Real p_prev = 0, p = Real(1) / sqrt(beta(0));
    Real d_prev = 0, d = 0;
    christoffel = p * p;
    for (int k = 0; k < n; ++k) {
      const Real sb = sqrt(beta(k + 1));
      const Real sb_prev = k > 0 ? sqrt(beta(k)) : Real(0);
      const Real p_next = ((t - alpha(k)) * p - sb_prev * p_prev) / sb;
      const Real d_next = (p + (t - alpha(k)) * d - sb_prev * d_prev) / sb;
      p_prev = p;
      p = p_next;
      d_prev = d;
      d = d_next;
      if (k + 1 < n) christoffel += p * p;
    }
    pn = p;
    dpn = d;
  };

  GaussRule<Real> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    Real t = x(i);
    Real pn, dpn, c;
    for (int it = 0; it < 8; ++it) {
      evaluate(t, pn, dpn, c);
      if (dpn == Real(0)) break;
      const Real step = pn / dpn;
      t -= step;
      if (std::abs(step) <= std::numeric_limits<Real>::epsilon() * 2) break;
    }
    evaluate(t, pn, dpn, c);
    rule.nodes(i) = t;
    rule.weights(i) = Real(1) / c;
  }
  return rule;
}

/// Cached double-precision rules (thread-safe).
const GaussRule<double>& gauss_legendre(int n);
const GaussRule<double>& gauss_jacobi_cached(int n, double a, double b);

/// Periodic trapezoid on [-pi, pi); weights 1/n so results are 1/(2 pi)-normalised means.
template <class Real>
struct CircleRule {
  int n = 0;
  Vec<Real> nodes;
  Real weight = 0;

  static CircleRule make(int n) {
    if (n < 1 || (n & (n - 1)) != 0) throw DomainError("CircleRule: node count must be a power of two");
    CircleRule rule;
    rule.n = n;
    rule.nodes.resize(n);
    const Real pi = std::acos(Real(-1));
    for (int k = 0; k < n; ++k) rule.nodes(k) = -pi + Real(2) * pi * Real(k) / Real(n);
    rule.weight = Real(1) / Real(n);
    return rule;
  }
};

/// Gauss-Jacobi in t = r^2 on [0, 1] for int_0^1 g(t) (1-t)^alpha dt.
template <class Real>
struct RadialJacobiRule {
  int order = 0;
  Real alpha = 0;
  Vec<Real> nodes;
  Vec<Real> weights;

  static RadialJacobiRule make(int order, Real alpha) {
    if (!(alpha > Real(-1))) throw DomainError("RadialJacobiRule: alpha must exceed -1 (non-integrable weight)");
    const GaussRule<Real> g = gauss_jacobi<Real>(order, alpha, Real(0));
    RadialJacobiRule rule;
    rule.order = order;
    rule.alpha = alpha;
    rule.nodes = (g.nodes.array() + Real(1)) / Real(2);
    rule.weights = g.weights * std::pow(Real(2), -alpha - Real(1));
    return rule;
  }
};

/// Tensor rule: radial Gauss-Jacobi in t times angular trapezoid.
template <class Real>
struct DiskRule {
  RadialJacobiRule<Real> radial;
  CircleRule<Real> angular;

  static DiskRule make(int order, int n_angles, Real alpha) {
    return DiskRule{RadialJacobiRule<Real>::make(order, alpha), CircleRule<Real>::make(n_angles)};
  }
  Real total_weight() const { return radial.weights.sum(); }
};

struct QuadratureResult {
  Complex value{};
  double error_estimate = 0.0;
  int refinements = 0;
  long nodes = 0;
  bool converged = true;
};

/// Node clustering for circle means: tan(theta - c) = lambda tan(s), which
/// concentrates nodes at theta = c and c + pi for lambda < 1.
struct CircleClustering {
  double center = 0.0;
  double lambda = 1.0;
};

struct CircleOptions {
  double tol = 1e-12;
  int min_nodes = 256;
  int max_nodes = 1 << 20;
  /// Number of consecutive doublings that must pass the tolerance.
  int confirmations = 1;
  std::optional<CircleClustering> clustering;
};

/// Mean (1/2pi) int f(theta) dtheta by the periodic trapezoid with node
/// doubling until the change relative to the mean of |f| falls below tol.
QuadratureResult integrate_circle(const std::function<Complex(double)>& f, const CircleOptions& opts);
QuadratureResult integrate_circle(const std::function<Complex(double)>& f, double tol = 1e-12);

using DiskFunction = std::function<Complex(Complex)>;

/// Tensor quadrature of int g (1-|z|^2)^alpha dA; the error estimate is the
/// difference to the rule with half the radial order and half the angles.
QuadratureResult integrate_disk(const DiskFunction& g, double alpha, const DiskRule<double>& rule);
QuadratureResult integrate_disk(const DiskFunction& g, double alpha, int order = 200, int n_angles = 256);

/// Peak hint for integrands concentrated near a point of the disk.
struct DiskPeak {
  Complex at;
};

struct GradedDiskOptions {
  /// Dyadic panels in t toward the boundary; the last one is Gauss-Jacobi.
  int levels = 24;
  int panel_order = 16;
  CircleOptions circle{1e-12, 64, 1 << 20, 1, std::nullopt};
  /// Cluster angular nodes at these boundary angles (at most one is used).
  std::optional<double> cluster_angle;
  std::optional<DiskPeak> peak;
};

/// Iterated quadrature: adaptive circle means on a composite radial rule
/// graded geometrically toward |z| = 1.
QuadratureResult integrate_disk_graded(const DiskFunction& g, double alpha, const GradedDiskOptions& opts);

/// A sample point of the centred polar system w = z0 + rho * dir.
struct CenteredPoint {
  Complex w;
  double rho;
  Complex dir;
};

struct CenteredOptions {
  int panel_order = 16;
  /// Geometric radial panels toward the boundary of the disk.
  int boundary_levels = 8;
  /// Geometric radial panels toward the centre z0 (for integrands peaked there).
  int center_levels = 2;
  int min_angles = 64;
  int max_angles = 1 << 13;
  double tol = 1e-11;
  /// Boundary angle of an integrable boundary singularity; the polar angle
  /// pointing at it gets a sin^6 grading.
  std::optional<double> boundary_singularity;
};

/// int F(w) (1-|w|^2)^alpha dA in polar coordinates centred at z0. The
/// callback returns rho * F(w), which is bounded for F ~ 1/(w - z0).
QuadratureResult integrate_disk_centered(const std::function<Complex(const CenteredPoint&)>& reduced,
                                         Complex z0, double alpha, const CenteredOptions& opts = {});

/// int [h(w)/(w - z0) + s(w)] (1-|w|^2)^alpha dA for smooth h, s supplied
/// by the caller. Rejects z0 outside (1 - 1e-6) D.
QuadratureResult integrate_disk_singular(const DiskFunction& h, const DiskFunction& s, Complex z0,
                                         double alpha, const CenteredOptions& opts = {});

/// Truncated integrals over |z| < R_k, R_k = 1 - 2^-k, k = 1..k_max, of a
/// rotation-averaged integrand: int_0^R mean(r) (1-r^2)^beta 2r dr.
struct LadderResult {
  std::vector<int> levels;
  std::vector<double> radii;
  std::vector<Complex> cumulative;
  std::vector<Complex> increments;
  bool converged = true;
};

LadderResult integrate_ladder(const std::function<QuadratureResult(double)>& circle_mean,
                              double weight_exponent, int k_max, int panel_order = 12);

/// Least-squares slope of y against x with its standard error.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double residual_norm = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace diskspec
