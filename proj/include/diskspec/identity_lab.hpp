#pragma once

// Numerical checks of the kernel identities behind the transferred Cauchy transform.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diskspec/map_catalog.hpp"
#include "diskspec/quadrature.hpp"

namespace diskspec {

using PointPair = std::pair<Complex, Complex>;  // (z, zeta)

struct IdentityReport {
  std::string identity_id;
  std::vector<PointPair> points;
  std::vector<Complex> lhs;
  std::vector<Complex> rhs;
  std::vector<double> residuals;
  /// Points whose left-hand branch could not be validated; excluded from max_residual.
  std::vector<bool> flagged;
  double max_residual = 0.0;
  bool converged = true;
  /// verify_special only: slope of the residual against log(1/(1-|z|)).
  std::optional<double> growth_slope;
};

struct KernelCheck {
  Complex quadrature;
  Complex closed_form;
  double difference = 0.0;
  QuadratureResult detail;
};

/// int zeta / ((w - z)(1 - wbar zeta)) dA(w) against log(1 - zbar zeta).
KernelCheck kernel_log(Complex z, Complex zeta);

/// log(1 - x) + x (1 - |zeta|^2) / (1 - x) with x = zbar zeta.
Complex log_plus_closed_form(Complex z, Complex zeta);

/// zeta^2 int (zetabar - wbar) / ((w - z)(1 - wbar zeta)^2) dA(w) against log_plus_closed_form.
KernelCheck kernel_log_plus(Complex z, Complex zeta);

/// (int f(w) zeta/(1 - wbar zeta) dA(w), int_0^zeta f(w) dw), computed independently.
/// The area side integrates circle means first, which keeps it meaningful for
/// analytic f that are not absolutely area-integrable (Koebe derivative).
std::pair<Complex, Complex> reproducing_check(const DiskFunction& f, Complex zeta,
                                              std::optional<double> cluster_angle = std::nullopt);

/// Continuous branch of log[z (phi(z) - phi(zeta)) / ((z - zeta) phi(z))] along
/// the segment from zeta = 0; `ok` is false if a step jumps by more than pi/2.
struct BranchValue {
  Complex value;
  bool ok = true;
};
BranchValue log_difference_quotient(const UnivalentMap& map, Complex z, Complex zeta, int steps = 256);

IdentityReport verify_prop31(const UnivalentMap& map, const std::vector<PointPair>& pairs);
IdentityReport verify_prop32(const UnivalentMap& map, const std::vector<PointPair>& pairs);

/// log(z phi'/phi) + log(1-|z|^2) against tilde_transferred(map, g_z, z); the
/// difference is bounded, not zero.
IdentityReport verify_special(const UnivalentMap& map, const std::vector<Complex>& z_list);

struct Lemma33Report {
  std::string map_name;
  int grid_points = 0;
  double sup_estimate = 0.0;
  PointPair argmax;
  std::vector<int> densities;
  std::vector<double> refinement_history;
  bool all_finite = true;
};

/// sup (1-|zeta|^2) |phi'(zeta)/(phi(zeta)-phi(z)) - 1/(zeta-z)| over a polar
/// grid (origin plus radii 1 - 2^-j, j = 1..16), angles doubled `refinements` times.
Lemma33Report lemma33_sup(const UnivalentMap& map, int grid_density, int refinements = 4);

/// Reproducible pairs with |z|, |zeta| <= max_radius (area-uniform).
std::vector<PointPair> random_pairs(int count, double max_radius, std::uint64_t seed);

}  // namespace diskspec
