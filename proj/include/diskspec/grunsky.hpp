#pragma once

// Grunsky coefficients by double circle sampling and Fourier inversion.

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

#include "diskspec/map_catalog.hpp"

namespace diskspec {

struct GrunskyMatrix {
  int N = 0;
  double sample_radius = 0.0;
  /// b(m, n) for 0 <= m, n <= N, from log[(phi(z)-phi(w))/(z-w)] = sum b_mn z^m w^n.
  Eigen::MatrixXcd b;
  /// c(m-1, n-1) = sqrt(mn) b_mn, 1 <= m, n <= N.
  Eigen::MatrixXcd c;
  /// max |b_mn(rho) - b_mn(rho')| over the truncation for a second radius rho'.
  double coefficient_error_bound = 0.0;
  double second_radius = 0.0;
};

/// clamp(10^(-6/(2N)), 0.3, 0.95): keeps rounding amplification near 1e6.
double default_grunsky_radius(int N);

/// Admissible radii are [0.3, 0.95]; N <= 256.
GrunskyMatrix extract_grunsky(const UnivalentMap& map, int N, double rho);
GrunskyMatrix extract_grunsky(const UnivalentMap& map, int N);

struct GrunskyNorm {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value by power iteration on c* c from the normalised all-ones vector.
GrunskyNorm grunsky_norm(const Eigen::MatrixXcd& c, double tol = 1e-10, int max_iter = 100000);
GrunskyNorm grunsky_norm(const GrunskyMatrix& m, double tol = 1e-10, int max_iter = 100000);

struct ActionCrosscheck {
  int n = 0;
  std::vector<Complex> z_list;
  std::vector<Complex> quadrature;
  std::vector<Complex> matrix_model;
  double max_discrepancy = 0.0;
  bool converged = true;
};

/// (B_phi - B)[wbar^n](z) as int K(z, w) wbar^n dA(w) and as
/// sum_m (m+1) b_{m+1, n+1} z^m from the coefficient matrix.
ActionCrosscheck grunsky_action_crosscheck(const UnivalentMap& map, int n, const std::vector<Complex>& z_list,
                                           int N = 48);

/// Rows "row,col,re,im" (1-based) with a header line.
void write_grunsky_csv(const GrunskyMatrix& m, std::ostream& os);

}  // namespace diskspec
