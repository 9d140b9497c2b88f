#pragma once

// Closed forms and series used as independent references by the tests.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

/// int |z|^(2n) (1-|z|^2)^alpha dA = B(n+1, alpha+1).
inline double beta_moment(int n, double alpha) {
  return std::exp(std::lgamma(n + 1.0) + std::lgamma(alpha + 1.0) - std::lgamma(n + alpha + 2.0));
}

/// int w^a wbar^b / (w - z) dA(w) by Laurent expansion on |w| < |z| and |w| > |z|.
inline Complex cauchy_monomial(int a, int b, Complex z) {
  Complex out = -std::pow(z, a) * std::pow(std::conj(z), b + 1) / double(b + 1);
  if (a >= b + 1) out += std::pow(z, a - b - 1) / double(b + 1);
  return out;
}

/// pv int w^a wbar^b / (w - z)^2 dA(w): the z-derivative of cauchy_monomial.
inline Complex beurling_monomial(int a, int b, Complex z) {
  Complex out = a > 0 ? -double(a) * std::pow(z, a - 1) * std::pow(std::conj(z), b + 1) / double(b + 1) : 0.0;
  if (a >= b + 2) out += double(a - b - 1) * std::pow(z, a - b - 2) / double(b + 1);
  return out;
}

/// pv int f(w) / (w - z)^2 dA by brute force: f(z) times the vanishing pv of the
/// bare kernel drops out, and polar coordinates about z absorb the 1/rho left.
inline Complex beurling_brute_force(const std::function<Complex(Complex)>& f, Complex z, int n_angles = 512,
                                    int n_radial = 96) {
  const Complex fz = f(z);
  // Gauss-Legendre nodes on [-1, 1] by Newton on the Legendre recurrence.
  std::vector<double> x(n_radial), w(n_radial);
  for (int i = 0; i < n_radial; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n_radial + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n_radial; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n_radial * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n_radial; ++k) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n_radial * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  Complex sum = 0.0;
  for (int j = 0; j < n_angles; ++j) {
    const double phi = 2.0 * kPi * (j + 0.5) / n_angles;
    const Complex e = std::polar(1.0, phi);
    // Distance from z to the unit circle along e.
    const double ze = std::real(std::conj(e) * z);
    const double R = -ze + std::sqrt(ze * ze + 1.0 - std::norm(z));
    Complex ray = 0.0;
    for (int i = 0; i < n_radial; ++i) {
      const double rho = R * (x[i] + 1.0) / 2.0;
      ray += w[i] * R / 2.0 * (f(z + rho * e) - fz) / (rho * e * e);
    }
    sum += ray;
  }
  return sum / double(n_angles) * 2.0;
}

/// Grunsky coefficients b_mn, 0 <= m, n <= N, from Taylor coefficients a_0..a_{2N+1}
/// through the power series of log Q with Q_ij = a_{i+j+1}.
inline Eigen::MatrixXcd grunsky_series(const std::vector<Complex>& a, int N) {
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(N + 1, N + 1), L = Eigen::MatrixXcd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) Q(i, j) = a[i + j + 1];
  // Q(0,0) = 1: (z d/dz L) Q = z d/dz Q, and likewise in w on the row i = 0.
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i == 0 && j == 0) continue;
      const bool use_z = i > 0;
      const double deg = use_z ? i : j;
      Complex s = deg * Q(i, j);
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= j; ++l) {
          if (k == 0 && l == 0) continue;
          s -= double(use_z ? i - k : j - l) * L(i - k, j - l) * Q(k, l);
        }
      L(i, j) = s / deg;
    }
  }
  return L;
}

/// Largest singular value by a full SVD.
inline double spectral_norm(const Eigen::MatrixXcd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

/// int (1-|w|^2)^(2 theta) / |1 - wbar z|^(2+2 theta) dA by the hypergeometric series
/// sum ((1+theta)_n / n!)^2 |z|^(2n) B(n+1, 2 theta+1).
inline double gamma_kernel_series(double theta, double r) {
  const double x = r * r;
  const double s = 1.0 + theta;
  double coef = 1.0;  // ((s)_n / n!)^2
  double beta = beta_moment(0, 2.0 * theta);
  double xn = 1.0, sum = 0.0;
  for (long n = 0;; ++n) {
    const double term = coef * beta * xn;
    sum += term;
    if (term < 1e-18 * sum && n > 10) break;
    coef *= std::pow((s + n) / (n + 1.0), 2);
    beta *= (n + 1.0) / (n + 2.0 * theta + 2.0);
    xn *= x;
  }
  return sum;
}

/// Koebe function k(z) = z / (1-z)^2 and its Schwarzian -6 / (1-z^2)^2.
inline Complex koebe(Complex z) { return z / ((1.0 - z) * (1.0 - z)); }
inline Complex koebe_deriv(Complex z) { return (1.0 + z) / std::pow(1.0 - z, 3); }
inline Complex koebe_schwarzian(Complex z) { return -6.0 / std::pow(1.0 - z * z, 2); }

}  // namespace oracle
