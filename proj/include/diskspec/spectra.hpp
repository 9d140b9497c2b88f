#pragma once

// Integral means, spectrum fits, Bergman-type finiteness ladders and the
// Marcinkiewicz-Zygmund integral.

#include <optional>
#include <string>
#include <vector>

#include "diskspec/map_catalog.hpp"
#include "diskspec/quadrature.hpp"

namespace diskspec {

/// (1/2pi) int |phi'(r e^{i theta})^tau| dtheta through the analytic branch of log phi'.
QuadratureResult integral_means(const UnivalentMap& map, Complex tau, double r, double tol = 1e-10);

struct MeansProfile {
  std::string map;
  Complex tau;
  std::vector<int> levels;
  std::vector<double> radii;
  std::vector<double> means;
  std::vector<double> errors;
  bool converged = true;
};

/// Means at r_k = 1 - 2^-k for k0 <= k <= k1.
MeansProfile means_profile(const UnivalentMap& map, Complex tau, int k0, int k1);

struct SpectrumEstimate {
  double beta_hat = 0.0;
  double raw_slope = 0.0;
  double stderr_slope = 0.0;
  int levels_used = 0;
  double residual_norm = 0.0;
  int k_lo = 0;
  int k_hi = 0;
  bool converged = true;
};

/// Least-squares slope of log M_tau(r_k) against k log 2, clamped below at 0.
SpectrumEstimate spectrum_estimate(const UnivalentMap& map, Complex tau, int k_lo = 10, int k_hi = 18);
SpectrumEstimate spectrum_from_profile(const MeansProfile& p);

enum class Verdict { Finite, Divergent, Inconclusive };
std::string to_string(Verdict v);

/// Fixed thresholds on the fitted growth exponent.
Verdict classify_growth(double exponent);

struct LadderReport {
  std::vector<int> levels;
  std::vector<double> radii;
  std::vector<double> cumulative;
  /// Dyadic growth exponent: slope of log2 of the annulus increments over the last levels.
  double growth_exponent = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  /// Geometric-tail extrapolation of the cumulative integral (finite verdicts).
  std::optional<double> limit;
  bool converged = true;
};

LadderReport analyse_ladder(const LadderResult& ladder, int fit_levels = 6);

/// int_{|z|<R_k} |phi'^tau| (1-|z|^2)^alpha dA on R_k = 1 - 2^-k, k <= k_max.
LadderReport bergman_probe(const UnivalentMap& map, Complex tau, double alpha, int k_max = 20);

/// ( int |f|^p (1-|z|^2)^(-kappa/(1+kappa)) dA )^(1/p) with p = (2+kappa)/(1+kappa).
double lkappa_norm(const DiskFunction& f, double kappa, std::optional<Complex> peak = std::nullopt);

/// int |(w-z) phi'(w) / ((1 - wbar z)(phi(w) - phi(z)))|^(2+kappa) (1-|w|^2)^kappa dA(w).
QuadratureResult mz_integral(const UnivalentMap& map, double kappa, Complex z, double tol = 1e-11);

struct MZProfile {
  std::string map;
  double kappa = 0.0;
  std::vector<double> gamma_grid;
  std::vector<LadderReport> ladders;  // one per gamma
  /// Largest gamma with a finite verdict and smallest with a divergent one.
  std::optional<double> last_finite;
  std::optional<double> first_divergent;
  bool converged = true;
};

/// Truncated integrals of exp(gamma kappa J_kappa(z)) |phi'(z)|^2 dA(z) over |z| < 1 - 2^-k.
/// The outer circles use n_angles uniform points; every point costs one J_kappa quadrature.
MZProfile mz_exp_scan(const UnivalentMap& map, double kappa, const std::vector<double>& gamma_grid, int k_max = 12,
                      int n_angles = 64);

struct GammaAsymptotic {
  double theta = 0.0;
  std::vector<int> levels;
  std::vector<double> integrals;
  std::vector<double> log_terms;  // log(1/(1-|z|^2))
  std::vector<double> ratios;
  /// Slope of the integral against the log term over the ladder (limit of the ratio).
  double extrapolated = 0.0;
  double target = 0.0;
  bool converged = true;
};

/// int (1-|w|^2)^(2 theta) / |1 - wbar z|^(2+2 theta) dA for z = 1 - 2^-k.
double gamma_kernel_integral(double theta, double z_radius, bool* converged = nullptr);
GammaAsymptotic gamma_kernel_asymptotic(double theta, const std::vector<int>& k_ladder);

/// int_{|z|<R} |(z phi'/phi)^(2-tau)| (1-|z|^2)^(-Re tau + s) dA.
QuadratureResult jm_weighted_integral(const UnivalentMap& map, Complex tau, double s, double R);

struct JMEntry {
  Complex tau;
  double beta_measured = 0.0;  // beta_hat(2 - tau)
  double raw_slope = 0.0;
  double c_empirical = 0.0;
};

struct JMScanResult {
  std::string map;
  int k_lo = 0;
  int k_hi = 0;
  std::vector<JMEntry> entries;
  double sup_c_empirical = 0.0;
  bool converged = true;
};

/// |tau| in {0.05, 0.1, 0.2, 0.3, 0.4, 0.5} times arg in {0, pi/4, pi/2, 3pi/4, pi}.
std::vector<Complex> default_tau_grid();
double jm_envelope(Complex tau, double C);
double jm_constant(Complex tau, double beta);
JMScanResult jm_scan(const UnivalentMap& map, const std::vector<Complex>& tau_grid, int k_lo = 10, int k_hi = 18);

struct LinearApproxParams {
  Complex b;
  double kappa = 0.0;
  double gamma = 0.0;
  Complex tau;
  double consistency = 0.0;  // | |b|^kappa - 1/e |
};

LinearApproxParams linear_approx_params(Complex b, double gamma);

double makarov_combinator(double B_b, double t);
double binder_combinator(double B_b, Complex tau);

/// (quadrature of int |zeta|^2 / |1 - wbar zeta|^2 dA, log(1/(1-|zeta|^2))).
std::pair<double, double> fzeta_norm_check(Complex zeta);

}  // namespace diskspec
