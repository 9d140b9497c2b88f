#include "diskspec/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "diskspec/transforms.hpp"

namespace diskspec {

namespace {

// Smallest sampling density that sees the angular structure at radius r.
int min_circle_nodes(const UnivalentMap& map, double r) {
  int m = map.bandwidth();
  while (m > 1 && std::pow(r, m) < 1e-17) m /= 2;
  return std::max(256, 4 * m);
}

CircleOptions circle_options_for(const UnivalentMap& map, double r, double tol) {
  CircleOptions opts;
  opts.tol = tol;
  opts.min_nodes = min_circle_nodes(map, r);
  opts.confirmations = 2;
  if (!map.singular_angles().empty() && r > 0.5)
    opts.clustering = CircleClustering{map.singular_angles().front(), std::sqrt(1.0 - r)};
  return opts;
}

std::vector<double> real_parts(const std::vector<Complex>& v) {
  std::vector<double> out;
  for (const auto& c : v) out.push_back(c.real());
  return out;
}

}  // namespace

QuadratureResult integral_means(const UnivalentMap& map, Complex tau, double r, double tol) {
  if (!(r >= 0.0 && r < 1.0 - std::ldexp(1.0, -22)))
    throw DomainError("integral_means: radius must lie in [0, 1 - 2^-22)");
  if (std::abs(tau) > 4.0) throw DomainError("integral_means: |tau| must be <= 4");
  if (r == 0.0) return QuadratureResult{1.0, 0.0, 0, 1, true};
  return integrate_circle(
      [&](double th) { return Complex(std::exp((tau * map.log_deriv(std::polar(r, th))).real())); },
      circle_options_for(map, r, tol));
}

MeansProfile means_profile(const UnivalentMap& map, Complex tau, int k0, int k1) {
  if (k0 < 1 || k1 < k0 || k1 > 21) throw DomainError("means_profile: need 1 <= k0 <= k1 <= 21");
  MeansProfile p;
  p.map = map.spec();
  p.tau = tau;
  const int n = k1 - k0 + 1;
  std::vector<QuadratureResult> res(n);
  parallel_for(n, [&](std::size_t i) { res[i] = integral_means(map, tau, 1.0 - std::ldexp(1.0, -(k0 + int(i)))); });
  for (int i = 0; i < n; ++i) {
    p.levels.push_back(k0 + i);
    p.radii.push_back(1.0 - std::ldexp(1.0, -(k0 + i)));
    p.means.push_back(res[i].value.real());
    p.errors.push_back(res[i].error_estimate);
    p.converged = p.converged && res[i].converged;
  }
  return p;
}

SpectrumEstimate spectrum_from_profile(const MeansProfile& p) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    if (!(p.means[i] > 0.0) || !std::isfinite(p.means[i]))
      throw NumericalError("spectrum_estimate: non-finite or non-positive integral mean");
    x.push_back(p.levels[i] * std::log(2.0));
    y.push_back(std::log(p.means[i]));
  }
  const LineFit fit = fit_line(x, y);
  SpectrumEstimate est;
  est.raw_slope = fit.slope;
  est.beta_hat = std::max(0.0, fit.slope);
  est.stderr_slope = fit.stderr_slope;
  est.residual_norm = fit.residual_norm;
  est.levels_used = static_cast<int>(x.size());
  est.k_lo = p.levels.front();
  est.k_hi = p.levels.back();
  est.converged = p.converged;
  return est;
}

SpectrumEstimate spectrum_estimate(const UnivalentMap& map, Complex tau, int k_lo, int k_hi) {
  if (k_lo < 6 || k_hi > 20 || k_hi - k_lo < 1) throw DomainError("spectrum_estimate: k range must lie in [6, 20]");
  return spectrum_from_profile(means_profile(map, tau, k_lo, k_hi));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Divergent: return "divergent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict classify_growth(double exponent) {
  if (exponent < 0.05) return Verdict::Finite;
  if (exponent > 0.2) return Verdict::Divergent;
  return Verdict::Inconclusive;
}

LadderReport analyse_ladder(const LadderResult& ladder, int fit_levels) {
  LadderReport rep;
  rep.levels = ladder.levels;
  rep.radii = ladder.radii;
  rep.cumulative = real_parts(ladder.cumulative);
  rep.converged = ladder.converged;
  const int n = static_cast<int>(ladder.increments.size());
  const int m = std::min(fit_levels, n);
  if (m < 2) throw DomainError("analyse_ladder: need at least two levels");
  std::vector<double> x, y;
  for (int i = n - m; i < n; ++i) {
    const double inc = ladder.increments[i].real();
    // Increments of a positive integrand; a zero increment is exact convergence.
    x.push_back(ladder.levels[i]);
    y.push_back(std::log2(std::max(inc, 1e-300)));
  }
  rep.growth_exponent = fit_line(x, y).slope;
  rep.verdict = classify_growth(rep.growth_exponent);
  if (rep.verdict == Verdict::Finite) {
    const double q = std::exp2(std::min(rep.growth_exponent, -1e-3));
    rep.limit = rep.cumulative.back() + ladder.increments.back().real() * q / (1.0 - q);
  }
  return rep;
}

LadderReport bergman_probe(const UnivalentMap& map, Complex tau, double alpha, int k_max) {
  if (!(alpha > -1.0)) throw DomainError("bergman_probe: alpha must exceed -1");
  if (k_max < 4 || k_max > 21) throw DomainError("bergman_probe: k_max must lie in [4, 21]");
  const LadderResult ladder = integrate_ladder([&](double r) { return integral_means(map, tau, r); }, alpha, k_max);
  return analyse_ladder(ladder);
}

double lkappa_norm(const DiskFunction& f, double kappa, std::optional<Complex> peak) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("lkappa_norm: kappa must lie in (0, 1)");
  const double p = (2.0 + kappa) / (1.0 + kappa);
  GradedDiskOptions opts;
  if (peak) opts.peak = DiskPeak{*peak};
  opts.circle.tol = 1e-11;
  const QuadratureResult q =
      integrate_disk_graded([&](Complex z) { return Complex(std::pow(std::abs(f(z)), p)); }, -kappa / (1.0 + kappa), opts);
  return std::pow(std::max(q.value.real(), 0.0), 1.0 / p);
}

namespace {

QuadratureResult mz_integral_with(const UnivalentMap& map, double kappa, Complex z, CenteredOptions opts) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("mz_integral: kappa must lie in (0, 1)");
  if (!(std::abs(z) < 1.0)) throw DomainError("mz_integral: z must lie in the disk");
  if (!map.boundary_poles().empty())
    throw DomainError("mz_integral: the integral diverges for maps with a boundary pole (" + map.spec() + ")");
  const TransferredKernel kernel(map);
  const double p = 2.0 + kappa;
  return integrate_disk_centered(
      [&](const CenteredPoint& pt) {
        return Complex(pt.rho * std::pow(std::abs(kernel.reduced(pt.w, z) / (1.0 - std::conj(pt.w) * z)), p));
      },
      z, kappa, opts);
}

}  // namespace

QuadratureResult mz_integral(const UnivalentMap& map, double kappa, Complex z, double tol) {
  CenteredOptions opts = centered_options_for(map, z);
  opts.tol = tol;
  return mz_integral_with(map, kappa, z, opts);
}

MZProfile mz_exp_scan(const UnivalentMap& map, double kappa, const std::vector<double>& gamma_grid, int k_max,
                      int n_angles) {
  if (map.map_class() != MapClass::Sb) throw DomainError("mz_exp_scan: map must be in class S_b");
  if (k_max < 4 || k_max > 16) throw DomainError("mz_exp_scan: k_max must lie in [4, 16]");
  if (n_angles < 8) throw DomainError("mz_exp_scan: n_angles must be >= 8");
  std::vector<double> gammas = gamma_grid;
  std::sort(gammas.begin(), gammas.end());
  MZProfile prof;
  prof.map = map.spec();
  prof.kappa = kappa;
  prof.gamma_grid = gammas;

  // Outer ladder: Gauss-Legendre panels in r, uniform angles.
  const int order = 6;
  const auto& gl = gauss_legendre(order);
  struct Node {
    int panel;
    double r;
    double w;
  };
  std::vector<Node> nodes;
  for (int k = 0; k < k_max; ++k) {
    const double a = k == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -k);
    const double b = 1.0 - std::ldexp(1.0, -k - 1);
    for (int i = 0; i < gl.size(); ++i) {
      const double r = a + (b - a) * (gl.nodes(i) + 1.0) / 2.0;
      nodes.push_back({k, r, gl.weights(i) * (b - a) * r});
    }
  }
  const std::size_t total = nodes.size() * n_angles;
  std::vector<double> J(total), dens(total);
  std::vector<char> ok(total, 1);
  parallel_for(total, [&](std::size_t idx) {
    const Node& nd = nodes[idx / n_angles];
    const int j = int(idx % n_angles);
    const Complex z = std::polar(nd.r, -kPi + 2 * kPi * j / n_angles);
    CenteredOptions opts = centered_options_for(map, z);
    opts.panel_order = 10;
    opts.tol = 1e-8;
    opts.min_angles = 32;
    const QuadratureResult q = mz_integral_with(map, kappa, z, opts);
    J[idx] = q.value.real();
    ok[idx] = q.converged;
    dens[idx] = std::norm(map.deriv(z));
  });
  for (char c : ok) prof.converged = prof.converged && c;

  for (double gamma : gammas) {
    LadderResult ladder;
    std::vector<CompensatedSum<double>> panel(k_max);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      CompensatedSum<double> mean;
      for (int j = 0; j < n_angles; ++j) {
        const std::size_t idx = i * n_angles + j;
        mean.add(std::exp(gamma * kappa * J[idx]) * dens[idx]);
      }
      panel[nodes[i].panel].add(nodes[i].w * mean.value() / n_angles);
    }
    Complex cum = 0.0;
    for (int k = 0; k < k_max; ++k) {
      cum += panel[k].value();
      ladder.levels.push_back(k + 1);
      ladder.radii.push_back(1.0 - std::ldexp(1.0, -(k + 1)));
      ladder.increments.push_back(panel[k].value());
      ladder.cumulative.push_back(cum);
    }
    ladder.converged = prof.converged;
    LadderReport rep = analyse_ladder(ladder, 5);
    if (rep.verdict == Verdict::Finite) prof.last_finite = gamma;
    if (rep.verdict == Verdict::Divergent && !prof.first_divergent) prof.first_divergent = gamma;
    prof.ladders.push_back(rep);
  }
  return prof;
}

double gamma_kernel_integral(double theta, double z_radius, bool* converged) {
  if (!(theta > -0.5)) throw DomainError("gamma_kernel_integral: theta must exceed -1/2");
  GradedDiskOptions opts;
  opts.levels = 26;
  opts.peak = DiskPeak{Complex(z_radius, 0.0)};
  opts.circle.tol = 1e-10;
  const double p = 1.0 + theta;
  const QuadratureResult q = integrate_disk_graded(
      [&](Complex w) { return Complex(std::pow(std::norm(1.0 - std::conj(w) * z_radius), -p)); }, 2.0 * theta, opts);
  if (converged) *converged = q.converged;
  return q.value.real();
}

GammaAsymptotic gamma_kernel_asymptotic(double theta, const std::vector<int>& k_ladder) {
  if (k_ladder.size() < 2) throw DomainError("gamma_kernel_asymptotic: need at least two ladder levels");
  GammaAsymptotic out;
  out.theta = theta;
  out.target = std::exp(std::lgamma(1.0 + 2.0 * theta) - 2.0 * std::lgamma(1.0 + theta));
  const std::size_t n = k_ladder.size();
  out.integrals.resize(n);
  std::vector<char> conv(n, 1);
  for (int k : k_ladder)
    if (k < 1 || k > 18) throw DomainError("gamma_kernel_asymptotic: ladder levels must lie in [1, 18]");
  parallel_for(n, [&](std::size_t i) {
    bool c = true;
    out.integrals[i] = gamma_kernel_integral(theta, 1.0 - std::ldexp(1.0, -k_ladder[i]), &c);
    conv[i] = c;
  });
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 1.0 - std::ldexp(1.0, -k_ladder[i]);
    const double L = -std::log1p(-x * x);
    out.levels.push_back(k_ladder[i]);
    out.log_terms.push_back(L);
    out.ratios.push_back(out.integrals[i] / L);
    out.converged = out.converged && conv[i];
  }
  // I = G L + c + o(1): the slope in L is the limit of the ratio.
  out.extrapolated = fit_line(out.log_terms, out.integrals).slope;
  return out;
}

QuadratureResult jm_weighted_integral(const UnivalentMap& map, Complex tau, double s, double R) {
  if (map.map_class() != MapClass::Sb) throw DomainError("jm_weighted_integral: map must be in class S_b");
  if (!(R > 0.0 && R < 1.0)) throw DomainError("jm_weighted_integral: R must lie in (0, 1)");
  const double beta = -tau.real() + s;
  const Complex exponent = 2.0 - tau;
  const auto& gl = gauss_legendre(16);
  std::vector<double> breaks{0.0};
  for (int j = 1; 1.0 - std::ldexp(1.0, -j) < R; ++j) breaks.push_back(1.0 - std::ldexp(1.0, -j));
  breaks.push_back(R);
  struct Node {
    double r;
    double w;
  };
  std::vector<Node> nodes;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    for (int i = 0; i < gl.size(); ++i) {
      const double r = a + (b - a) * (gl.nodes(i) + 1.0) / 2.0;
      nodes.push_back({r, gl.weights(i) * (b - a) / 2.0 * 2.0 * r * std::pow(1.0 - r * r, beta)});
    }
  }
  std::vector<QuadratureResult> means(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    const double r = nodes[i].r;
    means[i] = integrate_circle(
        [&](double th) {
          const Complex z = std::polar(r, th);
          return Complex(std::exp((exponent * (map.log_deriv(z) - map.log_phi_over_z(z))).real()));
        },
        circle_options_for(map, r, 1e-11));
  });
  QuadratureResult out;
  CompensatedSum<double> sum;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    sum.add(means[i].value.real() * nodes[i].w);
    out.error_estimate += means[i].error_estimate * nodes[i].w;
    out.converged = out.converged && means[i].converged;
    out.nodes += means[i].nodes;
  }
  out.value = sum.value();
  return out;
}

std::vector<Complex> default_tau_grid() {
  std::vector<Complex> grid;
  for (double m : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5})
    for (int q = 0; q <= 4; ++q) grid.push_back(std::polar(m, q * kPi / 4));
  return grid;
}

double jm_envelope(Complex tau, double C) {
  const double a = std::abs(tau);
  return 1.0 - tau.real() + C * a * a * std::log(1.0 / a);
}

double jm_constant(Complex tau, double beta) {
  const double a = std::abs(tau);
  return (beta - 1.0 + tau.real()) / (a * a * std::log(1.0 / a));
}

JMScanResult jm_scan(const UnivalentMap& map, const std::vector<Complex>& tau_grid, int k_lo, int k_hi) {
  if (map.map_class() != MapClass::Sb) throw DomainError("jm_scan: map must be in class S_b");
  for (const auto& t : tau_grid)
    if (!(std::abs(t) > 0.0 && std::abs(t) <= 0.5 + 1e-12)) throw DomainError("jm_scan: |tau| must lie in (0, 0.5]");
  JMScanResult res;
  res.map = map.spec();
  res.k_lo = k_lo;
  res.k_hi = k_hi;
  res.entries.resize(tau_grid.size());
  std::vector<char> conv(tau_grid.size(), 1);
  parallel_for(tau_grid.size(), [&](std::size_t i) {
    const Complex tau = tau_grid[i];
    const SpectrumEstimate est = spectrum_estimate(map, 2.0 - tau, k_lo, k_hi);
    res.entries[i] = JMEntry{tau, est.beta_hat, est.raw_slope, jm_constant(tau, est.beta_hat)};
    conv[i] = est.converged;
  });
  res.sup_c_empirical = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    res.sup_c_empirical = std::max(res.sup_c_empirical, res.entries[i].c_empirical);
    res.converged = res.converged && conv[i];
  }
  return res;
}

LinearApproxParams linear_approx_params(Complex b, double gamma) {
  const double ab = std::abs(b);
  if (!(ab > 0.0 && ab <= std::exp(-1.0) * (1.0 + 1e-12)))
    throw DomainError("linear_approx_params: requires 0 < |b| <= 1/e");
  LinearApproxParams p;
  p.b = b;
  p.gamma = gamma;
  p.kappa = 1.0 / std::log(1.0 / ab);
  const double bk = std::pow(ab, p.kappa);
  p.tau = gamma * p.kappa * (2.0 + p.kappa) * bk * b;
  p.consistency = std::abs(bk - std::exp(-1.0));
  return p;
}

double makarov_combinator(double B_b, double t) { return std::max(B_b, 3.0 * t - 1.0); }

double binder_combinator(double B_b, Complex tau) {
  if (tau.real() <= 0.0) return B_b;
  return std::max(B_b, std::abs(tau) + 2.0 * tau.real() - 1.0);
}

std::pair<double, double> fzeta_norm_check(Complex zeta) {
  if (!(std::abs(zeta) < 1.0)) throw DomainError("fzeta_norm_check: zeta must lie in the disk");
  const double closed = -std::log1p(-std::norm(zeta));
  if (zeta == Complex(0.0)) return {0.0, 0.0};
  GradedDiskOptions opts;
  opts.peak = DiskPeak{zeta};
  opts.circle.tol = 1e-13;
  const double a2 = std::norm(zeta);
  const QuadratureResult q = integrate_disk_graded(
      [&](Complex w) { return Complex(a2 / std::norm(1.0 - std::conj(w) * zeta)); }, 0.0, opts);
  return {q.value.real(), closed};
}

}  // namespace diskspec
