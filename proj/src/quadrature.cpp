#include "diskspec/quadrature.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace diskspec {
namespace {

std::mutex g_rule_mutex;
std::map<std::tuple<int, double, double>, std::unique_ptr<GaussRule<double>>> g_rules;

// theta = center + T(s), tan T = lambda tan s, T(s) - s periodic.
struct ClusterMap {
  double center;
  double lambda;
  double theta(double s) const {
    const double c = std::cos(s), sn = std::sin(s);
    return center + s - std::atan2((1.0 - lambda) * sn * c, c * c + lambda * sn * sn);
  }
  double jacobian(double s) const {
    const double c = std::cos(s), sn = std::sin(s);
    return lambda / (c * c + lambda * lambda * sn * sn);
  }
};

// Sum of g(s_k) over the odd nodes of the 2n-point grid (or all n nodes when
// first == true), s_k = -pi + 2 pi k / (2n). Returns sum and sum of |g|.
std::pair<Complex, double> trapezoid_pass(const std::function<Complex(double)>& g, int n, bool first) {
  CompensatedSum<Complex> sum;
  CompensatedSum<double> abs_sum;
  if (first) {
    for (int k = 0; k < n; ++k) {
      const Complex v = g(-kPi + 2.0 * kPi * k / n);
      sum.add(v);
      abs_sum.add(std::abs(v));
    }
  } else {
    for (int k = 0; k < n; ++k) {
      const Complex v = g(-kPi + 2.0 * kPi * (2 * k + 1) / (2.0 * n));
      sum.add(v);
      abs_sum.add(std::abs(v));
    }
  }
  return {sum.value(), abs_sum.value()};
}

}  // namespace

const GaussRule<double>& gauss_jacobi_cached(int n, double a, double b) {
  std::lock_guard lock(g_rule_mutex);
  auto key = std::make_tuple(n, a, b);
  auto it = g_rules.find(key);
  if (it == g_rules.end()) {
    it = g_rules.emplace(key, std::make_unique<GaussRule<double>>(gauss_jacobi<double>(n, a, b))).first;
  }
  return *it->second;
}

const GaussRule<double>& gauss_legendre(int n) { return gauss_jacobi_cached(n, 0.0, 0.0); }

QuadratureResult integrate_circle(const std::function<Complex(double)>& f, const CircleOptions& opts) {
  if (opts.tol < 1e-13) throw DomainError("integrate_circle: tol must be >= 1e-13");
  std::function<Complex(double)> g = f;
  if (opts.clustering && opts.clustering->lambda < 1.0) {
    const ClusterMap cm{opts.clustering->center, opts.clustering->lambda};
    g = [cm, &f](double s) { return f(cm.theta(s)) * cm.jacobian(s); };
  }
  int n = std::max(1, opts.min_nodes);
  auto [sum, abs_sum] = trapezoid_pass(g, n, true);
  Complex mean = sum / double(n);
  QuadratureResult res;
  res.converged = false;
  int passed = 0;
  while (2 * n <= opts.max_nodes) {
    auto [s2, a2] = trapezoid_pass(g, n, false);
    sum += s2;
    abs_sum += a2;
    n *= 2;
    const Complex next = sum / double(n);
    const double change = std::abs(next - mean);
    const double scale = abs_sum / n;
    mean = next;
    ++res.refinements;
    res.error_estimate = change;
    if (change <= opts.tol * std::max(scale, 1e-300)) {
      if (++passed >= opts.confirmations) {
        res.converged = true;
        break;
      }
    } else {
      passed = 0;
    }
  }
  res.value = mean;
  res.nodes = n;
  return res;
}

QuadratureResult integrate_circle(const std::function<Complex(double)>& f, double tol) {
  CircleOptions opts;
  opts.tol = tol;
  return integrate_circle(f, opts);
}

namespace {

Complex tensor_value(const DiskFunction& g, const RadialJacobiRule<double>& radial,
                     const CircleRule<double>& angular) {
  const int nr = radial.order;
  std::vector<Complex> rows(nr);
  parallel_for(nr, [&](std::size_t i) {
    const double r = std::sqrt(radial.nodes(i));
    CompensatedSum<Complex> s;
    for (int k = 0; k < angular.n; ++k) s.add(g(std::polar(r, angular.nodes(k))));
    rows[i] = s.value() * angular.weight;
  });
  CompensatedSum<Complex> total;
  for (int i = 0; i < nr; ++i) total.add(rows[i] * radial.weights(i));
  return total.value();
}

}  // namespace

QuadratureResult integrate_disk(const DiskFunction& g, double alpha, const DiskRule<double>& rule) {
  if (!(alpha > -1.0)) throw DomainError("integrate_disk: alpha must exceed -1 (non-integrable weight)");
  if (std::abs(rule.radial.alpha - alpha) > 0.0) throw DomainError("integrate_disk: rule built for a different alpha");
  QuadratureResult res;
  res.value = tensor_value(g, rule.radial, rule.angular);
  const int half_order = std::max(1, rule.radial.order / 2);
  const int half_angles = std::max(1, rule.angular.n / 2);
  const auto coarse = RadialJacobiRule<double>::make(half_order, alpha);
  const auto coarse_angles = CircleRule<double>::make(half_angles);
  res.error_estimate = std::abs(res.value - tensor_value(g, coarse, coarse_angles));
  res.refinements = 1;
  res.nodes = long(rule.radial.order) * rule.angular.n;
  return res;
}

QuadratureResult integrate_disk(const DiskFunction& g, double alpha, int order, int n_angles) {
  return integrate_disk(g, alpha, DiskRule<double>::make(order, n_angles, alpha));
}

QuadratureResult integrate_disk_graded(const DiskFunction& g, double alpha, const GradedDiskOptions& opts) {
  if (!(alpha > -1.0)) throw DomainError("integrate_disk_graded: alpha must exceed -1");
  struct Node {
    double t;
    double w;
  };
  std::vector<Node> nodes;
  const auto& gl = gauss_legendre(opts.panel_order);
  for (int j = 0; j < opts.levels; ++j) {
    const double a = 1.0 - std::ldexp(1.0, -j);
    const double b = 1.0 - std::ldexp(1.0, -j - 1);
    for (int i = 0; i < gl.size(); ++i) {
      const double t = a + (b - a) * (gl.nodes(i) + 1.0) / 2.0;
      nodes.push_back({t, gl.weights(i) * (b - a) / 2.0 * std::pow(1.0 - t, alpha)});
    }
  }
  {
    const double a = 1.0 - std::ldexp(1.0, -opts.levels);
    const double len = 1.0 - a;
    const auto& gj = gauss_jacobi_cached(opts.panel_order, alpha, 0.0);
    for (int i = 0; i < gj.size(); ++i) {
      const double t = a + len * (gj.nodes(i) + 1.0) / 2.0;
      nodes.push_back({t, gj.weights(i) * std::pow(len / 2.0, alpha + 1.0)});
    }
  }

  std::vector<QuadratureResult> means(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    const double r = std::sqrt(nodes[i].t);
    CircleOptions copts = opts.circle;
    double center = 0.0;
    double scale = 1.0 - r;
    bool cluster = false;
    if (opts.peak) {
      center = std::arg(opts.peak->at);
      scale = std::abs(1.0 - r * std::abs(opts.peak->at));
      cluster = true;
    } else if (opts.cluster_angle) {
      center = *opts.cluster_angle;
      cluster = true;
    }
    if (cluster) {
      const double lambda = std::sqrt(std::max(scale, 1e-300));
      if (lambda < 0.5) copts.clustering = CircleClustering{center, lambda};
    }
    means[i] = integrate_circle([&](double th) { return g(std::polar(r, th)); }, copts);
  });

  QuadratureResult res;
  CompensatedSum<Complex> total;
  double err = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    total.add(means[i].value * nodes[i].w);
    err += means[i].error_estimate * nodes[i].w;
    res.nodes += means[i].nodes;
    res.converged = res.converged && means[i].converged;
    res.refinements = std::max(res.refinements, means[i].refinements);
  }
  res.value = total.value();
  res.error_estimate = err;
  return res;
}

namespace {

struct RadialNode {
  double x;  // fraction of rho_plus
  double w;  // weight for the fraction variable, excluding (1-|w|^2)^alpha
  bool jacobi;
};

// Composite rule in u = rho / rho_plus on [0, 1].
std::vector<RadialNode> centered_radial_nodes(const CenteredOptions& opts, double alpha) {
  std::vector<double> breaks;
  for (int j = opts.center_levels; j >= 1; --j) breaks.push_back(std::ldexp(1.0, -j));
  breaks.insert(breaks.begin(), 0.0);
  if (opts.center_levels == 0) breaks.push_back(0.5);
  for (int j = 1; j <= opts.boundary_levels; ++j) {
    const double b = 1.0 - std::ldexp(1.0, -j);
    if (b > breaks.back()) breaks.push_back(b);
  }
  const auto& gl = gauss_legendre(opts.panel_order);
  std::vector<RadialNode> out;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    for (int i = 0; i < gl.size(); ++i)
      out.push_back({a + (b - a) * (gl.nodes(i) + 1.0) / 2.0, gl.weights(i) * (b - a) / 2.0, false});
  }
  const double a = breaks.back();
  const double len = 1.0 - a;
  const auto& gj = gauss_jacobi_cached(opts.panel_order, alpha, 0.0);
  for (int i = 0; i < gj.size(); ++i)
    out.push_back({a + len * (gj.nodes(i) + 1.0) / 2.0, gj.weights(i) * std::pow(len / 2.0, alpha + 1.0), true});
  return out;
}

}  // namespace

QuadratureResult integrate_disk_centered(const std::function<Complex(const CenteredPoint&)>& reduced,
                                         Complex z0, double alpha, const CenteredOptions& opts) {
  if (!(alpha > -1.0)) throw DomainError("integrate_disk_centered: alpha must exceed -1");
  if (!(std::abs(z0) < 1.0)) throw DomainError("integrate_disk_centered: centre must lie inside the disk");
  const auto radial = centered_radial_nodes(opts, alpha);
  const double c = 1.0 - std::norm(z0);

  // G(psi) = int_0^{rho+} rho F (1-|w|^2)^alpha drho
  auto radial_integral = [&](double psi) {
    const Complex dir = std::polar(1.0, psi);
    const double b = (std::conj(z0) * dir).real();
    const double disc = std::sqrt(b * b + c);
    const double rho_plus = b >= 0 ? c / (b + disc) : disc - b;
    const double rho_minus = -c / rho_plus;
    CompensatedSum<Complex> s;
    for (const auto& node : radial) {
      const double rho = node.x * rho_plus;
      double weight = node.w * rho_plus;
      if (alpha != 0.0) {
        // (1-|w|^2)^alpha = (rho+ - rho)^alpha (rho - rho-)^alpha
        weight *= std::pow(rho - rho_minus, alpha);
        if (node.jacobi) {
          weight *= std::pow(rho_plus, alpha);
        } else {
          weight *= std::pow(rho_plus - rho, alpha);
        }
      }
      s.add(reduced(CenteredPoint{z0 + rho * dir, rho, dir}) * weight);
    }
    return s.value();
  };

  double psi0 = 0.0;
  bool graded = false;
  if (opts.boundary_singularity) {
    psi0 = std::arg(std::polar(1.0, *opts.boundary_singularity) - z0);
    graded = true;
  }
  // s in [0, 2pi): psi = psi0 + v(s), v' = (16/5) sin^6(s/2).
  auto integrand = [&](double s) -> Complex {
    if (!graded) return radial_integral(s);
    const double v = s - (15.0 * std::sin(s) - 3.0 * std::sin(2 * s) + std::sin(3 * s) / 3.0) / 10.0;
    const double dv = 3.2 * std::pow(std::sin(s / 2.0), 6);
    if (dv == 0.0) return 0.0;
    return radial_integral(psi0 + v) * dv;
  };

  auto pass = [&](int n, bool first) {
    const int count = n;
    std::vector<Complex> vals(count);
    parallel_for(count, [&](std::size_t k) {
      const double s = first ? 2.0 * kPi * double(k) / n : 2.0 * kPi * (2.0 * double(k) + 1.0) / (2.0 * n);
      vals[k] = integrand(s);
    });
    CompensatedSum<Complex> sum;
    double abs_sum = 0.0;
    for (const auto& v : vals) {
      sum.add(v);
      abs_sum += std::abs(v);
    }
    return std::make_pair(sum.value(), abs_sum);
  };

  int n = opts.min_angles;
  auto [sum, abs_sum] = pass(n, true);
  // (1/pi) int_0^{2pi} G dpsi = 2 * mean(G)
  Complex value = 2.0 * sum / double(n);
  QuadratureResult res;
  res.converged = false;
  while (2 * n <= opts.max_angles) {
    auto [s2, a2] = pass(n, false);
    sum += s2;
    abs_sum += a2;
    n *= 2;
    const Complex next = 2.0 * sum / double(n);
    res.error_estimate = std::abs(next - value);
    value = next;
    ++res.refinements;
    if (res.error_estimate <= opts.tol * std::max(2.0 * abs_sum / n, 1e-300)) {
      res.converged = true;
      break;
    }
  }
  res.value = value;
  res.nodes = long(n) * long(radial.size());
  return res;
}

QuadratureResult integrate_disk_singular(const DiskFunction& h, const DiskFunction& s, Complex z0,
                                         double alpha, const CenteredOptions& opts) {
  if (!(std::abs(z0) <= 1.0 - 1e-6))
    throw DomainError("integrate_disk_singular: singular point too close to the boundary");
  return integrate_disk_centered(
      [&](const CenteredPoint& p) {
        Complex v = h(p.w) * std::conj(p.dir);
        if (s) v += s(p.w) * p.rho;
        return v;
      },
      z0, alpha, opts);
}

LadderResult integrate_ladder(const std::function<QuadratureResult(double)>& circle_mean,
                              double weight_exponent, int k_max, int panel_order) {
  if (k_max < 1) throw DomainError("integrate_ladder: k_max must be >= 1");
  const auto& gl = gauss_legendre(panel_order);
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
      // dA = 2 r dr over circle means
      const double w = gl.weights(i) * (b - a) / 2.0 * 2.0 * r * std::pow(1.0 - r * r, weight_exponent);
      nodes.push_back({k, r, w});
    }
  }
  std::vector<QuadratureResult> means(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) { means[i] = circle_mean(nodes[i].r); });

  LadderResult out;
  std::vector<CompensatedSum<Complex>> panel(k_max);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    panel[nodes[i].panel].add(means[i].value * nodes[i].w);
    out.converged = out.converged && means[i].converged;
  }
  Complex cumulative = 0.0;
  for (int k = 0; k < k_max; ++k) {
    const Complex inc = panel[k].value();
    cumulative += inc;
    out.levels.push_back(k + 1);
    out.radii.push_back(1.0 - std::ldexp(1.0, -(k + 1)));
    out.increments.push_back(inc);
    out.cumulative.push_back(cumulative);
  }
  return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("fit_line: need at least two points");
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, 0) = x[i];
    a(i, 1) = 1.0;
    b(i) = y[i];
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd resid = a * coef - b;
  LineFit fit;
  fit.slope = coef(0);
  fit.intercept = coef(1);
  fit.residual_norm = resid.norm();
  if (n > 2) {
    const double mean_x = a.col(0).mean();
    const double sxx = (a.col(0).array() - mean_x).square().sum();
    const double s2 = resid.squaredNorm() / double(n - 2);
    fit.stderr_slope = sxx > 0 ? std::sqrt(s2 / sxx) : 0.0;
  }
  return fit;
}

}  // namespace diskspec
