#include "diskspec/identity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "diskspec/transforms.hpp"

namespace diskspec {

namespace {

void require_radius(Complex z, double bound, const char* who) {
  if (!(std::abs(z) < bound)) throw DomainError(std::string(who) + ": point outside the admissible disk");
}

CenteredOptions plain_options(Complex z) { return centered_options_for(catalog_get("identity"), z); }

KernelCheck finish(QuadratureResult q, Complex closed) {
  KernelCheck k;
  k.quadrature = q.value;
  k.closed_form = closed;
  k.difference = std::abs(q.value - closed);
  k.detail = q;
  return k;
}

void finalize(IdentityReport& rep) {
  rep.residuals.resize(rep.points.size());
  rep.max_residual = 0.0;
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    rep.residuals[i] = std::abs(rep.lhs[i] - rep.rhs[i]);
    if (!rep.flagged[i]) rep.max_residual = std::max(rep.max_residual, rep.residuals[i]);
  }
}

}  // namespace

Complex log_plus_closed_form(Complex z, Complex zeta) {
  const Complex x = std::conj(z) * zeta;
  return std::log(1.0 - x) + x * (1.0 - std::norm(zeta)) / (1.0 - x);
}

KernelCheck kernel_log(Complex z, Complex zeta) {
  require_radius(z, 1.0, "kernel_log");
  require_radius(zeta, 1.0, "kernel_log");
  const Complex closed = std::log(1.0 - std::conj(z) * zeta);
  if (zeta == Complex(0.0)) return finish(QuadratureResult{}, closed);
  auto h = [&](Complex w) { return zeta / (1.0 - std::conj(w) * zeta); };
  return finish(integrate_disk_singular(h, nullptr, z, 0.0, plain_options(z)), closed);
}

KernelCheck kernel_log_plus(Complex z, Complex zeta) {
  require_radius(z, 1.0, "kernel_log_plus");
  require_radius(zeta, 1.0, "kernel_log_plus");
  const Complex closed = log_plus_closed_form(z, zeta);
  if (zeta == Complex(0.0)) return finish(QuadratureResult{}, closed);
  auto h = [&](Complex w) {
    const Complex q = 1.0 - std::conj(w) * zeta;
    return zeta * zeta * (std::conj(zeta) - std::conj(w)) / (q * q);
  };
  return finish(integrate_disk_singular(h, nullptr, z, 0.0, plain_options(z)), closed);
}

std::pair<Complex, Complex> reproducing_check(const DiskFunction& f, Complex zeta,
                                              std::optional<double> cluster_angle) {
  require_radius(zeta, 1.0, "reproducing_check");
  GradedDiskOptions opts;
  opts.levels = 6;
  opts.panel_order = 20;
  opts.circle.tol = 1e-13;
  opts.circle.min_nodes = 128;
  opts.cluster_angle = cluster_angle;
  const QuadratureResult area =
      integrate_disk_graded([&](Complex w) { return f(w) * zeta / (1.0 - std::conj(w) * zeta); }, 0.0, opts);

  const auto& gl = gauss_legendre(64);
  CompensatedSum<Complex> line;
  for (int i = 0; i < gl.size(); ++i) {
    const double t = (gl.nodes(i) + 1.0) / 2.0;
    line.add(gl.weights(i) / 2.0 * f(t * zeta));
  }
  return {area.value, zeta * line.value()};
}

BranchValue log_difference_quotient(const UnivalentMap& map, Complex z, Complex zeta, int steps) {
  if (z == Complex(0.0)) throw DomainError("log_difference_quotient: z must be non-zero");
  const Complex base = z / map.eval(z);
  auto q = [&](Complex s) { return base * map.divided_difference(z, s); };
  BranchValue out;
  Complex prev = q(0.0);
  Complex acc = std::log(prev);  // principal; prev = 1 up to rounding
  for (int j = 1; j <= steps; ++j) {
    const Complex cur = q(zeta * (double(j) / steps));
    const Complex step = std::log(cur / prev);
    if (std::abs(step.imag()) > kPi / 2) out.ok = false;
    acc += step;
    prev = cur;
  }
  // Real part from the endpoint directly, imaginary part carries the branch.
  out.value = Complex(std::log(std::abs(prev)), acc.imag());
  return out;
}

IdentityReport verify_prop31(const UnivalentMap& map, const std::vector<PointPair>& pairs) {
  if (!map.in_class_S()) throw DomainError("verify_prop31: map must be in class S");
  IdentityReport rep;
  rep.identity_id = "prop31";
  rep.points = pairs;
  const std::size_t n = pairs.size();
  rep.lhs.resize(n);
  rep.rhs.resize(n);
  rep.flagged.assign(n, false);
  std::vector<char> converged(n, 1), flagged(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const auto [z, zeta] = pairs[i];
    require_radius(z, 0.9 + 1e-12, "verify_prop31");
    require_radius(zeta, 0.9 + 1e-12, "verify_prop31");
    const BranchValue b = log_difference_quotient(map, z, zeta);
    flagged[i] = !b.ok;
    rep.lhs[i] = b.value + std::log(1.0 - std::conj(z) * zeta);
    const QuadratureResult q =
        transferred_cauchy(map, [&](Complex w) { return zeta / (1.0 - std::conj(w) * zeta); }, z);
    rep.rhs[i] = q.value;
    converged[i] = q.converged;
  });
  for (std::size_t i = 0; i < n; ++i) {
    rep.flagged[i] = flagged[i];
    rep.converged = rep.converged && converged[i];
  }
  finalize(rep);
  return rep;
}

IdentityReport verify_prop32(const UnivalentMap& map, const std::vector<PointPair>& pairs) {
  if (!map.in_class_S()) throw DomainError("verify_prop32: map must be in class S");
  IdentityReport rep;
  rep.identity_id = "prop32";
  rep.points = pairs;
  const std::size_t n = pairs.size();
  rep.lhs.resize(n);
  rep.rhs.resize(n);
  rep.flagged.assign(n, false);
  std::vector<char> converged(n, 1), flagged(n, 0);
  const TransferredKernel kernel(map);
  parallel_for(n, [&](std::size_t i) {
    const auto [z, zeta] = pairs[i];
    require_radius(z, 0.9 + 1e-12, "verify_prop32");
    require_radius(zeta, 0.9 + 1e-12, "verify_prop32");
    const BranchValue b = log_difference_quotient(map, z, zeta);
    flagged[i] = !b.ok;
    const Complex correction =
        zeta == z ? kernel.regular_part_model(z, z) : kernel.regular_part(zeta, z);
    rep.lhs[i] = b.value - zeta * (1.0 - std::norm(zeta)) * correction + log_plus_closed_form(z, zeta);
    const QuadratureResult q = transferred_cauchy(
        map,
        [&](Complex w) {
          const Complex d = 1.0 - std::conj(w) * zeta;
          return zeta * zeta * (std::conj(zeta) - std::conj(w)) / (d * d);
        },
        z);
    rep.rhs[i] = q.value;
    converged[i] = q.converged;
  });
  for (std::size_t i = 0; i < n; ++i) {
    rep.flagged[i] = flagged[i];
    rep.converged = rep.converged && converged[i];
  }
  finalize(rep);
  return rep;
}

IdentityReport verify_special(const UnivalentMap& map, const std::vector<Complex>& z_list) {
  if (map.map_class() != MapClass::Sb) throw DomainError("verify_special: map must be in class S_b");
  IdentityReport rep;
  rep.identity_id = "special";
  const std::size_t n = z_list.size();
  rep.lhs.resize(n);
  rep.rhs.resize(n);
  rep.flagged.assign(n, false);
  std::vector<char> converged(n, 1);
  for (Complex z : z_list) rep.points.emplace_back(z, z);
  parallel_for(n, [&](std::size_t i) {
    const Complex z = z_list[i];
    require_radius(z, 1.0 - 1e-6, "verify_special");
    rep.lhs[i] = map.log_deriv(z) - map.log_phi_over_z(z) + std::log(1.0 - std::norm(z));
    const QuadratureResult q =
        tilde_transferred(map, [&](Complex w) { return z * z / (1.0 - std::conj(w) * z); }, z);
    rep.rhs[i] = q.value;
    converged[i] = q.converged;
  });
  for (std::size_t i = 0; i < n; ++i) rep.converged = rep.converged && converged[i];
  finalize(rep);
  if (n >= 3) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(std::log(1.0 / (1.0 - std::abs(z_list[i]))));
      y.push_back(rep.residuals[i]);
    }
    rep.growth_slope = fit_line(x, y).slope;
  }
  return rep;
}

Lemma33Report lemma33_sup(const UnivalentMap& map, int grid_density, int refinements) {
  if (!map.in_class_S()) throw DomainError("lemma33_sup: map must be in class S");
  if (grid_density < 4) throw DomainError("lemma33_sup: grid_density must be >= 4");
  if (refinements < 1) throw DomainError("lemma33_sup: refinements must be >= 1");
  Lemma33Report rep;
  rep.map_name = map.spec();
  const TransferredKernel kernel(map);
  for (int level = 0; level < refinements; ++level) {
    const int n_angles = grid_density << level;
    std::vector<Complex> pts{0.0};
    for (int j = 1; j <= 16; ++j) {
      const double r = 1.0 - std::ldexp(1.0, -j);
      // Stagger alternate rings by half a step so that some pairs are not radially aligned.
      const double shift = (j % 2) ? 0.0 : kPi / n_angles;
      for (int k = 0; k < n_angles; ++k) pts.push_back(std::polar(r, -kPi + 2 * kPi * k / n_angles + shift));
    }
    const std::size_t m = pts.size();
    std::vector<Complex> phi(m), dphi(m), diag(m);
    parallel_for(m, [&](std::size_t i) {
      const MapJet jt = map.jet(pts[i]);
      phi[i] = jt.value;
      dphi[i] = jt.d1;
      diag[i] = jt.d2 / (2.0 * jt.d1);
    });
    std::vector<double> best(m, 0.0);
    std::vector<std::size_t> best_z(m, 0);
    std::vector<char> finite(m, 1);
    // Row i is zeta, column k is z.
    parallel_for(m, [&](std::size_t i) {
      const Complex zeta = pts[i];
      const double weight = 1.0 - std::norm(zeta);
      for (std::size_t k = 0; k < m; ++k) {
        Complex bracket;
        if (k == i) {
          bracket = diag[i];
        } else {
          const Complex z = pts[k];
          const double gap = std::abs(zeta - z);
          if (gap < 1e-2 * (1.0 - std::abs(zeta))) {
            bracket = kernel.regular_part(zeta, z);
          } else if (std::abs(phi[i] - phi[k]) < 1e-6 * std::abs(dphi[i]) * gap) {
            bracket = kernel.regular_part(zeta, z);
          } else {
            bracket = dphi[i] / (phi[i] - phi[k]) - 1.0 / (zeta - z);
          }
        }
        const double v = weight * std::abs(bracket);
        if (!std::isfinite(v)) {
          finite[i] = 0;
          continue;
        }
        if (v > best[i]) {
          best[i] = v;
          best_z[i] = k;
        }
      }
    });
    double sup = 0.0;
    std::size_t arg_i = 0;
    for (std::size_t i = 0; i < m; ++i) {
      rep.all_finite = rep.all_finite && finite[i];
      if (best[i] > sup) {
        sup = best[i];
        arg_i = i;
      }
    }
    rep.densities.push_back(n_angles);
    rep.refinement_history.push_back(sup);
    rep.sup_estimate = sup;
    rep.argmax = {pts[best_z[arg_i]], pts[arg_i]};
    rep.grid_points = static_cast<int>(m);
  }
  return rep;
}

std::vector<PointPair> random_pairs(int count, double max_radius, std::uint64_t seed) {
  if (count < 0) throw DomainError("random_pairs: count must be non-negative");
  if (!(max_radius > 0.0 && max_radius < 1.0)) throw DomainError("random_pairs: max_radius must lie in (0, 1)");
  std::mt19937_64 gen(seed);
  // Explicit 53-bit conversion; std distributions are not portable across libraries.
  auto uniform = [&] { return double(gen() >> 11) * 0x1.0p-53; };
  auto point = [&] {
    const double r = max_radius * std::sqrt(uniform());
    const double t = 2 * kPi * uniform() - kPi;
    return std::polar(r, t);
  };
  std::vector<PointPair> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Complex z = point();
    Complex zeta = point();
    if (z == Complex(0.0)) z = max_radius * 0.5;
    out.emplace_back(z, zeta);
  }
  return out;
}

}  // namespace diskspec
