#include "diskspec/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace diskspec {

namespace {

void require_interior(Complex z, const char* who) {
  if (!(std::abs(z) < 1.0)) throw DomainError(std::string(who) + ": point must lie in the open unit disk");
}

}  // namespace

TransferredKernel::TransferredKernel(UnivalentMap map, double eta) : map_(std::move(map)), eta_(eta) {}

Complex TransferredKernel::operator()(Complex w, Complex z) const { return reduced(w, z) / (w - z); }

Complex TransferredKernel::reduced(Complex w, Complex z) const {
  return map_.deriv(w) / map_.divided_difference(w, z);
}

Complex TransferredKernel::regular_part(Complex w, Complex z) const {
  if (std::abs(w - z) < eta_ * (1.0 - std::abs(z))) return regular_part_model(w, z);
  return regular_part_direct(w, z);
}

Complex TransferredKernel::regular_part_direct(Complex w, Complex z) const {
  const Complex d = w - z;
  return (map_.deriv(w) - map_.divided_difference(w, z)) / (map_.divided_difference(w, z) * d);
}

Complex TransferredKernel::regular_part_model(Complex w, Complex z) const {
  const MapJet j = map_.jet(z);
  const Complex A = j.d2 / (2.0 * j.d1);
  const Complex B = j.d3 / (6.0 * j.d1);
  const Complex C = j.d4 / (24.0 * j.d1);
  const Complex d = w - z;
  return A + d * ((2.0 * B - A * A) + d * (3.0 * C - 3.0 * A * B + A * A * A));
}

GrunskyKernel::GrunskyKernel(UnivalentMap map, double eta) : map_(std::move(map)), eta_(eta) {}

Complex GrunskyKernel::direct(Complex z, Complex w) const {
  const Complex d = z - w;
  const Complex q = map_.divided_difference(z, w);
  return (map_.deriv(z) * map_.deriv(w) / (q * q) - 1.0) / (d * d);
}

Complex GrunskyKernel::diagonal(Complex z) const { return schwarzian(map_, z) / 6.0; }

Complex GrunskyKernel::operator()(Complex z, Complex w) const {
  const double scale = std::min(1.0 - std::abs(z), 1.0 - std::abs(w));
  // The kernel is symmetric, so the expansion about the midpoint has no odd terms.
  if (std::abs(z - w) < eta_ * scale) return diagonal(0.5 * (z + w));
  return direct(z, w);
}

Complex schwarzian(const UnivalentMap& map, Complex z) {
  const MapJet j = map.jet(z);
  const Complex p = j.d2 / j.d1;
  return j.d3 / j.d1 - 1.5 * p * p;
}

CenteredOptions centered_options_for(const UnivalentMap& map, Complex z) {
  CenteredOptions opts;
  const double gap = 1.0 - std::abs(z);
  opts.center_levels = std::clamp(int(std::ceil(std::log2(1.0 / std::max(gap, 1e-12)))) + 1, 2, 24);
  if (!map.boundary_poles().empty()) {
    opts.boundary_singularity = map.boundary_poles().front();
    opts.boundary_levels = 24;
  } else {
    opts.boundary_levels = 10;
  }
  return opts;
}

QuadratureResult cauchy_transform(const DiskFunction& f, Complex z, const CenteredOptions& opts) {
  require_interior(z, "cauchy_transform");
  return integrate_disk_singular(f, nullptr, z, 0.0, opts);
}

QuadratureResult transferred_cauchy(const UnivalentMap& map, const DiskFunction& g, Complex z) {
  require_interior(z, "transferred_cauchy");
  const TransferredKernel kernel(map);
  return integrate_disk_centered(
      [&](const CenteredPoint& p) { return std::conj(p.dir) * kernel.reduced(p.w, z) * g(p.w); }, z, 0.0,
      centered_options_for(map, z));
}

QuadratureResult tilde_transferred(const UnivalentMap& map, const DiskFunction& f, Complex z) {
  require_interior(z, "tilde_transferred");
  const TransferredKernel kernel(map);
  // K (zbar - wbar) = -conj(dir)/dir * reduced, so rho * integrand is rho times that.
  return integrate_disk_centered(
      [&](const CenteredPoint& p) {
        const Complex phase = std::conj(p.dir) / p.dir;
        return -p.rho * phase * kernel.reduced(p.w, z) * f(p.w) / (1.0 - std::conj(p.w) * z);
      },
      z, 0.0, centered_options_for(map, z));
}

QuadratureResult hat_transferred(const UnivalentMap& map, const DiskFunction& f, Complex z) {
  require_interior(z, "hat_transferred");
  const TransferredKernel kernel(map);
  return integrate_disk_centered(
      [&](const CenteredPoint& p) {
        return Complex(p.rho * std::abs(kernel.reduced(p.w, z)) * std::abs(f(p.w)) /
                       std::abs(1.0 - std::conj(p.w) * z));
      },
      z, 0.0, centered_options_for(map, z));
}

Complex grunsky_kernel_eval(const UnivalentMap& map, Complex z, Complex w) {
  require_interior(z, "grunsky_kernel_eval");
  require_interior(w, "grunsky_kernel_eval");
  return GrunskyKernel(map)(z, w);
}

Complex evaluate(const DiskPolynomial& f, Complex w) {
  Complex s = 0.0;
  for (const auto& m : f) s += m.coef * std::pow(w, m.a) * std::pow(std::conj(w), m.b);
  return s;
}

Complex skewed_beurling_apply(const UnivalentMap& map, double theta, const DiskPolynomial& f, Complex z) {
  if (map.name() != "identity")
    throw DomainError("skewed_beurling_apply: principal-value transform is supported for the identity map only");
  if (!(theta >= 0.0 && theta <= 2.0)) throw DomainError("skewed_beurling_apply: theta must lie in [0, 2]");
  require_interior(z, "skewed_beurling_apply");
  // d/dz of int w^a wbar^b / (w - z) dA = [a >= b+1] z^(a-b-1)/(b+1) - z^a zbar^(b+1)/(b+1).
  Complex s = 0.0;
  for (const auto& m : f) {
    if (m.a < 0 || m.b < 0) throw DomainError("skewed_beurling_apply: exponents must be non-negative");
    const double b1 = m.b + 1.0;
    Complex v = 0.0;
    if (m.a >= m.b + 2) v += double(m.a - m.b - 1) * std::pow(z, m.a - m.b - 2) / b1;
    if (m.a >= 1) v -= double(m.a) * std::pow(z, m.a - 1) * std::pow(std::conj(z), m.b + 1) / b1;
    s += m.coef * v;
  }
  return s;
}

}  // namespace diskspec
