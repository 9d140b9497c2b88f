#pragma once

// Cauchy-type area transforms on the disk and their pull-backs through a map.

#include <vector>

#include "diskspec/map_catalog.hpp"
#include "diskspec/quadrature.hpp"

namespace diskspec {

/// K(w, z) = phi'(w) / (phi(w) - phi(z)).
class TransferredKernel {
 public:
  explicit TransferredKernel(UnivalentMap map, double eta = 1e-3);

  const UnivalentMap& map() const { return map_; }
  double eta() const { return eta_; }

  Complex operator()(Complex w, Complex z) const;
  /// (w - z) K(w, z) = phi'(w) / divided difference; bounded on the diagonal.
  Complex reduced(Complex w, Complex z) const;
  /// K(w, z) - 1/(w - z); Taylor model inside |w - z| < eta (1 - |z|).
  Complex regular_part(Complex w, Complex z) const;
  Complex regular_part_direct(Complex w, Complex z) const;
  Complex regular_part_model(Complex w, Complex z) const;

 private:
  UnivalentMap map_;
  double eta_;
};

/// K(z, w) = phi'(z) phi'(w) / (phi(z) - phi(w))^2 - 1/(z - w)^2, with the
/// value S_phi(m)/6 at the midpoint m near the diagonal.
class GrunskyKernel {
 public:
  explicit GrunskyKernel(UnivalentMap map, double eta = 1e-4);

  const UnivalentMap& map() const { return map_; }
  Complex operator()(Complex z, Complex w) const;
  Complex direct(Complex z, Complex w) const;
  /// Schwarzian derivative divided by 6.
  Complex diagonal(Complex z) const;

 private:
  UnivalentMap map_;
  double eta_;
};

Complex schwarzian(const UnivalentMap& map, Complex z);

/// Quadrature settings adapted to the map (boundary pole grading) and to the
/// distance of z from the circle.
CenteredOptions centered_options_for(const UnivalentMap& map, Complex z);

/// int f(w) / (w - z) dA(w).
QuadratureResult cauchy_transform(const DiskFunction& f, Complex z, const CenteredOptions& opts = {});

/// int K(w, z) g(w) dA(w).
QuadratureResult transferred_cauchy(const UnivalentMap& map, const DiskFunction& g, Complex z);

/// int K(w, z) (zbar - wbar)/(1 - wbar z) f(w) dA(w).
QuadratureResult tilde_transferred(const UnivalentMap& map, const DiskFunction& f, Complex z);

/// int |K(w, z) (zbar - wbar)/(1 - wbar z)| |f(w)| dA(w).
QuadratureResult hat_transferred(const UnivalentMap& map, const DiskFunction& f, Complex z);

Complex grunsky_kernel_eval(const UnivalentMap& map, Complex z, Complex w);

/// Finite combination of coef * w^a * wbar^b.
struct DiskMonomial {
  Complex coef;
  int a = 0;
  int b = 0;
};
using DiskPolynomial = std::vector<DiskMonomial>;

Complex evaluate(const DiskPolynomial& f, Complex w);

/// Principal-value transform pv int phi'(z)^theta phi'(w)^(2-theta) f(w) /
/// (phi(z) - phi(w))^2 dA(w) by monomial reduction. Identity map only.
Complex skewed_beurling_apply(const UnivalentMap& map, double theta, const DiskPolynomial& f, Complex z);

}  // namespace diskspec
