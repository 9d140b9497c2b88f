#pragma once

// Catalog of certified univalent maps of the unit disk.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diskspec/core.hpp"

namespace diskspec {

enum class MapClass { S, Sb, Other };

std::string to_string(MapClass c);

/// phi and its first four derivatives at one point.
struct MapJet {
  Complex value;
  Complex d1;
  Complex d2;
  Complex d3;
  Complex d4;
};

namespace detail {

/// Analytic model behind a catalog entry. Implementations are immutable.
class MapModel {
 public:
  virtual ~MapModel() = default;
  virtual Complex eval(Complex z) const = 0;
  virtual MapJet jet(Complex z) const = 0;
  virtual Complex deriv(Complex z) const { return jet(z).d1; }
  /// Globally continuous branch of log phi' with log phi'(0) = 0.
  virtual Complex log_deriv(Complex z) const = 0;
  /// Continuous branch of log(phi(z)/z), zero at the origin.
  virtual Complex log_phi_over_z(Complex z) const;
  /// (phi(z) - phi(w)) / (z - w); closed forms may override the generic path.
  virtual Complex divided_difference(Complex z, Complex w) const;
  /// Taylor coefficients a_0 .. a_{n-1}.
  virtual std::vector<Complex> taylor(int n) const = 0;
};

}  // namespace detail

/// Result of the Becker univalence check: sup of (1-|z|^2)|z phi''/phi'|.
struct BeckerCertificate {
  std::string map_name;
  double sup_value = 0.0;
  double tail_bound = 0.0;
  int grid_size = 0;
  bool derivative_vanished = false;

  static constexpr double kThreshold = 0.9;
  bool valid() const {
    return !derivative_vanished && sup_value + tail_bound <= kThreshold;
  }
};

class UnivalentMap {
 public:
  UnivalentMap(std::string name, std::string spec, MapClass cls,
               std::shared_ptr<const detail::MapModel> model);

  const std::string& name() const { return name_; }
  /// Canonical "name:key=value,..." form accepted by parse_map_spec.
  const std::string& spec() const { return spec_; }
  MapClass map_class() const { return class_; }
  bool in_class_S() const { return class_ == MapClass::S || class_ == MapClass::Sb; }
  bool is_bounded() const { return bounded_; }
  /// sup |phi| over the disk (estimate; exact for closed-form entries).
  double sup_norm() const { return sup_norm_; }
  bool sup_norm_empirical() const { return sup_norm_empirical_; }

  /// Boundary angles where phi' vanishes or blows up; quadrature clusters nodes there.
  const std::vector<double>& singular_angles() const { return singular_angles_; }
  /// Boundary angles where phi'/(phi - c) has a pole (phi unbounded there).
  const std::vector<double>& boundary_poles() const { return boundary_poles_; }
  const std::optional<BeckerCertificate>& certificate() const { return certificate_; }
  /// Highest angular frequency with non-negligible amplitude near the circle
  /// (0 when the map has no such structure); sets minimum sampling densities.
  int bandwidth() const { return bandwidth_; }

  Complex eval(Complex z) const { return model_->eval(z); }
  Complex operator()(Complex z) const { return model_->eval(z); }
  MapJet jet(Complex z) const { return model_->jet(z); }
  Complex deriv(Complex z) const { return model_->deriv(z); }
  Complex deriv2(Complex z) const { return model_->jet(z).d2; }
  Complex log_deriv(Complex z) const { return model_->log_deriv(z); }
  Complex log_phi_over_z(Complex z) const { return model_->log_phi_over_z(z); }
  Complex divided_difference(Complex z, Complex w) const {
    return model_->divided_difference(z, w);
  }
  std::vector<Complex> taylor(int n) const { return model_->taylor(n); }

  // Catalog construction helpers.
  UnivalentMap& set_bounded(bool bounded, double sup_norm, bool empirical);
  UnivalentMap& set_singular_angles(std::vector<double> angles);
  UnivalentMap& set_boundary_poles(std::vector<double> angles);
  UnivalentMap& set_certificate(BeckerCertificate cert);
  UnivalentMap& set_bandwidth(int b);

 private:
  std::string name_;
  std::string spec_;
  MapClass class_;
  std::shared_ptr<const detail::MapModel> model_;
  bool bounded_ = false;
  double sup_norm_ = 0.0;
  bool sup_norm_empirical_ = false;
  std::vector<double> singular_angles_;
  std::vector<double> boundary_poles_;
  std::optional<BeckerCertificate> certificate_;
  int bandwidth_ = 0;
};

using MapParams = std::map<std::string, double>;

/// Catalog entries: identity, halfsquare, monomial_perturb(a, n), koebe,
/// becker_lacunary(c, K). Throws DomainError for unknown names, parameters
/// out of range, or a failed univalence certificate.
UnivalentMap catalog_get(const std::string& name, const MapParams& params = {});

/// Parses "name" or "name:key=value,key=value".
UnivalentMap parse_map_spec(const std::string& spec);

std::vector<std::string> catalog_names();

/// Becker check on a graded polar grid (radii 1 - 2^-s up to s = 20).
BeckerCertificate becker_check(const UnivalentMap& map, int grid_size);

/// Becker sup for the lacunary family via its exact radial majorant
/// F(r) = (1-r^2)|c| sum_k 2^k r^(2^k), adjoined with a discretisation bound.
BeckerCertificate becker_check_lacunary(double c, int K, int grid_size);

/// Branch of log phi' on the circle |z| = r, continued from log phi'(0) = 0.
struct LogDerivativeTrace {
  double radius = 0.0;
  std::vector<double> angles;
  std::vector<Complex> values;
};

LogDerivativeTrace log_derivative_trace(const UnivalentMap& map, double r, int n_angles);

}  // namespace diskspec
