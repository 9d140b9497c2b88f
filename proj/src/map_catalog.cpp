#include "diskspec/map_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diskspec/quadrature.hpp"

namespace diskspec {

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::S: return "S";
    case MapClass::Sb: return "S_b";
    case MapClass::Other: return "other";
  }
  return "other";
}

namespace detail {

Complex MapModel::log_phi_over_z(Complex z) const {
  if (std::abs(z) < 1e-8) {
    const MapJet j = jet(0.0);
    return z * j.d2 / 2.0;
  }
  return std::log(eval(z) / z);
}

Complex MapModel::divided_difference(Complex z, Complex w) const {
  const Complex d = w - z;
  const double scale = std::max(1e-300, 1.0 - std::max(std::abs(z), std::abs(w)));
  if (std::abs(d) < 1e-3 * scale) {
    const MapJet j = jet(z);
    return j.d1 + d * (j.d2 / 2.0 + d * (j.d3 / 6.0 + d * j.d4 / 24.0));
  }
  return (eval(w) - eval(z)) / d;
}

}  // namespace detail

namespace {

Complex ipow(Complex z, unsigned n) {
  Complex result = 1.0;
  while (n) {
    if (n & 1u) result *= z;
    z *= z;
    n >>= 1u;
  }
  return result;
}

class IdentityModel final : public detail::MapModel {
 public:
  Complex eval(Complex z) const override { return z; }
  MapJet jet(Complex z) const override { return {z, 1.0, 0.0, 0.0, 0.0}; }
  Complex log_deriv(Complex) const override { return 0.0; }
  Complex log_phi_over_z(Complex) const override { return 0.0; }
  Complex divided_difference(Complex, Complex) const override { return 1.0; }
  std::vector<Complex> taylor(int n) const override {
    std::vector<Complex> a(std::max(n, 0), 0.0);
    if (n > 1) a[1] = 1.0;
    return a;
  }
};

// z + a z^n; phi' = 1 + n a z^(n-1). halfsquare is a = -1/2, n = 2.
class MonomialModel final : public detail::MapModel {
 public:
  MonomialModel(Complex a, int n) : a_(a), n_(n) {}
  Complex eval(Complex z) const override { return z + a_ * ipow(z, n_); }
  MapJet jet(Complex z) const override {
    const double n = n_;
    auto term = [&](int k, double c) { return n_ - k >= 0 ? c * a_ * ipow(z, n_ - k) : Complex(0.0); };
    return {eval(z), 1.0 + term(1, n), term(2, n * (n - 1)), term(3, n * (n - 1) * (n - 2)),
            term(4, n * (n - 1) * (n - 2) * (n - 3))};
  }
  Complex log_deriv(Complex z) const override {
    // |n a z^(n-1)| < 1 keeps 1 + n a z^(n-1) in the right half plane for the
    // catalog ranges; halfsquare has |1 - z| with Re > 0 on the disk.
    return std::log(1.0 + double(n_) * a_ * ipow(z, n_ - 1));
  }
  Complex log_phi_over_z(Complex z) const override { return std::log(1.0 + a_ * ipow(z, n_ - 1)); }
  Complex divided_difference(Complex z, Complex w) const override {
    // (z^n - w^n)/(z - w) = sum_{i+j=n-1} z^i w^j
    Complex s = 0.0;
    for (int i = 0; i < n_; ++i) s += ipow(z, i) * ipow(w, n_ - 1 - i);
    return 1.0 + a_ * s;
  }
  std::vector<Complex> taylor(int n) const override {
    std::vector<Complex> c(std::max(n, 0), 0.0);
    if (n > 1) c[1] = 1.0;
    if (n > n_) c[n_] += a_;
    return c;
  }

 private:
  Complex a_;
  int n_;
};

class KoebeModel final : public detail::MapModel {
 public:
  Complex eval(Complex z) const override {
    const Complex q = 1.0 - z;
    return z / (q * q);
  }
  MapJet jet(Complex z) const override {
    const Complex q = 1.0 - z;
    const Complex q2 = q * q, q3 = q2 * q, q4 = q3 * q;
    return {z / q2, (1.0 + z) / q3, (4.0 + 2.0 * z) / q4, (18.0 + 6.0 * z) / (q4 * q),
            (96.0 + 24.0 * z) / (q4 * q2)};
  }
  Complex log_deriv(Complex z) const override { return std::log(1.0 + z) - 3.0 * std::log(1.0 - z); }
  Complex log_phi_over_z(Complex z) const override { return -2.0 * std::log(1.0 - z); }
  Complex divided_difference(Complex z, Complex w) const override {
    const Complex p = 1.0 - z, q = 1.0 - w;
    return (1.0 - z * w) / (p * p * q * q);
  }
  std::vector<Complex> taylor(int n) const override {
    std::vector<Complex> a(std::max(n, 0));
    for (int k = 0; k < n; ++k) a[k] = double(k);
    return a;
  }
};

// log phi' = h(z) = c sum_{k=1..K} z^(2^k), phi(z) = z int_0^1 exp(h(tz)) dt.
class LacunaryModel final : public detail::MapModel {
 public:
  LacunaryModel(double c, int K) : c_(c), K_(K) {
    coef_ = taylor(kSeriesTerms);
    for (const auto& a : coef_) coef_max_ = std::max(coef_max_, std::abs(a));
  }

  // h and its first three derivatives.
  std::array<Complex, 4> h_jet(Complex z) const {
    std::array<Complex, 4> out{0.0, 0.0, 0.0, 0.0};
    if (z == Complex(0.0)) return out;
    Complex zm = z;  // z^(2^k)
    const Complex zi = 1.0 / z;
    for (int k = 1; k <= K_; ++k) {
      zm *= zm;
      const double m = std::ldexp(1.0, k);
      if (std::abs(zm) < 1e-300) break;
      out[0] += zm;
      out[1] += m * zm * zi;
      out[2] += m * (m - 1) * zm * zi * zi;
      out[3] += m * (m - 1) * (m - 2) * zm * zi * zi * zi;
    }
    for (auto& v : out) v *= c_;
    return out;
  }

  Complex h(Complex z) const {
    Complex zm = z, s = 0.0;
    for (int k = 1; k <= K_; ++k) {
      zm *= zm;
      s += zm;
      if (std::abs(zm) < 1e-300) break;
    }
    return c_ * s;
  }

  Complex eval(Complex z) const override {
    if (z == Complex(0.0)) return 0.0;
    // Panels [1 - 2^-j, 1 - 2^-(j+1)] in t resolve the transition scale
    // 2^-k of the terms that are still visible at radius |z|.
    const double r = std::abs(z);
    // Truncated Taylor sum when the tail bound coef_max r^(d+1) / (1 - r) is negligible.
    if (r < 1.0) {
      const double d = std::ceil(std::log(1e-17 * r * (1.0 - r) / coef_max_) / std::log(r));
      if (d < kSeriesTerms - 1) {
        Complex acc = 0.0;
        for (int m = std::max(int(d), 1); m >= 1; --m) acc = acc * z + coef_[m];
        return acc * z;
      }
    }
    int levels = 1;
    for (int k = 1; k <= K_; ++k) {
      if (std::pow(r, std::ldexp(1.0, k)) > 1e-18) levels = k + 2;
    }
    const auto& gl = gauss_legendre(20);
    CompensatedSum<Complex> s;
    for (int j = 0; j <= levels; ++j) {
      const double a = j == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -j);
      const double b = j == levels ? 1.0 : 1.0 - std::ldexp(1.0, -j - 1);
      for (int i = 0; i < gl.size(); ++i) {
        const double t = a + (b - a) * (gl.nodes(i) + 1.0) / 2.0;
        s.add(gl.weights(i) * (b - a) / 2.0 * std::exp(h(t * z)));
      }
    }
    return z * s.value();
  }

  MapJet jet(Complex z) const override {
    const auto hj = h_jet(z);
    const Complex e = std::exp(hj[0]);
    const Complex h1 = hj[1], h2 = hj[2], h3 = hj[3];
    return {eval(z), e, h1 * e, (h2 + h1 * h1) * e, (h3 + 3.0 * h1 * h2 + h1 * h1 * h1) * e};
  }

  Complex log_deriv(Complex z) const override { return h(z); }
  Complex deriv(Complex z) const override { return std::exp(h(z)); }

  Complex log_phi_over_z(Complex z) const override {
    if (std::abs(c_) * K_ < kPi / 2) {
      // |Im h| < pi/2 puts exp(h) and its averages in the right half plane.
      return detail::MapModel::log_phi_over_z(z);
    }
    // Continue radially from 0 otherwise.
    const int steps = 64;
    Complex acc = 0.0;
    Complex prev = 1.0;
    for (int s = 1; s <= steps; ++s) {
      const Complex zs = z * (double(s) / steps);
      const Complex cur = eval(zs) / zs;
      acc += std::log(cur / prev);
      prev = cur;
    }
    return acc;
  }

  std::vector<Complex> taylor(int n) const override {
    // f = exp(h): m f_m = sum_{k=1}^m k h_k f_{m-k}; phi coefficients a_{m+1} = f_m / (m+1).
    std::vector<Complex> a(std::max(n, 0), 0.0);
    if (n < 2) return a;
    const int m_max = n - 2;
    std::vector<Complex> f(m_max + 1, 0.0);
    f[0] = 1.0;
    for (int m = 1; m <= m_max; ++m) {
      Complex s = 0.0;
      for (int k = 1; k <= K_; ++k) {
        const int deg = 1 << k;
        if (deg > m) break;
        s += double(deg) * c_ * f[m - deg];
      }
      f[m] = s / double(m);
    }
    for (int m = 0; m <= m_max; ++m) a[m + 1] = f[m] / double(m + 1);
    return a;
  }

 private:
  static constexpr int kSeriesTerms = 8193;
  double c_;
  int K_;
  std::vector<Complex> coef_;
  double coef_max_ = 0.0;
};

double param(const MapParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

UnivalentMap::UnivalentMap(std::string name, std::string spec, MapClass cls,
                           std::shared_ptr<const detail::MapModel> model)
    : name_(std::move(name)), spec_(std::move(spec)), class_(cls), model_(std::move(model)) {}

UnivalentMap& UnivalentMap::set_bounded(bool bounded, double sup_norm, bool empirical) {
  bounded_ = bounded;
  sup_norm_ = sup_norm;
  sup_norm_empirical_ = empirical;
  return *this;
}
UnivalentMap& UnivalentMap::set_singular_angles(std::vector<double> angles) {
  singular_angles_ = std::move(angles);
  return *this;
}
UnivalentMap& UnivalentMap::set_boundary_poles(std::vector<double> angles) {
  boundary_poles_ = std::move(angles);
  return *this;
}
UnivalentMap& UnivalentMap::set_certificate(BeckerCertificate cert) {
  certificate_ = std::move(cert);
  return *this;
}

UnivalentMap& UnivalentMap::set_bandwidth(int b) {
  bandwidth_ = b;
  return *this;
}

std::vector<std::string> catalog_names() {
  return {"identity", "halfsquare", "monomial_perturb", "koebe", "becker_lacunary"};
}

UnivalentMap catalog_get(const std::string& name, const MapParams& params) {
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
        throw DomainError("catalog_get: unknown parameter '" + k + "' for map " + name);
    }
  };
  if (name == "identity") {
    reject_unknown({});
    UnivalentMap m("identity", "identity", MapClass::Sb, std::make_shared<IdentityModel>());
    m.set_bounded(true, 1.0, false);
    return m;
  }
  if (name == "halfsquare") {
    reject_unknown({});
    // Re phi' = Re(1 - z) > 0 certifies univalence; sup |z - z^2/2| = 3/2 at z = -1.
    UnivalentMap m("halfsquare", "halfsquare", MapClass::Sb, std::make_shared<MonomialModel>(-0.5, 2));
    m.set_bounded(true, 1.5, false).set_singular_angles({0.0});
    return m;
  }
  if (name == "monomial_perturb") {
    reject_unknown({"a", "n"});
    const double a = param(params, "a", 0.25);
    const double nd = param(params, "n", 2);
    const int n = static_cast<int>(nd);
    if (nd != n || n < 2) throw DomainError("monomial_perturb: n must be an integer >= 2");
    if (std::abs(a) > 1.0 / (2.0 * n)) throw DomainError("monomial_perturb: requires |a| <= 1/(2n)");
    const std::string spec = "monomial_perturb:a=" + format_number(a) + ",n=" + std::to_string(n);
    UnivalentMap m("monomial_perturb", spec, MapClass::Sb, std::make_shared<MonomialModel>(a, n));
    m.set_bounded(true, 1.0 + std::abs(a), false);
    return m;
  }
  if (name == "koebe") {
    reject_unknown({});
    UnivalentMap m("koebe", "koebe", MapClass::S, std::make_shared<KoebeModel>());
    m.set_bounded(false, std::numeric_limits<double>::infinity(), false)
        .set_singular_angles({0.0, kPi})
        .set_boundary_poles({0.0});
    return m;
  }
  if (name == "becker_lacunary") {
    reject_unknown({"c", "K"});
    const double c = param(params, "c", 0.1);
    const double kd = param(params, "K", 12);
    const int K = static_cast<int>(kd);
    if (kd != K || K < 1 || K > 40) throw DomainError("becker_lacunary: K must be an integer in [1, 40]");
    BeckerCertificate cert = becker_check_lacunary(c, K, 4096);
    if (!cert.valid()) {
      std::ostringstream os;
      os << "becker_lacunary: univalence certificate failed, sup_value = " << cert.sup_value
         << ", tail_bound = " << cert.tail_bound;
      throw DomainError(os.str());
    }
    const std::string spec = "becker_lacunary:c=" + format_number(c) + ",K=" + std::to_string(K);
    auto model = std::make_shared<LacunaryModel>(c, K);
    UnivalentMap m("becker_lacunary", spec, MapClass::Sb, model);
    cert.map_name = spec;
    // Boundedness probe: max |phi| over circles 1 - 2^-k, k <= 20.
    double sup = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double r = 1.0 - std::ldexp(1.0, -k);
      for (int j = 0; j < 64; ++j) sup = std::max(sup, std::abs(model->eval(std::polar(r, 2 * kPi * j / 64))));
    }
    m.set_bounded(true, sup, true).set_certificate(cert).set_bandwidth(1 << std::min(K, 24));
    return m;
  }
  throw DomainError("catalog_get: unknown map '" + name + "'");
}

UnivalentMap parse_map_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  MapParams params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw DomainError("map spec: expected key=value, got '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(val, &used);
      } catch (const std::exception&) {
        throw DomainError("map spec: bad number '" + val + "'");
      }
      if (used != val.size()) throw DomainError("map spec: bad number '" + val + "'");
      params[key] = v;
    }
  }
  return catalog_get(name, params);
}

BeckerCertificate becker_check(const UnivalentMap& map, int grid_size) {
  if (grid_size < 8) throw DomainError("becker_check: grid_size must be >= 8");
  BeckerCertificate cert;
  cert.map_name = map.spec();
  cert.grid_size = grid_size;
  const int n_radii = grid_size;
  const int n_angles = grid_size;
  // Radii 1 - 2^-s, s in (0, 20]; angles uniform including 0.
  std::vector<double> values(std::size_t(n_radii) * n_angles);
  std::vector<char> vanished(values.size(), 0);
  parallel_for(n_radii, [&](std::size_t i) {
    const double s = 20.0 * double(i + 1) / n_radii;
    const double r = 1.0 - std::exp2(-s);
    for (int j = 0; j < n_angles; ++j) {
      const Complex z = std::polar(r, -kPi + 2 * kPi * j / n_angles);
      const MapJet jt = map.jet(z);
      const std::size_t idx = i * n_angles + j;
      if (std::abs(jt.d1) == 0.0) {
        vanished[idx] = 1;
        continue;
      }
      values[idx] = (1.0 - r * r) * std::abs(z * jt.d2 / jt.d1);
    }
  });
  double sup = 0.0, variation = 0.0;
  for (int i = 0; i < n_radii; ++i) {
    for (int j = 0; j < n_angles; ++j) {
      const std::size_t idx = std::size_t(i) * n_angles + j;
      if (vanished[idx]) cert.derivative_vanished = true;
      sup = std::max(sup, values[idx]);
      const std::size_t right = std::size_t(i) * n_angles + (j + 1) % n_angles;
      variation = std::max(variation, std::abs(values[idx] - values[right]));
      if (i + 1 < n_radii) variation = std::max(variation, std::abs(values[idx] - values[idx + n_angles]));
    }
  }
  cert.sup_value = sup;
  // Between grid points the value can exceed its neighbours by at most the
  // local variation; the outer annulus beyond 1 - 2^-20 is covered by the
  // same estimate at the last ring.
  cert.tail_bound = variation;
  return cert;
}

BeckerCertificate becker_check_lacunary(double c, int K, int grid_size) {
  BeckerCertificate cert;
  cert.grid_size = grid_size;
  const double ac = std::abs(c);
  auto F = [&](double r) {
    double s = 0.0;
    for (int k = 1; k <= K; ++k) s += std::ldexp(1.0, k) * std::pow(r, std::ldexp(1.0, k));
    return (1.0 - r * r) * ac * s;
  };
  auto dF = [&](double r) {
    double s = 0.0, ds = 0.0;
    for (int k = 1; k <= K; ++k) {
      const double m = std::ldexp(1.0, k);
      s += m * std::pow(r, m);
      ds += m * m * std::pow(r, m - 1.0);
    }
    return ac * (-2.0 * r * s + (1.0 - r * r) * ds);
  };
  // Grid uniform in s with r = 1 - 2^-s on s in [0, 24].
  const double s_max = 24.0;
  double sup = 0.0, tail = 0.0;
  double r_prev = 0.0;
  double d_prev = std::abs(dF(0.0));
  for (int i = 1; i <= grid_size; ++i) {
    const double r = 1.0 - std::exp2(-s_max * double(i) / grid_size);
    const double d = std::abs(dF(r));
    sup = std::max(sup, F(r));
    tail = std::max(tail, 2.0 * std::max(d, d_prev) * (r - r_prev) / 2.0);
    r_prev = r;
    d_prev = d;
  }
  // Beyond the last ring F(r) <= 2 (1 - r) |c| sum 2^k.
  tail = std::max(tail, 2.0 * std::exp2(-s_max) * ac * std::ldexp(1.0, K + 1));
  cert.sup_value = sup;
  cert.tail_bound = tail;
  return cert;
}

namespace {

// Adds arg(b / a) to the branch, bisecting the path while a step is >= pi/2.
Complex continue_branch(const UnivalentMap& map, Complex from, Complex to, Complex d_from, int depth) {
  const Complex d_to = map.deriv(to);
  if (d_to == Complex(0.0) || d_from == Complex(0.0))
    throw NumericalError("log_derivative_trace: derivative vanishes on the path");
  const double step = std::arg(d_to / d_from);
  if (std::abs(step) < kPi / 2) return {std::log(std::abs(d_to)) - std::log(std::abs(d_from)), step};
  if (depth >= 48)
    throw NumericalError("log_derivative_trace: branch step >= pi/2 after refinement cap (near-zero derivative)");
  const Complex mid = 0.5 * (from + to);
  const Complex d_mid = map.deriv(mid);
  return continue_branch(map, from, mid, d_from, depth + 1) + continue_branch(map, mid, to, d_mid, depth + 1);
}

}  // namespace

LogDerivativeTrace log_derivative_trace(const UnivalentMap& map, double r, int n_angles) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("log_derivative_trace: radius must lie in (0, 1)");
  if (n_angles < 256 || (n_angles & (n_angles - 1)) != 0)
    throw DomainError("log_derivative_trace: n_angles must be a power of two >= 256");
  LogDerivativeTrace trace;
  trace.radius = r;
  trace.angles.resize(n_angles);
  trace.values.resize(n_angles);
  for (int k = 0; k < n_angles; ++k) trace.angles[k] = -kPi + 2 * kPi * k / n_angles;

  // Radial leg [0, r e^{-i pi}] in 1024 steps.
  Complex value = 0.0;
  Complex prev_z = 0.0;
  Complex prev_d = map.deriv(0.0);
  const Complex dir = std::polar(1.0, trace.angles[0]);
  for (int s = 1; s <= 1024; ++s) {
    const Complex z = dir * (r * s / 1024.0);
    value += continue_branch(map, prev_z, z, prev_d, 0);
    prev_z = z;
    prev_d = map.deriv(z);
  }
  // Real part recomputed exactly; the imaginary part carries the branch.
  auto finalize = [&](Complex v, Complex d) { return Complex(std::log(std::abs(d)), v.imag()); };
  trace.values[0] = finalize(value, prev_d);
  for (int k = 1; k < n_angles; ++k) {
    // Arc steps along the circle: subdivide the chord path through the arc midpoint.
    const Complex z = std::polar(r, trace.angles[k]);
    const int sub = 4;
    for (int q = 1; q <= sub; ++q) {
      const double th = trace.angles[k - 1] + (trace.angles[k] - trace.angles[k - 1]) * q / sub;
      const Complex zq = std::polar(r, th);
      value += continue_branch(map, prev_z, zq, prev_d, 0);
      prev_z = zq;
      prev_d = map.deriv(zq);
    }
    (void)z;
    trace.values[k] = finalize(value, prev_d);
  }
  return trace;
}

}  // namespace diskspec
