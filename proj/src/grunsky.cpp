#include "diskspec/grunsky.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "diskspec/quadrature.hpp"
#include "diskspec/transforms.hpp"

namespace diskspec {

double default_grunsky_radius(int N) {
  return std::clamp(std::pow(10.0, -6.0 / (2.0 * N)), 0.3, 0.95);
}

namespace {

// Continuous log of a zero-free sampled function; throws on a jump >= pi/2.
Complex continue_log(Complex prev_log, Complex prev, Complex cur) {
  const Complex step = std::log(cur / prev);
  if (std::abs(step.imag()) >= kPi / 2)
    throw NumericalError("extract_grunsky: branch discontinuity on the sample torus (reduce rho)");
  return prev_log + step;
}

Eigen::MatrixXcd sample_coefficients(const UnivalentMap& map, int N, double rho) {
  const int M = 4 * N;
  std::vector<Complex> circle(M);
  for (int j = 0; j < M; ++j) circle[j] = std::polar(rho, 2 * kPi * j / M);

  Eigen::MatrixXcd dd(M, M);
  parallel_for(std::size_t(M), [&](std::size_t j) {
    for (int k = 0; k < M; ++k) dd(j, k) = map.divided_difference(circle[j], circle[k]);
  });

  // Anchor at (0, 0), where the quotient is phi'(0) = 1, then walk to (rho, rho).
  Eigen::MatrixXcd G(M, M);
  {
    Complex prev = map.divided_difference(0.0, 0.0);
    Complex acc = std::log(prev);
    const int steps = 64;
    for (int s = 1; s <= steps; ++s) {
      const double t = rho * s / steps;
      const Complex cur = s == steps ? dd(0, 0) : map.divided_difference(t, t);
      acc = continue_log(acc, prev, cur);
      prev = cur;
    }
    G(0, 0) = acc;
  }
  for (int j = 0; j < M; ++j) {
    if (j > 0) G(j, 0) = continue_log(G(j - 1, 0), dd(j - 1, 0), dd(j, 0));
    for (int k = 1; k < M; ++k) G(j, k) = continue_log(G(j, k - 1), dd(j, k - 1), dd(j, k));
    // Closing the row must return to the starting value (no winding).
    const Complex closed = continue_log(G(j, M - 1), dd(j, M - 1), dd(j, 0));
    if (std::abs(closed - G(j, 0)) > 1e-6)
      throw NumericalError("extract_grunsky: branch winds around the sample torus (reduce rho)");
  }

  Eigen::FFT<double> fft;
  Eigen::MatrixXcd F(M, M);
  std::vector<Complex> in(M), out(M);
  for (int j = 0; j < M; ++j) {
    for (int k = 0; k < M; ++k) in[k] = G(j, k);
    fft.fwd(out, in);
    for (int k = 0; k < M; ++k) F(j, k) = out[k];
  }
  for (int k = 0; k < M; ++k) {
    for (int j = 0; j < M; ++j) in[j] = F(j, k);
    fft.fwd(out, in);
    for (int j = 0; j < M; ++j) F(j, k) = out[j];
  }

  Eigen::MatrixXcd b(N + 1, N + 1);
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) b(m, n) = F(m, n) / (double(M) * M * std::pow(rho, m + n));
  return b;
}

}  // namespace

GrunskyMatrix extract_grunsky(const UnivalentMap& map, int N, double rho) {
  if (!map.in_class_S()) throw DomainError("extract_grunsky: map must be in class S");
  if (N < 1 || N > 256) throw DomainError("extract_grunsky: N must lie in [1, 256]");
  if (!(rho >= 0.3 && rho <= 0.95)) throw DomainError("extract_grunsky: rho must lie in [0.3, 0.95]");
  GrunskyMatrix g;
  g.N = N;
  g.sample_radius = rho;
  g.b = sample_coefficients(map, N, rho);
  g.second_radius = rho - 0.05 >= 0.3 ? rho - 0.05 : rho + 0.05;
  const Eigen::MatrixXcd b2 = sample_coefficients(map, N, g.second_radius);
  g.coefficient_error_bound = (g.b - b2).cwiseAbs().maxCoeff();
  g.c.resize(N, N);
  for (int m = 1; m <= N; ++m)
    for (int n = 1; n <= N; ++n) g.c(m - 1, n - 1) = std::sqrt(double(m) * n) * g.b(m, n);
  return g;
}

GrunskyMatrix extract_grunsky(const UnivalentMap& map, int N) {
  return extract_grunsky(map, N, default_grunsky_radius(N));
}

GrunskyNorm grunsky_norm(const Eigen::MatrixXcd& c, double tol, int max_iter) {
  GrunskyNorm out;
  if (c.size() == 0) {
    out.converged = true;
    return out;
  }
  const Eigen::MatrixXcd A = c.adjoint() * c;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(c.cols()) / std::sqrt(double(c.cols()));
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXcd u = A * v;
    const double nu = u.norm();
    out.iterations = it;
    if (nu == 0.0) {
      lambda = 0.0;
      out.converged = true;
      break;
    }
    u /= nu;
    const double next = nu;
    const bool done = std::abs(next - lambda) <= tol * std::max(next, 1e-300);
    lambda = next;
    v = u;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.value = std::sqrt(lambda);
  return out;
}

GrunskyNorm grunsky_norm(const GrunskyMatrix& m, double tol, int max_iter) { return grunsky_norm(m.c, tol, max_iter); }

ActionCrosscheck grunsky_action_crosscheck(const UnivalentMap& map, int n, const std::vector<Complex>& z_list, int N) {
  if (n < 0 || n > 8) throw DomainError("grunsky_action_crosscheck: n must lie in [0, 8]");
  if (N < n + 2) throw DomainError("grunsky_action_crosscheck: truncation too small for n");
  ActionCrosscheck rep;
  rep.n = n;
  rep.z_list = z_list;
  const GrunskyMatrix g = extract_grunsky(map, N);
  const GrunskyKernel kernel(map);
  rep.quadrature.resize(z_list.size());
  rep.matrix_model.resize(z_list.size());
  for (std::size_t i = 0; i < z_list.size(); ++i) {
    const Complex z = z_list[i];
    if (!(std::abs(z) < 1.0)) throw DomainError("grunsky_action_crosscheck: z must lie in the disk");
    // The kernel is holomorphic in w: the circle means of G(z, w) wbar^n are
    // multiples of r^(2n), integrated exactly by Gauss-Legendre order n + 2 in r.
    const auto& gl = gauss_legendre(n + 2);
    CompensatedSum<Complex> acc;
    QuadratureResult q;
    for (int k = 0; k < gl.size(); ++k) {
      const double r = (gl.nodes(k) + 1.0) / 2.0;
      const QuadratureResult m = integrate_circle(
          [&](double t) {
            const Complex w = std::polar(r, t);
            return kernel(z, w) * std::pow(std::conj(w), n);
          },
          CircleOptions{1e-12, 64, 1 << 18, 1, std::nullopt});
      acc.add(gl.weights(k) * r * m.value);
      q.converged = q.converged && m.converged;
    }
    q.value = acc.value();
    rep.quadrature[i] = q.value;
    rep.converged = rep.converged && q.converged;
    Complex s = 0.0;
    for (int m = N - 1; m >= 0; --m) s = s * z + double(m + 1) * g.b(m + 1, n + 1);
    rep.matrix_model[i] = s;
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(q.value - s));
  }
  return rep;
}

void write_grunsky_csv(const GrunskyMatrix& m, std::ostream& os) {
  os << "row,col,re,im\n";
  os.precision(17);
  for (int i = 0; i < m.N; ++i)
    for (int j = 0; j < m.N; ++j)
      os << i + 1 << ',' << j + 1 << ',' << m.c(i, j).real() << ',' << m.c(i, j).imag() << '\n';
}

}  // namespace diskspec
