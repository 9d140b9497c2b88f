#include "doctest.h"
#include "oracles.hpp"

#include "diskspec/quadrature.hpp"
#include "diskspec/transforms.hpp"

using namespace diskspec;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 16, 64}) {
    const auto& g = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; d += std::max(1, n / 4)) {
      double s = 0.0;
      for (int i = 0; i < g.size(); ++i) s += g.weights(i) * std::pow(g.nodes(i), d);
      const double exact = d % 2 == 0 ? 2.0 / (d + 1) : 0.0;
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("Gauss-Jacobi moments match Beta functions") {
  for (double a : {-0.5, 0.0, 1.0, 2.5})
    for (double b : {0.0, 0.7}) {
      const auto& g = gauss_jacobi_cached(12, a, b);
      for (int k = 0; k <= 20; k += 4) {
        // int_{-1}^{1} (1-x)^a (1+x)^(b+k) dx = 2^(a+b+k+1) B(a+1, b+k+1)
        double s = 0.0;
        for (int i = 0; i < g.size(); ++i) s += g.weights(i) * std::pow(1.0 + g.nodes(i), k);
        const double exact =
            std::exp((a + b + k + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + k + 1) - std::lgamma(a + b + k + 2));
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
      }
    }
}

TEST_CASE("radial moments of the weighted disk measure") {
  for (double alpha : {-0.5, 0.0, 1.0, 2.5})
    for (int n = 0; n <= 20; ++n) {
      const auto q = integrate_disk([n](Complex z) { return Complex(std::pow(std::norm(z), n)); }, alpha, 32, 8);
      CHECK(std::abs(q.value.real() / oracle::beta_moment(n, alpha) - 1.0) < 1e-10);
      GradedDiskOptions opts;
      opts.levels = 6;
      const auto g = integrate_disk_graded([n](Complex z) { return Complex(std::pow(std::norm(z), n)); }, alpha, opts);
      CHECK(std::abs(g.value.real() / oracle::beta_moment(n, alpha) - 1.0) < 1e-10);
    }
}

TEST_CASE("non-radial monomials integrate to zero") {
  const auto q = integrate_disk([](Complex z) { return std::pow(z, 3) * std::conj(z); }, 1.0, 24, 64);
  CHECK(std::abs(q.value) < 1e-15);
}

TEST_CASE("circle mean of the Poisson kernel is one") {
  for (double r : {0.1, 0.5, 0.9, 0.99}) {
    const auto q = integrate_circle([r](double t) { return Complex((1 - r * r) / (1 - 2 * r * std::cos(t) + r * r)); });
    CHECK(q.converged);
    CHECK(q.value.real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("clustered circle means resolve a near-singular peak") {
  const double r = 1.0 - std::ldexp(1.0, -18);
  CircleOptions opts;
  opts.clustering = CircleClustering{0.0, std::sqrt(1.0 - r)};
  // |1 - r e^{it}|^2 = (1-r)^2 + 4 r sin^2(t/2) avoids the cancellation near t = 0.
  const auto q = integrate_circle(
      [r](double t) { return Complex((1 - r * r) / ((1 - r) * (1 - r) + 4 * r * std::pow(std::sin(t / 2), 2))); }, opts);
  CHECK(q.converged);
  CHECK(q.value.real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(q.nodes <= (1 << 16));
}

TEST_CASE("Cauchy transform matches the Laurent-series oracle") {
  const std::vector<Complex> zs{{0.0, 0.0}, {0.3, 0.1}, {-0.5, 0.6}, {0.85, -0.2}};
  for (Complex z : zs) {
    CHECK(std::abs(cauchy_transform([](Complex) { return Complex(1.0); }, z).value + std::conj(z)) < 1e-10);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 0}, {0, 2}, {3, 1}, {2, 2}, {4, 0}}) {
      const auto q = cauchy_transform([a, b](Complex w) { return std::pow(w, a) * std::pow(std::conj(w), b); }, z);
      CHECK(std::abs(q.value - oracle::cauchy_monomial(a, b, z)) < 1e-10);
    }
  }
}

TEST_CASE("singular disk integral with a smooth remainder") {
  const Complex z0(0.2, -0.4);
  auto h = [](Complex w) { return 1.0 + w; };
  auto s = [](Complex w) { return Complex(std::norm(w)); };
  const auto q = integrate_disk_singular(h, s, z0, 0.0);
  // int (1+w)/(w - z0) dA = cauchy_monomial(0,0) + cauchy_monomial(1,0); int |w|^2 dA = 1/2
  const Complex exact = oracle::cauchy_monomial(0, 0, z0) + oracle::cauchy_monomial(1, 0, z0) + 0.5;
  CHECK(std::abs(q.value - exact) < 1e-11);
  CHECK_THROWS_AS(integrate_disk_singular(h, s, Complex(1.0 - 1e-8, 0.0), 0.0), DomainError);
}

TEST_CASE("truncation ladder of a constant mean") {
  const auto lad = integrate_ladder([](double) { return QuadratureResult{Complex(1.0)}; }, 0.0, 10);
  REQUIRE(lad.levels.size() == 10);
  for (std::size_t i = 0; i < lad.levels.size(); ++i) {
    const double R = lad.radii[i];
    CHECK(lad.cumulative[i].real() == doctest::Approx(R * R).epsilon(1e-13));
  }
}

TEST_CASE("least-squares line fit recovers an exact line") {
  std::vector<double> x{1, 2, 3, 4, 5}, y;
  for (double v : x) y.push_back(2.5 * v - 1.0);
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.5));
  CHECK(f.intercept == doctest::Approx(-1.0));
  CHECK(f.residual_norm < 1e-12);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(RadialJacobiRule<double>::make(8, -1.0), DomainError);
  CHECK_THROWS_AS(CircleRule<double>::make(12), DomainError);
}

TEST_CASE("property: rotating a radial integrand leaves the disk integral unchanged") {
  auto g = [](Complex z) { return Complex(std::exp(-std::norm(z))); };
  const auto base = integrate_disk(g, 0.5, 40, 32);
  for (double rot : {0.3, 1.7, 4.0}) {
    const Complex e = std::polar(1.0, rot);
    const auto q = integrate_disk([&](Complex z) { return g(e * z); }, 0.5, 40, 32);
    CHECK(std::abs(q.value - base.value) < 1e-14);
  }
}
