#include "doctest.h"
#include "oracles.hpp"

#include <sstream>

#include "diskspec/grunsky.hpp"

using namespace diskspec;

TEST_CASE("Koebe coefficients are minus the identity") {
  const auto g = extract_grunsky(catalog_get("koebe"), 32);
  CHECK((g.c + Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-8);
  const auto n = grunsky_norm(g);
  CHECK(n.converged);
  CHECK(std::abs(n.value - 1.0) < 1e-6);
}

TEST_CASE("identity map has vanishing coefficients") {
  const auto g = extract_grunsky(catalog_get("identity"), 8);
  CHECK(g.c.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(grunsky_norm(g).value < 1e-14);
}

TEST_CASE("torus extraction against the power-series oracle") {
  for (const char* name : {"halfsquare", "monomial_perturb", "becker_lacunary", "koebe"}) {
    INFO(name);
    const auto m = catalog_get(name);
    const int N = 12;
    const auto g = extract_grunsky(m, N);
    const Eigen::MatrixXcd ref = oracle::grunsky_series(m.taylor(2 * N + 2), N);
    CHECK((g.b - ref).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(g.coefficient_error_bound < 1e-8);
  }
}

TEST_CASE("power iteration against a full SVD") {
  for (const char* name : {"halfsquare", "monomial_perturb", "becker_lacunary"}) {
    INFO(name);
    const auto g = extract_grunsky(catalog_get(name), 24);
    const auto n = grunsky_norm(g);
    CHECK(n.converged);
    CHECK(std::abs(n.value - oracle::spectral_norm(g.c)) < 1e-8);
  }
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = Complex(0.0, -2.0);
  d(2, 2) = 1.0;
  CHECK(grunsky_norm(d).value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("property: coefficients are symmetric and the norm is at most one on class S") {
  for (const char* name : {"halfsquare", "monomial_perturb", "koebe", "becker_lacunary"}) {
    INFO(name);
    double prev = 0.0;
    for (int N : {8, 16, 32}) {
      const auto g = extract_grunsky(catalog_get(name), N);
      CHECK((g.b - g.b.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      const double v = grunsky_norm(g).value;
      CHECK(v <= 1.0 + 1e-6);
      // Principal sections of a fixed infinite matrix have non-decreasing norm.
      CHECK(v >= prev - 1e-8);
      prev = v;
    }
  }
}

TEST_CASE("action of the Grunsky operator") {
  const std::vector<Complex> zs{0.0, 0.3, Complex(-0.2, 0.25)};
  for (const char* name : {"halfsquare", "koebe"})
    for (int n : {0, 2, 8}) {
      const auto a = grunsky_action_crosscheck(catalog_get(name), n, zs);
      CHECK(a.converged);
      CHECK(a.max_discrepancy < 1e-6);
    }
  CHECK_THROWS_AS(grunsky_action_crosscheck(catalog_get("koebe"), 9, zs), DomainError);
}

TEST_CASE("validation and CSV dump") {
  CHECK_THROWS_AS(extract_grunsky(catalog_get("koebe"), 0), DomainError);
  CHECK_THROWS_AS(extract_grunsky(catalog_get("koebe"), 8, 0.99), DomainError);
  const auto g = extract_grunsky(catalog_get("halfsquare"), 4);
  std::ostringstream os;
  write_grunsky_csv(g, os);
  const std::string s = os.str();
  CHECK(s.rfind("row,col,re,im\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 17);
}
