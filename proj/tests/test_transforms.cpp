#include "doctest.h"
#include "oracles.hpp"

#include "diskspec/map_catalog.hpp"
#include "diskspec/transforms.hpp"

using namespace diskspec;

TEST_CASE("Schwarzian derivatives") {
  const auto id = catalog_get("identity");
  const auto k = catalog_get("koebe");
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.6, 0.3), Complex(0.0, 0.9)}) {
    CHECK(std::abs(schwarzian(id, z)) < 1e-15);
    CHECK(std::abs(schwarzian(k, z) - oracle::koebe_schwarzian(z)) < 1e-10 * std::abs(oracle::koebe_schwarzian(z)));
  }
}

TEST_CASE("transferred kernel for the Koebe function") {
  const auto k = catalog_get("koebe");
  const TransferredKernel K(k);
  const Complex z(0.3, -0.2);
  for (Complex w : {Complex(0.5, 0.5), Complex(-0.7, 0.1)}) {
    const Complex exact = oracle::koebe_deriv(w) / (oracle::koebe(w) - oracle::koebe(z));
    CHECK(std::abs(K(w, z) - exact) < 1e-12 * std::abs(exact));
    CHECK(std::abs(K.regular_part(w, z) - (exact - 1.0 / (w - z))) < 1e-11);
  }
}

TEST_CASE("property: the regular-part model joins the direct form continuously") {
  for (const char* name : {"koebe", "halfsquare", "becker_lacunary"}) {
    INFO(name);
    const TransferredKernel K(catalog_get(name));
    const Complex z(0.4, 0.3);
    const double edge = K.eta() * (1.0 - std::abs(z));
    const Complex w_in = z + std::polar((1 - 1e-9) * edge, 0.6), w_out = z + std::polar((1 + 1e-9) * edge, 0.6);
    CHECK(std::abs(K.regular_part(w_in, z) - K.regular_part(w_out, z)) < 1e-8);
    CHECK(std::abs(K.regular_part_model(w_out, z) - K.regular_part_direct(w_out, z)) < 1e-8);
  }
}

TEST_CASE("property: the Grunsky kernel is symmetric and tends to S/6 on the diagonal") {
  for (const char* name : {"koebe", "halfsquare", "monomial_perturb", "becker_lacunary"}) {
    INFO(name);
    const auto m = catalog_get(name);
    const GrunskyKernel G(m);
    const Complex z(0.2, -0.35), w(-0.1, 0.4);
    CHECK(std::abs(G(z, w) - G(w, z)) < 1e-12 * std::max(1.0, std::abs(G(z, w))));
    CHECK(std::abs(G.diagonal(z) - schwarzian(m, z) / 6.0) < 1e-13);
    CHECK(std::abs(G(z, z + 1e-3) - G.diagonal(z + 5e-4)) < 1e-6);
  }
}

TEST_CASE("transferred Cauchy transform for the identity is the plain Cauchy transform") {
  const auto id = catalog_get("identity");
  for (Complex z : {Complex(0.0), Complex(0.5, -0.3)}) {
    const auto q = transferred_cauchy(id, [](Complex w) { return std::conj(w); }, z);
    CHECK(std::abs(q.value - oracle::cauchy_monomial(0, 1, z)) < 1e-10);
  }
}

TEST_CASE("tilde transform of 1 for the identity map") {
  const auto id = catalog_get("identity");
  for (Complex z : {Complex(0.2, 0.1), Complex(-0.6, 0.5)}) {
    // (zbar - wbar)/(1 - wbar z) = sum_m z^m wbar^m (zbar - wbar), integrated termwise.
    Complex exact = 0.0;
    for (int m = 0; m < 400; ++m)
      exact += std::pow(z, m) * (std::conj(z) * oracle::cauchy_monomial(0, m, z) - oracle::cauchy_monomial(0, m + 1, z));
    const auto q = tilde_transferred(id, [](Complex) { return Complex(1.0); }, z);
    CHECK(std::abs(q.value - exact) < 1e-10);
    const auto h = hat_transferred(id, [](Complex) { return Complex(1.0); }, z);
    CHECK(h.value.real() >= std::abs(q.value));
  }
}

TEST_CASE("Beurling transform of monomials against independent oracles") {
  const auto id = catalog_get("identity");
  const Complex z(0.3, 0.2);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 0}, {2, 0}, {3, 1}, {1, 2}, {4, 1}}) {
    const DiskPolynomial f{{Complex(1.0), a, b}};
    const Complex v = skewed_beurling_apply(id, 1.0, f, z);
    CHECK(std::abs(v - oracle::beurling_monomial(a, b, z)) < 1e-14);
    const Complex brute = oracle::beurling_brute_force([&](Complex w) { return evaluate(f, w); }, z);
    CHECK(std::abs(v - brute) < 1e-9);
  }
  const DiskPolynomial mix{{Complex(0.5, 1.0), 3, 0}, {Complex(-2.0), 1, 1}};
  CHECK(std::abs(skewed_beurling_apply(id, 0.4, mix, z) -
                 (Complex(0.5, 1.0) * oracle::beurling_monomial(3, 0, z) - 2.0 * oracle::beurling_monomial(1, 1, z))) < 1e-14);
  CHECK_THROWS_AS(skewed_beurling_apply(catalog_get("koebe"), 1.0, mix, z), DomainError);
  CHECK_THROWS_AS(skewed_beurling_apply(id, 2.5, mix, z), DomainError);
}
