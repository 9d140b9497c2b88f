#include "doctest.h"
#include "oracles.hpp"

#include "diskspec/identity_lab.hpp"

using namespace diskspec;

TEST_CASE("seeded pairs are reproducible and inside the disk") {
  const auto a = random_pairs(50, 0.8, 7), b = random_pairs(50, 0.8, 7), c = random_pairs(50, 0.8, 8);
  CHECK(a == b);
  CHECK(a != c);
  for (auto [z, zeta] : a) {
    CHECK(std::abs(z) <= 0.8);
    CHECK(std::abs(zeta) <= 0.8);
  }
}

TEST_CASE("kernel primitives match their closed forms") {
  for (auto [z, zeta] : random_pairs(20, 0.9, 3)) {
    const KernelCheck k = kernel_log(z, zeta);
    CHECK(k.difference < 1e-8);
    CHECK(std::abs(k.closed_form - std::log(1.0 - std::conj(z) * zeta)) < 1e-15);
    const KernelCheck p = kernel_log_plus(z, zeta);
    CHECK(p.difference < 1e-8);
  }
}

TEST_CASE("second kernel closed form against the termwise Laurent oracle") {
  for (auto [z, zeta] : random_pairs(10, 0.7, 11)) {
    // zeta^2 (zetabar - wbar)/(1 - wbar zeta)^2 = zeta^2 sum (m+1) zeta^m wbar^m (zetabar - wbar)
    Complex s = 0.0;
    for (int m = 0; m < 200; ++m)
      s += double(m + 1) * std::pow(zeta, m) *
           (std::conj(zeta) * oracle::cauchy_monomial(0, m, z) - oracle::cauchy_monomial(0, m + 1, z));
    CHECK(std::abs(zeta * zeta * s - log_plus_closed_form(z, zeta)) < 1e-13);
  }
}

TEST_CASE("reproducing identity for a polynomial") {
  auto f = [](Complex w) { return 1.0 + 2.0 * w + w * w * w; };
  const Complex zeta(0.5, 0.3);
  const auto [area, line] = reproducing_check(f, zeta, std::nullopt);
  const Complex exact = zeta + zeta * zeta + std::pow(zeta, 4) / 4.0;
  CHECK(std::abs(area - exact) < 1e-11);
  CHECK(std::abs(line - exact) < 1e-13);
}

TEST_CASE("difference-quotient branch") {
  const auto id = catalog_get("identity");
  CHECK(std::abs(log_difference_quotient(id, Complex(0.3, 0.1), Complex(-0.2, 0.5)).value) < 1e-15);
  const auto k = catalog_get("koebe");
  const Complex z(0.4, 0.2), zeta(-0.5, 0.3);
  const BranchValue b = log_difference_quotient(k, z, zeta);
  CHECK(b.ok);
  const Complex arg = z * (oracle::koebe(z) - oracle::koebe(zeta)) / ((z - zeta) * oracle::koebe(z));
  CHECK(std::abs(std::exp(b.value) - arg) < 1e-12 * std::abs(arg));
}

TEST_CASE("property: both weighted identities hold on seeded pairs") {
  const auto pairs = random_pairs(12, 0.8, 7);
  for (const char* name : {"identity", "halfsquare", "monomial_perturb", "koebe"}) {
    INFO(name);
    const auto m = catalog_get(name);
    const auto r1 = verify_prop31(m, pairs);
    CHECK(r1.converged);
    CHECK(r1.max_residual < 1e-6);
    const auto r2 = verify_prop32(m, pairs);
    CHECK(r2.converged);
    CHECK(r2.max_residual < 1e-6);
  }
  CHECK_THROWS_AS(verify_prop31(catalog_get("koebe"), {{Complex(0.95), Complex(0.1)}}), DomainError);
}

TEST_CASE("diagonal specialization stays bounded toward the circle") {
  std::vector<Complex> zs;
  for (int k = 4; k <= 14; ++k) zs.emplace_back(1.0 - std::ldexp(1.0, -k), 0.0);
  const auto rep = verify_special(catalog_get("halfsquare"), zs);
  CHECK(rep.converged);
  REQUIRE(rep.growth_slope.has_value());
  CHECK(std::abs(*rep.growth_slope) < 0.1);
  CHECK(std::isfinite(rep.max_residual));
  CHECK_THROWS_AS(verify_special(catalog_get("koebe"), zs), DomainError);
}

TEST_CASE("regular-part bracket on the grid") {
  const auto id = lemma33_sup(catalog_get("identity"), 16, 2);
  CHECK(id.sup_estimate < 1e-12);
  const auto k = lemma33_sup(catalog_get("koebe"), 16, 3);
  CHECK(k.all_finite);
  CHECK(k.sup_estimate > 1.0);
  CHECK(k.sup_estimate < 4.0 + 1e-9);
  const auto& h = k.refinement_history;
  CHECK(std::abs(h.back() / h[h.size() - 2] - 1.0) < 0.05);
}
