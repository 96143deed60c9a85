#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "triglab/maximal.hpp"
#include "triglab/special_product.hpp"

using namespace triglab;
using namespace triglab::testutil;

TEST_CASE("monomial times monomial") {
  auto g = TrigPoly::monomial(1, {1.0, 0.0});
  auto h = TrigPoly::monomial(1, {1.0, 0.0});
  auto res = special_product(g, h, 4, 256);
  CHECK(res.product.term_count() == 1);
  CHECK(res.product.lo() == 5);
  CHECK(res.cert.pass());
}

TEST_CASE("unit g reduces to a dilation") {
  auto g = TrigPoly::constant({1.0, 0.0});
  auto r = rng(5);
  auto h = random_poly(r, -6, 6);
  auto res = special_product(g, h, 1, 256);
  CHECK(res.product.freqs() == h.freqs());
  CHECK(res.cert.pass());
}

TEST_CASE("dilation precondition") {
  auto r = rng(6);
  auto g = random_poly(r, -4, 4);
  auto h = random_poly(r, 0, 3);
  CHECK_THROWS_AS(special_product(g, h, 3 * g.degree(), 128), Error);
  CHECK_NOTHROW(special_product(g, h, 3 * g.degree() + 1, 128));
}

TEST_CASE("random certified triples with brute-force subsample") {
  auto r = rng(99);
  for (int rep = 0; rep < 6; ++rep) {
    auto g = random_poly(r, -8, 8, 0.8);
    auto h = random_poly(r, -12, 12, 0.8);
    if (g.is_zero() || h.is_zero()) continue;
    std::int64_t rr = 3 * g.degree() + 1 + (rep % 5);
    auto res = special_product(g, h, rr, 512);
    CHECK(res.cert.pass());
    // oracle: exact maximal function of the expanded product on a subsample,
    // against both the transfer inequality and the certificate's claim
    auto brute = maximal_bruteforce_at_grid(res.product, 512);
    CVec gv = eval_grid_folded(g, 512);
    auto gstar = maximal_at_grid(g, 512);
    for (std::int64_t j = 0; j < 512; j += 61) {
      std::size_t s = static_cast<std::size_t>(j);
      double rhs = std::hypot(gv.re[s], gv.im[s]) * res.hstar_sup +
                   2.0 * gstar[s] * res.h_coeff_sup;
      CHECK(brute[s] <= rhs * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("transfer ratio stays below one on dense random input") {
  auto r = rng(123);
  auto g = random_poly(r, -16, 16);
  auto h = random_poly(r, -24, 24);
  auto res = special_product(g, h, 3 * g.degree() + 3, 1024);
  const CertClause* c = res.cert.find("transfer_pointwise");
  REQUIRE(c != nullptr);
  CHECK(c->measured <= 1.0 + 1e-9);
  MESSAGE("worst transfer ratio ", c->measured, ", refined points ",
          res.refined_points);
}
