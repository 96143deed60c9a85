#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "triglab/product_poly.hpp"

using namespace triglab;
using namespace triglab::testutil;

TEST_CASE("factored evaluation matches the expanded polynomial") {
  auto r = rng(31);
  auto g = random_poly(r, -5, 5);
  auto h = random_poly(r, 1, 9);
  std::int64_t dil = 17;
  ProductPoly P = ProductPoly::product(g, h, dil);
  auto expanded = P.materialize(1e6);
  REQUIRE(expanded.has_value());
  TrigPoly direct = multiply(g, h.dilate(dil));
  CHECK(expanded->term_count() == direct.term_count());

  CVec fac = P.eval_grid(1024);
  CVec exp = eval_grid_folded(direct, 1024);
  for (std::size_t j = 0; j < fac.size(); j += 13) {
    CHECK(fac.re[j] == doctest::Approx(exp.re[j]).epsilon(1e-10));
    CHECK(fac.im[j] == doctest::Approx(exp.im[j]).epsilon(1e-10));
  }
}

TEST_CASE("spectral interval bookkeeping is exact for dilated products") {
  auto g = TrigPoly::from_terms({{-3, {1, 0}}, {2, {1, 0}}});
  auto h = TrigPoly::from_terms({{1, {1, 0}}, {4, {1, 0}}});
  ProductPoly P = ProductPoly::product(g, h, 10);
  CHECK(P.spec_lo() == -3 + 10);
  CHECK(P.spec_hi() == 2 + 40);
  CHECK(P.analytic_spectrum());

  ProductPoly Pneg = ProductPoly::product(g, h, 2);
  CHECK(Pneg.spec_lo() == -1);
  CHECK_FALSE(Pneg.analytic_spectrum());
}

TEST_CASE("coefficient sup bound is exact without band collisions") {
  auto g = TrigPoly::from_terms({{0, {0.5, 0.0}}, {1, {0.25, 0.0}}});
  auto h = TrigPoly::from_terms({{1, {0.5, 0.0}}, {2, {-0.5, 0.0}}});
  // r = 4 > 3*deg g: bands disjoint, sup of product = 0.5*0.5
  ProductPoly P = ProductPoly::product(g, h, 4);
  auto expanded = P.materialize(1e3);
  REQUIRE(expanded.has_value());
  CHECK(expanded->coeff_sup() <= P.coeff_sup_bound() + 1e-15);
  CHECK(P.coeff_sup_bound() == doctest::Approx(0.5 * 0.75));  // sup * l1 route
}

TEST_CASE("sums of terms and materialization cap") {
  auto r = rng(77);
  ProductPoly P;
  for (int k = 0; k < 3; ++k) {
    ProductTerm t;
    t.scale = {0.5 * (k + 1), 0.0};
    t.factors.push_back({random_poly(r, 0, 4), 1});
    t.factors.push_back({random_poly(r, 1, 3), 13});
    P.add_term(std::move(t));
  }
  CHECK(P.terms().size() == 3);
  CHECK_FALSE(P.materialize(2).has_value());  // cap too small
  auto full = P.materialize(1e6);
  REQUIRE(full.has_value());
  CVec a = P.eval_grid(256);
  CVec b = eval_grid_folded(*full, 256);
  for (std::size_t j = 0; j < a.size(); j += 7)
    CHECK(std::abs(a.at(j) - b.at(j)) < 1e-11);
}
