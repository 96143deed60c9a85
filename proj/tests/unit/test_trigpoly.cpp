#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "triglab/maximal.hpp"
#include "triglab/sampled.hpp"
#include "triglab/trigpoly.hpp"

using namespace triglab;
using namespace triglab::testutil;

TEST_CASE("eval basics") {
  auto e1 = TrigPoly::monomial(1, {1.0, 0.0});
  CHECK(eval(e1, 0.0) == cplx(1.0, 0.0));

  auto p = TrigPoly::constant({1.0, 0.0}) + e1;
  CHECK(std::abs(eval(p, kPi)) < 1e-15);

  auto r = rng(7);
  auto q = random_poly(r, -8, 8);
  cplx got = eval(q, 0.7);
  cplx want = direct_sum_oracle(q, 0.7);
  CHECK(std::abs(got - want) < 1e-12);
}

TEST_CASE("canonical form and duplicate rejection") {
  auto p = TrigPoly::from_terms({{3, {0.0, 0.0}}, {1, {2.0, 0.0}}});
  CHECK(p.term_count() == 1);  // exact zeros dropped
  CHECK(p.lo() == 1);
  CHECK_THROWS_AS(TrigPoly::from_terms({{1, {1, 0}}, {1, {2, 0}}}),
                  Error);
}

TEST_CASE("eval_grid matches pointwise eval and Parseval") {
  auto ones = TrigPoly::constant({1.0, 0.0});
  auto g = eval_grid(ones, 8);
  for (auto z : g.v) CHECK(std::abs(z - cplx(1.0, 0.0)) < 1e-14);

  // Dirichlet-type sum on 16 nodes vs direct summation.
  auto d = TrigPoly::from_terms({{0, {1, 0}}, {1, {1, 0}}, {2, {1, 0}}, {3, {1, 0}}});
  auto gd = eval_grid(d, 16);
  for (std::int64_t j = 0; j < 16; ++j) {
    cplx want = direct_sum_oracle(d, gd.t(j));
    CHECK(std::abs(gd.v[static_cast<std::size_t>(j)] - want) < 1e-10 * d.coeff_l1());
  }

  auto deg4 = TrigPoly::monomial(4, {1.0, 0.0});
  CHECK_THROWS_AS(eval_grid(deg4, 8), Error);  // needs G >= 10

  auto r = rng(21);
  auto q = random_poly(r, -10, 10);
  auto gq = eval_grid(q, 64);
  double mean2 = 0.0;
  for (auto z : gq.v) mean2 += std::norm(z);
  mean2 /= 64.0;
  CHECK(mean2 == doctest::Approx(q.coeff_energy()).epsilon(1e-10));
}

TEST_CASE("dilate spectrum and values") {
  auto e1 = TrigPoly::monomial(1, {1.0, 0.0});
  CHECK(e1.dilate(3).hi() == 3);
  auto r = rng(3);
  auto p = random_poly(r, -6, 6);
  CHECK(p.dilate(1).freqs() == p.freqs());
  auto p5 = p.dilate(5);
  for (std::size_t i = 0; i < p.term_count(); ++i)
    CHECK(p5.freqs()[i] == 5 * p.freqs()[i]);
  // Pointwise: dilate(p,r)(t) = p(r t mod 2pi).
  auto gp = eval_grid(p5, 128);
  for (std::int64_t j = 0; j < 128; j += 7) {
    cplx want = direct_sum_oracle(p, wrap_angle(5.0 * gp.t(j)));
    CHECK(std::abs(gp.v[static_cast<std::size_t>(j)] - want) < 1e-11);
  }
}

TEST_CASE("multiply is the pointwise product") {
  auto e1 = TrigPoly::monomial(1, {1.0, 0.0});
  auto e2 = TrigPoly::monomial(2, {1.0, 0.0});
  auto m = multiply(e1, e2);
  CHECK(m.term_count() == 1);
  CHECK(m.lo() == 3);

  auto one = TrigPoly::constant({1.0, 0.0});
  auto r = rng(17);
  auto h = random_poly(r, -5, 9);
  CHECK(multiply(one, h).freqs() == h.freqs());

  auto g = random_poly(r, -7, 4);
  auto gh = multiply(g, h);
  for (double t : {0.1, 1.9, 4.4}) {
    cplx want = eval(g, t) * eval(h, t);
    CHECK(std::abs(eval(gh, t) - want) <= 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("norms") {
  auto p = TrigPoly::monomial(5, {3.0, 0.0});
  CHECK(sup_norm(p) == doctest::Approx(3.0));
  CHECK(p.l2_norm() == doctest::Approx(3.0));
  CHECK(p.coeff_sup() == doctest::Approx(3.0));

  auto cosp = TrigPoly::from_terms({{1, {1, 0}}, {-1, {1, 0}}});  // 2 cos t
  CHECK(sup_norm(cosp) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(cosp.l2_norm() == doctest::Approx(std::sqrt(2.0)));
  CHECK(cosp.coeff_sup() == doctest::Approx(1.0));

  //

  auto r = rng(99);
  auto q = random_poly(r, -16, 16);
  double est = sup_norm(q);
  double fine = sup_norm(q, next_pow2(64 * (q.degree() + 1)));
  CHECK(est >= fine * 0.99);
  CHECK(est <= fine * 1.0 + 1e-12);
}

TEST_CASE("u_norm") {
  auto p = TrigPoly::monomial(4, {0.0, -2.5});
  CHECK(u_norm(p) == doctest::Approx(2.5));
  auto cosp = TrigPoly::from_terms({{1, {1, 0}}, {-1, {1, 0}}});
  CHECK(u_norm(cosp) == doctest::Approx(2.0).epsilon(1e-6));

  // Brute oracle: evaluate each symmetric partial sum directly.
  auto r = rng(31);
  auto q = random_poly(r, -12, 12, 0.8);
  std::int64_t G = next_pow2(16 * q.degree() + 2);
  double brute = 0.0;
  for (std::int64_t N = 0; N <= q.degree(); ++N) {
    auto part = q.symmetric_partial(N);
    double m = 0.0;
    for (std::int64_t j = 0; j < G; ++j) {
      double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
      m = std::max(m, std::abs(direct_sum_oracle(part, t)));
    }
    brute = std::max(brute, m);
  }
  CHECK(u_norm(q, G) == doctest::Approx(brute).epsilon(1e-10));

  // Analytic polynomials: u_norm dominated by the grid max of the maximal
  // function (symmetric partial sums are prefix segments).
  auto a = random_poly(r, 0, 10);
  std::int64_t Ga = next_pow2(8 * a.degree() + 2);
  auto mx = maximal_at_grid(a, Ga);
  double mx_sup = 0.0;
  for (double v : mx) mx_sup = std::max(mx_sup, v);
  CHECK(u_norm(a, Ga) <= mx_sup + 1e-12);
}
