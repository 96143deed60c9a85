#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "triglab/certificate.hpp"
#include "triglab/io.hpp"

using namespace triglab;
using namespace triglab::testutil;

TEST_CASE("coefficient files round-trip bit-exactly") {
  auto r = rng(10);
  auto p = random_poly(r, -40, 40, 0.6);
  auto q = io::coeffs_from_text(io::coeffs_to_text(p));
  REQUIRE(p.term_count() == q.term_count());
  for (std::size_t i = 0; i < p.term_count(); ++i) {
    CHECK(p.freqs()[i] == q.freqs()[i]);
    CHECK(p.coeffs()[i] == q.coeffs()[i]);
  }
}

TEST_CASE("coefficient files reject duplicates and disorder") {
  CHECK_THROWS_AS(io::coeffs_from_text("1,1,0\n1,2,0\n"), Error);
  CHECK_THROWS_AS(io::coeffs_from_text("3,1,0\n1,2,0\n"), Error);
  CHECK_THROWS_AS(io::coeffs_from_text("1,abc,0\n"), Error);
}

TEST_CASE("sampled function files") {
  SampledFunction f(64, {0.0, 0.0});
  f.v[3] = {1.25, -0.5};
  auto g = io::sampled_from_text(io::sampled_to_text(f));
  CHECK(g.G == 64);
  CHECK(g.v[3] == f.v[3]);
  CHECK_THROWS_AS(io::sampled_from_text("nope"), Error);
}

TEST_CASE("step function files") {
  StepFunction s;
  s.breaks = {0.0, 1.5, 4.0};
  s.vals = {{1, 0}, {0, 0}, {-0.5, 0.25}};
  auto t = io::step_from_text(io::step_to_text(s));
  REQUIRE(t.arc_count() == 3);
  CHECK(t.vals[2] == s.vals[2]);
  CHECK(t.breaks[1] == 1.5);
}

TEST_CASE("factored files round-trip and evaluate identically") {
  auto r = rng(12);
  auto g = random_poly(r, -4, 4);
  auto h = random_poly(r, 1, 6);
  ProductPoly P = ProductPoly::product(g, h, 13);
  ProductTerm extra;
  extra.scale = {0.0, -1.5};
  extra.factors.push_back({random_poly(r, 0, 3), 40});
  P.add_term(std::move(extra));
  auto Q = io::factored_from_text(io::factored_to_text(P));
  CVec a = P.eval_grid(256);
  CVec b = Q.eval_grid(256);
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(a.re[j] == b.re[j]);
    CHECK(a.im[j] == b.im[j]);
  }
}

TEST_CASE("certificate text round-trip") {
  Certificate c;
  c.subject = "demo";
  c.grid_size = 512;
  c.add("alpha", 0.5, 0.25, "grid rho");
  c.add("beta", 0.0, 0.0, "exact");
  auto d = parse_certificate_text(c.to_text());
  CHECK(d.subject == "demo");
  REQUIRE(d.clauses.size() == 2);
  CHECK(d.clauses[0].measured == 0.25);
  CHECK(d.clauses[0].pass);
  CHECK(d.pass());
  CHECK_THROWS_AS(parse_certificate_text("bogus"), Error);
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 2.2250738585072014e-308, 12345.6789}) {
    CHECK(std::stod(io::format_double(x)) == x);
  }
}
