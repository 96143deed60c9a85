#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "triglab/maximal.hpp"
#include "triglab/sampled.hpp"

using namespace triglab;
using namespace triglab::testutil;

TEST_CASE("single term: maximal is the constant |c|") {
  auto p = TrigPoly::monomial(7, {0.6, -0.8});
  auto m = maximal_at_grid(p, 64);
  for (double v : m) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("all-ones Dirichlet sum at t=0") {
  std::vector<std::pair<std::int64_t, cplx>> terms;
  for (int n = 0; n < 8; ++n) terms.emplace_back(n, cplx{1.0, 0.0});
  auto p = TrigPoly::from_terms(std::move(terms));
  auto m = maximal_at_grid(p, 32);
  CHECK(m[0] == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("prefix-diameter equals brute-force segment enumeration") {
  auto r = rng(2024);
  for (int rep = 0; rep < 12; ++rep) {
    auto p = random_poly(r, -32, 32, 0.7);
    if (p.is_zero()) continue;
    const std::int64_t G = 128;
    auto fast = maximal_at_grid(p, G);
    auto brute = maximal_bruteforce_at_grid(p, G);
    for (std::int64_t j = 0; j < G; ++j)
      CHECK(std::abs(fast[static_cast<std::size_t>(j)] -
                     brute[static_cast<std::size_t>(j)]) < 1e-10);
  }
}

TEST_CASE("pruned-hull path handles large term counts") {
  // > 96 prefix points per node forces the prune + hull code path.
  auto r = rng(555);
  auto p = random_poly(r, -150, 150, 0.9);
  const std::int64_t G = 512;
  auto fast = maximal_at_grid(p, G);
  auto brute = maximal_bruteforce_at_grid(p, G);
  for (std::int64_t j = 0; j < G; j += 17)
    CHECK(std::abs(fast[static_cast<std::size_t>(j)] -
                   brute[static_cast<std::size_t>(j)]) < 1e-10);
}

TEST_CASE("maximal dominates |P| pointwise") {
  auto r = rng(17);
  auto p = random_poly(r, -20, 20);
  const std::int64_t G = 128;
  auto m = maximal(p, G);
  auto vals = eval_grid(p, G);
  for (std::int64_t j = 0; j < G; ++j)
    CHECK(m.v[static_cast<std::size_t>(j)].real() >=
          std::abs(vals.v[static_cast<std::size_t>(j)]) - 1e-11);
  CHECK_THROWS_AS(maximal(p, 32), Error);  // GridTooCoarse
}

TEST_CASE("planar diameter: exact on simple sets") {
  std::vector<double> xs = {0, 1, 0, -1, 0};
  std::vector<double> ys = {0, 0, 1, 0, -1};
  CHECK(planar_diameter(xs, ys) == doctest::Approx(2.0));
}
