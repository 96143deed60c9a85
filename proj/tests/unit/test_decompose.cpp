#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "triglab/decompose.hpp"
#include "triglab/maximal.hpp"

using namespace triglab;
using namespace triglab::decompose;

namespace {

SampledFunction half_indicator(std::int64_t G) {
  SampledFunction f(G, {0.0, 0.0});
  for (std::int64_t j = 0; j < G / 2; ++j) f.v[static_cast<std::size_t>(j)] = {1.0, 0.0};
  return f;
}

}  // namespace

TEST_CASE("zero target: every round trivial") {
  SampledFunction f(512, {0.0, 0.0});
  EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 3;
  auto rep = analytic_decompose(f, opt);
  REQUIRE(rep.complete);
  CHECK(rep.all_round_clauses_pass());
  for (const auto& r : rep.rounds) {
    CHECK(r.residual_rho == 0.0);
    CHECK(r.q_sup == 0.0);
  }
  CHECK(rep.q_sum_sup == 0.0);
}

TEST_CASE("jump-discontinuous target, four rounds") {
  auto f = half_indicator(1024);
  EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 4;
  opt.seed = 11;
  auto rep = analytic_decompose(f, opt);
  REQUIRE(rep.complete);
  CHECK(rep.all_round_clauses_pass());
  CHECK(rep.q_sum_sup < 0.25);
  double bound_sum = 0.0;
  for (const auto& r : rep.rounds) {
    CHECK(r.residual_rho < r.rho_target);
    CHECK(r.p_min_freq >= 0);
    CHECK(r.q_sup < r.a);
    bound_sum += r.a;
    if (r.mu_hypothesis) CHECK(r.quiet_co_measure < 16.0 * r.rho_target);
  }
  CHECK(rep.q_sum_sup <= bound_sum + 1e-12);
}

TEST_CASE("analytic input below eps/2 finishes in round one") {
  const std::int64_t G = 512;
  auto p = TrigPoly::from_terms({{2, {0.05, 0.0}}, {5, {0.03, 0.02}}});
  SampledFunction f = SampledFunction::from_cvec(G, eval_grid_folded(p, G));
  EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 1;
  auto rep = analytic_decompose(f, opt);
  REQUIRE(rep.complete);
  CHECK(rep.rounds[0].residual_rho < 0.25);
}

TEST_CASE("parameter validation") {
  SampledFunction f(64, {0.0, 0.0});
  EngineOptions opt;
  opt.epsilon = 1.5;
  CHECK_THROWS_AS(analytic_decompose(f, opt), Error);
  opt.epsilon = 0.25;
  opt.rounds = 9;
  CHECK_THROWS_AS(analytic_decompose(f, opt), Error);
}

TEST_CASE("verify_round recomputes clauses and catches tampering") {
  auto f = half_indicator(512);
  EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 2;
  auto rep = analytic_decompose(f, opt);
  REQUIRE(rep.complete);
  for (int n = 1; n <= 2; ++n) CHECK(verify_round(f, rep, n).pass());

  // tamper: scale Q_1 by 10 -> clause (iii) must fail
  auto tampered = rep;
  tampered.Q[0] = tampered.Q[0].scaled({10.0, 0.0});
  Certificate cert = verify_round(f, tampered, 1);
  CHECK_FALSE(cert.pass());
  bool qfail = false;
  for (const auto& c : cert.clauses)
    if (c.name == "clause_iii_qsup" && !c.pass) qfail = true;
  CHECK(qfail);
}

TEST_CASE("menshov variant: three rounds reported") {
  auto f = half_indicator(1024);
  EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 3;
  opt.menshov = true;
  opt.gamma = 0.5;
  opt.c_target = 4.0;
  auto rep = menshov_decompose(f, opt);
  REQUIRE(rep.complete);
  for (const auto& r : rep.rounds) {
    CHECK(r.achieved_c < 4.0);
    CHECK(r.u_norm_q < r.a / 0.5);
    MESSAGE("round ", r.n, " achieved C = ", r.achieved_c, " uQ = ", r.u_norm_q);
  }
}

TEST_CASE("diagnostics are populated") {
  auto f = half_indicator(512);
  EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 2;
  auto rep = analytic_decompose(f, opt);
  REQUIRE(rep.complete);
  for (const auto& r : rep.rounds) {
    CHECK(r.pstar_quiet_rho >= 0.0);
    if (r.mu_hypothesis) CHECK(r.pstar_global_rho >= 0.0);
  }
}
