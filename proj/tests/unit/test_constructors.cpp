#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "triglab/constructors.hpp"
#include "triglab/maximal.hpp"

using namespace triglab;
using namespace triglab::constructors;

namespace {

FlatWiring fast_wiring(std::uint64_t seed = 3) {
  FlatWiring w;
  w.rho_tol = 0.5;
  w.coeff_cap = 0.2;
  w.budget = 1024;
  w.seed = seed;
  return w;
}

}  // namespace

TEST_CASE("indicator: quarter-circle arc, relaxed wiring") {
  auto res = indicator_polynomial(Arc{0.3, kPi / 2}, 0.9, fast_wiring(), 2048);
  CHECK(res.cert.pass());
  CHECK(res.P.spec_lo() >= 0);
  CHECK(res.r == 3 * res.g.degree() + 1);
  // clause (3) through the transfer: both sides logged
  const CertClause* off = res.cert.find("offset_transfer");
  REQUIRE(off != nullptr);
  CHECK(off->measured < 0.9);
}

TEST_CASE("indicator: empty arc and bad delta") {
  auto res = indicator_polynomial(Arc{0.0, 0.0}, 0.25, fast_wiring());
  CHECK(res.cert.pass());
  CHECK(res.P.empty());
  CHECK_THROWS_AS(indicator_polynomial(Arc{0.0, 1.0}, 1.5, fast_wiring()), Error);
}

TEST_CASE("indicator: strict constants hit the energy floor at small delta") {
  FlatWiring strict;  // rho delta/3, cap delta^2/24
  strict.budget = 4096;
  CHECK_THROWS_AS(indicator_polynomial(Arc{0.0, kPi / 2}, 0.25, strict), Error);
  try {
    indicator_polynomial(Arc{0.0, kPi / 2}, 0.25, strict);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SynthFailed);
    CHECK(std::string(e.what()).find("energy floor") != std::string::npos);
  }
}

TEST_CASE("step polynomial: zero function") {
  StepFunction phi = StepFunction::constant({0.0, 0.0});
  auto res = step_polynomial(phi, GridMask::full(1024), 0.5, fast_wiring(), 1024);
  CHECK(res.P.empty());
  CHECK(res.cert.pass());
}

TEST_CASE("step polynomial: half-circle indicator with collar mask") {
  const std::int64_t G = 2048;
  StepFunction phi = StepFunction::arc_indicator(0.0, kPi, {1.0, 0.0});
  GridMask U = GridMask::empty(G);
  double collar = 0.9;
  for (std::int64_t j = 0; j < G; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
    double d = std::min(wrap_angle(t - kPi), wrap_angle(-t));
    U.in[static_cast<std::size_t>(j)] = (phi.at(t) == cplx(0.0, 0.0) && d > collar) ? 1 : 0;
  }
  auto res = step_polynomial(phi, U, 0.9, fast_wiring(5), G);
  CHECK(res.cert.pass());
  CHECK(res.pieces.size() == 1);
  CHECK(res.pieces[0].delta_piece == doctest::Approx(0.9));

  // two-arc phi with values 1 and -1: linearity of the construction
  StepFunction phi2;
  phi2.breaks = {0.0, 1.2, 2.4, 3.6};
  phi2.vals = {{1.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}, {0.0, 0.0}};
  GridMask U2 = GridMask::empty(G);
  for (std::int64_t j = 0; j < G; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
    bool quiet = phi2.at(t) == cplx(0.0, 0.0);
    for (double d = -0.9; d <= 0.9; d += 0.15)
      if (phi2.at(t + d) != cplx(0.0, 0.0)) quiet = false;
    U2.in[static_cast<std::size_t>(j)] = quiet ? 1 : 0;
  }
  auto res2 = step_polynomial(phi2, U2, 0.9, fast_wiring(6), G);
  CHECK(res2.pieces.size() == 2);
  CHECK(res2.cert.find("rho_step")->pass);

  // phi not vanishing on U is rejected
  CHECK_THROWS_AS(step_polynomial(phi, GridMask::full(G), 0.5, fast_wiring(), G),
                  Error);
}

TEST_CASE("pq pair: zero step function") {
  auto pq = pq_pair(StepFunction::constant({0.0, 0.0}), GridMask::full(1024), 0.5,
                    0.9, fast_wiring(), 1024);
  CHECK(pq.P.empty());
  CHECK(pq.Q.is_zero());
  CHECK(pq.cert.pass());
}

TEST_CASE("pq pair: small bump handled by the corrector alone") {
  const std::int64_t G = 1024;
  StepFunction psi = StepFunction::arc_indicator(1.0, 1.0, {0.2, 0.0});
  GridMask U = GridMask::full(G);
  auto pq = pq_pair(psi, U, 0.5, 0.9, fast_wiring(), G);
  CHECK(pq.cert.pass());
  CHECK(pq.cert.find("q_sup")->measured < 0.5);
  CHECK(pq.cert.find("rho_sum")->measured < 0.9);
}

TEST_CASE("pq pair: clipping infeasible when psi reaches a on U") {
  const std::int64_t G = 1024;
  StepFunction psi = StepFunction::arc_indicator(1.0, 1.0, {0.8, 0.0});
  GridMask U = GridMask::full(G);
  CHECK_THROWS_AS(pq_pair(psi, U, 0.5, 0.9, fast_wiring(), G), Error);
}

TEST_CASE("pq pair with loud region routed through P") {
  const std::int64_t G = 2048;
  StepFunction psi = StepFunction::arc_indicator(0.0, kPi, {1.0, 0.0});
  GridMask U = GridMask::empty(G);
  for (std::int64_t j = 0; j < G; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
    double d = std::min(wrap_angle(t - kPi), wrap_angle(-t));
    U.in[static_cast<std::size_t>(j)] = (psi.at(t) == cplx(0.0, 0.0) && d > 0.95) ? 1 : 0;
  }
  auto pq = pq_pair(psi, U, 0.4, 0.95, fast_wiring(8), G);
  CHECK(pq.cert.pass());
  CHECK_FALSE(pq.P.empty());
}

TEST_CASE("pq pair U-norm variant") {
  const std::int64_t G = 1024;
  StepFunction psi = StepFunction::arc_indicator(1.0, 1.0, {0.2, 0.0});
  GridMask U = GridMask::full(G);
  auto pq = pq_pair_u(psi, U, 0.5, 0.5, 0.9, 4.0, fast_wiring(), G);
  CHECK(pq.cert.pass());
  const CertClause* un = pq.cert.find("u_norm_q");
  REQUIRE(un != nullptr);
  CHECK(un->measured < 0.5 / 0.5);
  const CertClause* ls = pq.cert.find("levelset_sum");
  MESSAGE("achieved C: ", ls->measured / 0.5);
}

TEST_CASE("mask runs") {
  GridMask m = GridMask::empty(8);
  m.in = {1, 1, 0, 0, 1, 0, 1, 1};  // wraps: run {6,7,0,1}, {4}
  auto runs = mask_runs(m);
  REQUIRE(runs.size() == 2);
  bool found_wrap = false, found_single = false;
  for (auto [s, l] : runs) {
    if (s == 6 && l == 4) found_wrap = true;
    if (s == 4 && l == 1) found_single = true;
  }
  CHECK(found_wrap);
  CHECK(found_single);
}
