// Acceptance suite: one pass/fail line per criterion at the pinned
// tolerances. Run with a comma-separated criterion list (e.g. "1,2,3") or
// no argument for all. Exit code 0 iff every selected gating criterion
// passed; REPORT lines are informational.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "triglab/constructors.hpp"
#include "triglab/decompose.hpp"
#include "triglab/density.hpp"
#include "triglab/io.hpp"
#include "triglab/kernels.hpp"
#include "triglab/maximal.hpp"
#include "triglab/sampled.hpp"
#include "triglab/special_product.hpp"
#include "triglab/synth.hpp"

using namespace triglab;

namespace {

struct Outcome {
  bool gating = true;
  bool pass = false;
  std::string detail;
};

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

TrigPoly random_poly(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi,
                     double density = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<std::pair<std::int64_t, cplx>> terms;
  for (std::int64_t n = lo; n <= hi; ++n)
    if (d(rng) <= density) terms.emplace_back(n, cplx{u(rng), u(rng)});
  return TrigPoly::from_terms(std::move(terms));
}

SampledFunction half_indicator(std::int64_t G) {
  SampledFunction f(G, {0.0, 0.0});
  for (std::int64_t j = 0; j < G / 2; ++j) f.v[static_cast<std::size_t>(j)] = {1.0, 0.0};
  return f;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {  // special-product transfer inequality
  Outcome o;
  std::mt19937_64 rng(20260808);
  double worst = 0.0;
  std::int64_t refined = 0;
  std::uniform_int_distribution<int> extra(0, 8);
  for (int rep = 0; rep < 200; ++rep) {
    TrigPoly g = random_poly(rng, -32, 32, 0.85);
    TrigPoly h = random_poly(rng, -64, 64, 0.85);
    if (g.is_zero() || h.is_zero()) continue;
    std::int64_t r = 3 * g.degree() + 1 + extra(rng);
    auto res = special_product(g, h, r, 4096);
    const CertClause* c = res.cert.find("transfer_pointwise");
    worst = std::max(worst, c->measured);
    refined += res.refined_points;
    if (!res.cert.pass()) {
      o.detail = "triple " + std::to_string(rep) + " failed, ratio " +
                 std::to_string(c->measured);
      return o;
    }
  }
  o.pass = true;
  o.detail = "200 triples, worst ratio " + std::to_string(worst) + ", refined nodes " +
             std::to_string(refined);
  return o;
}

Outcome criterion2() {  // maximal operator vs brute force
  Outcome o;
  std::mt19937_64 rng(77001);
  std::uniform_real_distribution<double> d(0.3, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    TrigPoly p = random_poly(rng, -64, 64, d(rng));
    if (p.is_zero()) continue;
    auto fast = maximal_at_grid(p, 512);
    auto brute = maximal_bruteforce_at_grid(p, 512);
    for (std::int64_t j = 0; j < 512; ++j) {
      double diff = std::abs(fast[static_cast<std::size_t>(j)] -
                             brute[static_cast<std::size_t>(j)]);
      worst = std::max(worst, diff);
      if (diff >= 1e-10) {
        o.detail = "poly " + std::to_string(rep) + " node " + std::to_string(j) +
                   " differs by " + std::to_string(diff);
        return o;
      }
    }
  }
  o.pass = true;
  o.detail = "100 polynomials, worst deviation " + io::format_double(worst);
  return o;
}

Outcome criterion3() {  // rho metric
  Outcome o;
  const std::int64_t G = 1024;
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto randf = [&](double scale) {
    SampledFunction f(G, {0.0, 0.0});
    for (auto& z : f.v) z = {scale * u(rng), scale * u(rng)};
    return f;
  };
  // (a) dense-eps scan oracle
  for (int rep = 0; rep < 100; ++rep) {
    SampledFunction f = randf(1.0), g = randf(1.0);
    std::vector<double> dv(f.size());
    for (std::size_t j = 0; j < dv.size(); ++j) dv[j] = std::abs(f.v[j] - g.v[j]);
    double scan = 1.0;
    for (std::int64_t k = 0; k <= 4 * G; ++k) {
      double eps = static_cast<double>(k) / static_cast<double>(4 * G);
      std::size_t cnt = 0;
      for (double x : dv)
        if (x > eps) ++cnt;
      if (static_cast<double>(cnt) / static_cast<double>(G) < eps) {
        scan = eps;
        break;
      }
    }
    if (std::abs(rho(f, g) - scan) > 2.0 / G) {
      o.detail = "scan mismatch at pair " + std::to_string(rep);
      return o;
    }
  }
  // (b) triangle inequality
  for (int rep = 0; rep < 100; ++rep) {
    SampledFunction f = randf(1.0), g = randf(0.7), h = randf(1.3);
    if (rho(f, h) > rho(f, g) + rho(g, h) + 1e-15) {
      o.detail = "triangle violation at " + std::to_string(rep);
      return o;
    }
  }
  // (c) closed forms
  SampledFunction z(G, {0.0, 0.0});
  SampledFunction c3(G, {0.3, 0.0});
  SampledFunction sp(G, {0.0, 0.0});
  for (std::int64_t j = 0; j < G / 10; ++j) sp.v[static_cast<std::size_t>(j)] = {1.0, 0.0};
  bool closed = rho(z, z) == 0.0 && std::abs(rho(c3, z) - 0.3) <= 2.0 / G &&
                std::abs(rho(sp, z) - 0.1) <= 2.0 / G;
  if (!closed) {
    o.detail = "closed-form cases failed";
    return o;
  }
  o.pass = true;
  o.detail = "scan oracle, triangle inequality, closed forms all hold";
  return o;
}

Outcome criterion4(bool stretch_report) {  // flat analytic synthesis
  Outcome o;
  auto r = synth::synth_flat_analytic(0.5, 4096, 42);
  if (!r.success || !r.cert.pass()) {
    o.detail = "synthesis failed: " + r.failure_reason;
    return o;
  }
  double energy = r.h.coeff_energy();
  std::size_t floor_count =
      static_cast<std::size_t>(std::ceil(energy / (0.5 * 0.5)));
  if (r.h.term_count() < 8 || r.h.term_count() < floor_count) {
    o.detail = "coefficient count " + std::to_string(r.h.term_count()) +
               " under the energy floor";
    return o;
  }
  o.pass = true;
  o.detail = "D = " + std::to_string(r.largest_degree_tried) + ", " +
             std::to_string(r.h.term_count()) + " coefficients, rho " +
             io::format_double(r.cert.find("rho_one")->measured);
  if (stretch_report) {
    auto s = synth::synth_flat_analytic(0.25, 4096, 42);
    double floor = synth::flat_energy_floor(0.25, 0.25);
    std::printf(
        "[REPORT] criterion-04-stretch eps=0.25 budget=4096: %s (energy floor %.0f "
        "needs >= %.0f coefficients at cap 0.25)\n",
        s.success ? "succeeded" : "infeasible", floor, std::ceil(floor / 0.0625));
  }
  return o;
}

Outcome criterion5() {  // indicator with the strict internal constants
  Outcome o;
  try {
    constructors::FlatWiring strict;  // rho delta/3 = 0.0833, cap delta^2/24
    strict.budget = 1 << 16;
    auto res = constructors::indicator_polynomial(Arc{0.0, kPi / 2}, 0.25, strict);
    o.pass = res.cert.pass();
    o.detail = o.pass ? "all three clauses certified" : "certificate failed";
  } catch (const Error& e) {
    o.detail = e.what();
  }
  return o;
}

Outcome criterion6() {  // induction engine on the half-circle indicator
  Outcome o;
  auto f = half_indicator(4096);
  decompose::EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 4;
  opt.seed = 11;
  auto rep = decompose::analytic_decompose(f, opt);
  if (!rep.complete || !rep.all_round_clauses_pass()) {
    o.detail = "engine failure: " + rep.failure;
    return o;
  }
  if (!(rep.q_sum_sup < 0.25)) {
    o.detail = "corrector sum " + io::format_double(rep.q_sum_sup);
    return o;
  }
  std::ostringstream os;
  for (const auto& r : rep.rounds) {
    if (r.mu_hypothesis && !r.mu_bound_pass) {
      o.detail = "round " + std::to_string(r.n) + " quiet-complement bound failed";
      return o;
    }
    os << " r" << r.n << "=" << io::format_double(r.residual_rho);
  }
  o.pass = true;
  o.detail = "4 rounds, residuals" + os.str() + ", ||sum Q|| = " +
             io::format_double(rep.q_sum_sup);
  return o;
}

Outcome criterion7() {  // modulated average identity and tail bound
  Outcome o;
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<std::int64_t> spick(-128, -1);
  for (int rep = 0; rep < 50; ++rep) {
    TrigPoly f = random_poly(rng, -128, 128, 0.5);
    std::int64_t s = spick(rng);
    // pin f^(s) = 1
    std::vector<std::pair<std::int64_t, cplx>> terms;
    bool placed = false;
    for (std::size_t i = 0; i < f.term_count(); ++i) {
      if (f.freqs()[i] == s) {
        terms.emplace_back(s, cplx{1.0, 0.0});
        placed = true;
      } else {
        terms.emplace_back(f.freqs()[i], f.coeffs()[i]);
      }
    }
    if (!placed) terms.emplace_back(s, cplx{1.0, 0.0});
    f = TrigPoly::from_terms(std::move(terms));
    for (std::int64_t N : {8, 16, 32, 64}) {
      TrigPoly F = density::modulated_average(f, s, N);
      for (double t : {0.0, 0.37, 1.1, 2.71, 4.44, 6.0}) {
        cplx direct = density::modulated_average_direct(f, s, N, t);
        if (std::abs(eval(F, t) - direct) > 1e-12 * (1.0 + f.coeff_l1())) {
          o.detail = "identity failed at N=" + std::to_string(N);
          return o;
        }
      }
      double tail = density::congruence_tail(f, s, N);
      TrigPoly target = TrigPoly::monomial(s, f.coeff(s));
      if (sup_norm(F - target) > tail * (1 + 1e-9) + 1e-12) {
        o.detail = "tail bound failed at N=" + std::to_string(N);
        return o;
      }
    }
  }
  o.pass = true;
  o.detail = "50 polynomials, N in {8,16,32,64}";
  return o;
}

Outcome criterion8() {  // U-norm against brute maximization
  Outcome o;
  auto single = TrigPoly::monomial(9, {0.0, 1.75});
  if (std::abs(u_norm(single) - 1.75) > 1e-12) {
    o.detail = "single exponential U-norm wrong";
    return o;
  }
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> d(0.3, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    TrigPoly p = random_poly(rng, -64, 64, d(rng));
    if (p.is_zero()) continue;
    std::int64_t G = next_pow2(8 * p.degree() + 2);
    double fast = u_norm(p, G);
    double brute = 0.0;
    for (std::int64_t N = 0; N <= p.degree(); ++N) {
      TrigPoly part = p.symmetric_partial(N);
      brute = std::max(brute, sup_norm(part, G));
    }
    double diff = std::abs(fast - brute);
    worst = std::max(worst, diff);
    if (diff >= 1e-10) {
      o.detail = "mismatch " + io::format_double(diff) + " at rep " +
                 std::to_string(rep);
      return o;
    }
  }
  o.pass = true;
  o.detail = "100 polynomials, worst deviation " + io::format_double(worst);
  return o;
}

Outcome criterion9() {  // stretch: bilateral synthesis + menshov run
  Outcome o;
  o.gating = false;
  auto r = synth::synth_flat_bilateral(0.5, 0.5, 4.0, 4096, 42);
  std::string part1;
  if (r.success && r.cert.pass()) {
    double c = r.cert.find("levelset_measure")->measured / 0.5;
    part1 = "bilateral ok, achieved C = " + io::format_double(c) +
            ", ||h*|| = " + io::format_double(r.cert.find("maximal_sup")->measured);
    o.pass = c <= 4.0;
  } else {
    part1 = "bilateral failed: " + r.failure_reason;
  }
  auto f = half_indicator(4096);
  decompose::EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 3;
  opt.seed = 13;
  opt.menshov = true;
  opt.gamma = 0.5;
  auto rep = decompose::menshov_decompose(f, opt);
  std::ostringstream os;
  os << part1 << "; menshov " << (rep.complete ? "complete" : "stopped") << ",";
  for (const auto& rr : rep.rounds)
    os << " C" << rr.n << "=" << io::format_double(rr.achieved_c);
  o.pass = o.pass && rep.complete;
  o.detail = os.str();
  return o;
}

Outcome criterion10() {  // determinism of criteria 4 and 6 artifacts
  Outcome o;
  auto a = synth::synth_flat_analytic(0.5, 4096, 42);
  auto b = synth::synth_flat_analytic(0.5, 4096, 42);
  if (!a.success || !b.success ||
      io::coeffs_to_text(a.h) != io::coeffs_to_text(b.h) ||
      a.cert.to_text() != b.cert.to_text()) {
    o.detail = "synthesis artifacts differ between identical runs";
    return o;
  }
  auto f = half_indicator(4096);
  decompose::EngineOptions opt;
  opt.epsilon = 0.25;
  opt.rounds = 4;
  opt.seed = 11;
  auto r1 = decompose::analytic_decompose(f, opt);
  auto r2 = decompose::analytic_decompose(f, opt);
  for (std::size_t k = 0; k < r1.P.size(); ++k) {
    if (io::coeffs_to_text(r1.P[k]) != io::coeffs_to_text(r2.P[k]) ||
        io::coeffs_to_text(r1.Q[k]) != io::coeffs_to_text(r2.Q[k])) {
      o.detail = "decomposition artifacts differ at round " + std::to_string(k + 1);
      return o;
    }
  }
  o.pass = true;
  o.detail = "synthesis and decomposition artifacts byte-identical across reruns";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  if (argc > 1) {
    std::stringstream ss(argv[1]);
    std::string tok;
    while (std::getline(ss, tok, ',')) wanted.insert(std::stoi(tok));
  } else {
    for (int i = 1; i <= 10; ++i) wanted.insert(i);
  }

  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  auto c4 = [] { return criterion4(true); };
  Entry entries[] = {
      {1, "special-product-transfer", criterion1},
      {2, "maximal-oracle-equivalence", criterion2},
      {3, "rho-metric", criterion3},
      {4, "flat-analytic-synthesis", +c4},
      {5, "indicator-strict-constants", criterion5},
      {6, "induction-engine", criterion6},
      {7, "modulated-average", criterion7},
      {8, "u-norm-oracle", criterion8},
      {9, "bilateral-and-menshov", criterion9},
      {10, "determinism", criterion10},
  };

  int failures = 0;
  for (const auto& e : entries) {
    if (!wanted.count(e.id)) continue;
    double t0 = now_s();
    Outcome o = e.fn();
    double dt = now_s() - t0;
    const char* tag = !o.gating ? "REPORT" : (o.pass ? "PASS" : "FAIL");
    std::printf("[%s] criterion-%02d %s: %s (%.1fs)\n", tag, e.id, e.name,
                o.detail.c_str(), dt);
    if (o.gating && !o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
