#include "triglab/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "triglab/kernels.hpp"
#include "triglab/maximal.hpp"
#include "triglab/synth.hpp"

namespace triglab::decompose {
namespace {

// Step view of a sampled function: one arc per maximal run of equal values.
StepFunction grid_step(const SampledFunction& f) {
  StepFunction s;
  const std::int64_t G = f.G;
  for (std::int64_t j = 0; j < G; ++j) {
    cplx v = f.v[static_cast<std::size_t>(j)];
    if (s.vals.empty() || v != s.vals.back()) {
      s.breaks.push_back(f.t(j));
      s.vals.push_back(v);
    }
  }
  if (s.vals.size() > 1 && s.vals.front() == s.vals.back()) {
    // first and last arcs merge across 0 only if the break at 0 is redundant
    // (keep representation simple: leave as-is)
  }
  if (s.vals.empty()) return StepFunction::constant({0.0, 0.0});
  return s;
}

// Discrete Fejer mean of the grid samples, degree M < G/2. The kernel is
// nonnegative and its node translates sum to one, so the true sup never
// exceeds max_j |values_j|.
TrigPoly discrete_fejer(const SampledFunction& f, std::int64_t M) {
  CVec c = f.to_cvec();
  fft_forward(c);
  const std::int64_t G = f.G;
  std::vector<std::pair<std::int64_t, cplx>> terms;
  for (std::int64_t n = -M; n <= M; ++n) {
    std::int64_t bin = n >= 0 ? n : G + n;
    double w = 1.0 - static_cast<double>(std::llabs(n)) / static_cast<double>(M + 1);
    cplx z = c.at(static_cast<std::size_t>(bin)) * (w / static_cast<double>(G));
    if (z != cplx(0.0, 0.0)) terms.emplace_back(n, z);
  }
  return TrigPoly::from_terms(std::move(terms));
}

SampledFunction clip_modulus(const SampledFunction& f, double cap) {
  SampledFunction g = f;
  for (auto& z : g.v) {
    double a = std::abs(z);
    if (a > cap) z *= cap / a;
  }
  return g;
}

// One-sided interpolant: the unique polynomial with spectrum in [0, G-1]
// matching the samples at every node.
TrigPoly onesided_interpolant(const SampledFunction& f) {
  CVec c = f.to_cvec();
  fft_forward(c);
  const std::int64_t G = f.G;
  std::vector<std::pair<std::int64_t, cplx>> terms;
  for (std::int64_t n = 0; n < G; ++n) {
    cplx z = c.at(static_cast<std::size_t>(n)) / static_cast<double>(G);
    if (std::abs(z) > 1e-300) terms.emplace_back(n, z);
  }
  return TrigPoly::from_terms(std::move(terms));
}

}  // namespace

bool DecompositionReport::all_round_clauses_pass() const {
  for (const auto& r : rounds)
    if (!(r.clause_i && r.clause_ii && r.clause_iii)) return false;
  return complete;
}

DecompositionReport analytic_decompose(const SampledFunction& f, const EngineOptions& opt) {
  if (!(opt.epsilon > 0.0 && opt.epsilon < 1.0))
    fail(ErrorCode::InvalidParams, "epsilon must be in (0,1)");
  if (opt.rounds < 1 || opt.rounds > 8)
    fail(ErrorCode::InvalidParams, "rounds must be 1..8 (desk scale)");

  DecompositionReport rep;
  rep.opt = opt;
  rep.grid = f.G;
  const std::int64_t G = f.G;

  SampledFunction resid = f;      // f_n
  SampledFunction cumsum(G, {0.0, 0.0});
  TrigPoly psum, qsum;
  std::uint64_t seed = opt.seed;

  for (int n = 1; n <= opt.rounds; ++n) {
    RoundRecord rec;
    rec.n = n;
    rec.rho_target = std::pow(4.0, -n);
    rec.a = opt.epsilon * std::pow(2.0, -n);

    // S_n: coarse step approximation when it reaches the budget, otherwise
    // the exact grid step (every sampled function is a step function at the
    // grid scale).
    StepFunction S;
    bool coarse = true;
    try {
      S = step_approximate(resid, 0.9 * rec.rho_target);
    } catch (const Error&) {
      S = grid_step(resid);
      coarse = false;
    }
    (void)coarse;
    SampledFunction sv = S.sample(G);
    rec.step_arcs = static_cast<std::int64_t>(S.arc_count());
    rec.rho_step = rho(sv, resid);
    SampledFunction zero(G, {0.0, 0.0});
    rec.rho_s_zero = rho(sv, zero);

    GridMask U = GridMask::empty(G);
    for (std::int64_t j = 0; j < G; ++j)
      U.in[static_cast<std::size_t>(j)] = std::abs(sv.v[static_cast<std::size_t>(j)]) < rec.a;
    rec.quiet_measure = U.measure();
    rec.quiet_co_measure = 1.0 - rec.quiet_measure;
    rec.mu_hypothesis = rec.a < 4.0 * rec.rho_target;  // eps 2^{-n} < 4^{-n+1}
    double mu_bound = 16.0 * rec.rho_target;           // 4^{-n+2}
    rec.mu_bound_pass = !rec.mu_hypothesis || rec.quiet_co_measure < mu_bound;

    // Q_n: discrete Fejer mean of the clipped step target; degree doubles
    // until it tracks psi = S_n on the quiet set within a third of budget.
    SampledFunction psi_clip = clip_modulus(sv, 0.99 * rec.a);
    TrigPoly Q;
    double rq = 1e300;
    for (std::int64_t M = 16; M <= G - 2; M = std::min(2 * M, G - 2)) {
      // kernel positivity and the unit partition hold for any M <= G - 2,
      // so the sup bound 0.99a survives up to nearly full degree
      TrigPoly cand = discrete_fejer(psi_clip, M);
      SampledFunction qv = SampledFunction::from_cvec(G, eval_grid_folded(cand, G));
      double r = rho_on(qv, sv, U);
      if (r < rq) {
        rq = r;
        Q = std::move(cand);
        rec.fejer_degree = M;
      }
      if (rq < rec.rho_target / 3.0 || M == G - 2) break;
    }
    rec.rho_q_quiet = rq;
    SampledFunction qv = SampledFunction::from_cvec(G, eval_grid_folded(Q, G));

    // P_n: one-sided interpolant of the loud residual target
    // (S_n - Q_n) restricted off the quiet set.
    SampledFunction loud(G, {0.0, 0.0});
    for (std::int64_t j = 0; j < G; ++j) {
      std::size_t s = static_cast<std::size_t>(j);
      if (!U.in[s]) loud.v[s] = sv.v[s] - qv.v[s];
    }
    TrigPoly P = onesided_interpolant(loud);

    // menshov: multiply the corrector by a dilated bilateral flat factor.
    if (opt.menshov) {
      auto hb = synth::synth_flat_bilateral(opt.gamma, std::min(0.2, rec.rho_target),
                                            opt.c_target, opt.synth_budget, seed++);
      if (!hb.success) {
        rep.failure = "round " + std::to_string(n) +
                      ": bilateral factor synthesis failed: " + hb.failure_reason;
        rep.rounds.push_back(rec);
        return rep;
      }
      std::int64_t r = 3 * Q.degree() + 1;
      Q = multiply(Q, hb.h.dilate(r));
      qv = SampledFunction::from_cvec(G, eval_grid_folded(Q, G));
      rec.u_norm_q = u_norm(Q, G);
    }

    // Residual update and clause measurements.
    CVec pvals = eval_grid_folded(P, G);
    for (std::int64_t j = 0; j < G; ++j) {
      std::size_t s = static_cast<std::size_t>(j);
      cplx add = pvals.at(s) + qv.v[s];
      cumsum.v[s] += add;
      resid.v[s] = f.v[s] - cumsum.v[s];
    }
    rec.residual_rho = rho(f, cumsum);
    rec.p_min_freq = P.is_zero() ? 0 : P.lo();
    rec.q_sup = sup_norm(Q);
    rec.q_bound = rec.a;

    rec.clause_ii = rec.p_min_freq >= 0;
    if (opt.menshov) {
      // measure-type residual clause and U-norm corrector budget
      double meas = measure_above(resid, rec.rho_target);
      rec.achieved_c = meas / opt.gamma;
      rec.clause_i = rec.achieved_c < opt.c_target;
      rec.q_bound = rec.a / opt.gamma;
      rec.clause_iii = rec.u_norm_q < rec.q_bound;
    } else {
      rec.clause_i = rec.residual_rho < rec.rho_target;
      rec.clause_iii = rec.q_sup < rec.a;
    }

    // a.e.-convergence diagnostics, exact (P_n has at most G coefficients).
    auto pstar = maximal_at_grid(P, G);
    std::vector<double> quiet(static_cast<std::size_t>(G), 0.0);
    for (std::int64_t j = 0; j < G; ++j)
      if (U.in[static_cast<std::size_t>(j)])
        quiet[static_cast<std::size_t>(j)] = pstar[static_cast<std::size_t>(j)];
    rec.pstar_quiet_rho = rho_to_zero(quiet, G);
    if (rec.mu_hypothesis) rec.pstar_global_rho = rho_to_zero(pstar, G);

    rep.rounds.push_back(rec);
    rep.P.push_back(std::move(P));
    rep.Q.push_back(Q);
    rep.S.push_back(std::move(S));
    rep.U.push_back(std::move(U));
    psum = psum + rep.P.back();
    qsum = qsum + rep.Q.back();

    if (!(rec.clause_i && rec.clause_ii && rec.clause_iii)) {
      rep.failure = "round " + std::to_string(n) + " failed clause " +
                    (!rec.clause_i ? "(i)" : (!rec.clause_ii ? "(ii)" : "(iii)"));
      return rep;
    }
  }
  rep.p_sum = std::move(psum);
  rep.q_sum = std::move(qsum);
  rep.q_sum_sup = sup_norm(rep.q_sum);
  rep.complete = true;
  return rep;
}

DecompositionReport menshov_decompose(const SampledFunction& f, EngineOptions opt) {
  opt.menshov = true;
  return analytic_decompose(f, opt);
}

Certificate verify_round(const SampledFunction& f, const DecompositionReport& rep,
                         int n) {
  if (n < 1 || n > static_cast<int>(rep.rounds.size()))
    fail(ErrorCode::InvalidParams, "round out of range");
  Certificate cert;
  cert.subject = "decompose_round_" + std::to_string(n);
  cert.grid_size = rep.grid;
  const std::int64_t G = rep.grid;
  const RoundRecord& rec = rep.rounds[static_cast<std::size_t>(n - 1)];

  // clause (i) from scratch: accumulate P_k + Q_k values via folded FFTs.
  SampledFunction cum(G, {0.0, 0.0});
  for (int k = 0; k < n; ++k) {
    CVec pv = eval_grid_folded(rep.P[static_cast<std::size_t>(k)], G);
    CVec qv = eval_grid_folded(rep.Q[static_cast<std::size_t>(k)], G);
    for (std::int64_t j = 0; j < G; ++j) {
      std::size_t s = static_cast<std::size_t>(j);
      cum.v[s] += pv.at(s) + qv.at(s);
    }
  }
  if (rep.opt.menshov) {
    SampledFunction diff(G, {0.0, 0.0});
    for (std::int64_t j = 0; j < G; ++j) {
      std::size_t s = static_cast<std::size_t>(j);
      diff.v[s] = f.v[s] - cum.v[s];
    }
    cert.add("clause_i_levelset", rep.opt.c_target * rep.opt.gamma,
             measure_above(diff, rec.rho_target), "recomputed from stored polys");
  } else {
    cert.add("clause_i_rho", rec.rho_target, rho(f, cum), "recomputed from stored polys");
  }
  const TrigPoly& P = rep.P[static_cast<std::size_t>(n - 1)];
  cert.add("clause_ii_spec", 0.0, static_cast<double>(P.is_zero() ? 0 : (P.lo() < 0 ? 1 : 0)),
           "exact");
  const TrigPoly& Q = rep.Q[static_cast<std::size_t>(n - 1)];
  if (rep.opt.menshov) {
    cert.add("clause_iii_unorm", rec.a / rep.opt.gamma, u_norm(Q, G), "grid U-norm");
  } else {
    cert.add("clause_iii_qsup", rec.a, sup_norm(Q), "8x oversampled");
  }
  return cert;
}

}  // namespace triglab::decompose
