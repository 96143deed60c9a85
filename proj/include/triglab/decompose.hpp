#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "triglab/certificate.hpp"
#include "triglab/sampled.hpp"
#include "triglab/trigpoly.hpp"

namespace triglab::decompose {

struct EngineOptions {
  double epsilon = 0.25;
  int rounds = 4;       // capped at 8
  std::uint64_t seed = 1;
  // menshov mode: the uniform corrector budget becomes a U-norm budget and
  // residuals are tracked in measure against c_target * gamma.
  bool menshov = false;
  double gamma = 0.5;
  double c_target = 4.0;
  std::int64_t synth_budget = 4096;  // bilateral factor budget (menshov)
};

/// One induction round. Each clause is stored as (measured, bound, pass).
struct RoundRecord {
  int n = 0;
  double rho_target = 0.0;  // 4^{-n}
  double a = 0.0;           // eps * 2^{-n}

  std::int64_t step_arcs = 0;
  double rho_step = 0.0;    // rho(S_n, f_n)
  double rho_s_zero = 0.0;  // rho(S_n, 0)
  double quiet_measure = 0.0;
  double quiet_co_measure = 0.0;  // m(U_n^c)
  bool mu_hypothesis = false;     // eps 2^{-n} < 4^{-n+1}
  bool mu_bound_pass = true;      // m(U_n^c) < 4^{-n+2} when hypothesis holds

  std::int64_t fejer_degree = 0;
  double rho_q_quiet = 0.0;  // rho((Q - psi) 1_U, 0)

  double residual_rho = 0.0;  // clause (i) measured
  std::int64_t p_min_freq = 0;  // clause (ii): >= 0
  double q_sup = 0.0;           // clause (iii) measured
  double q_bound = 0.0;
  bool clause_i = false, clause_ii = false, clause_iii = false;

  // a.e.-convergence diagnostics (measured exactly from P_n, reported)
  double pstar_quiet_rho = -1.0;   // rho(P_n^* 1_U, 0), target 4^{-n}
  double pstar_global_rho = -1.0;  // rho(P_n^*, 0) vs 2^{-n} when hypothesis
  // menshov extras
  double achieved_c = 0.0;
  double u_norm_q = 0.0;
};

struct DecompositionReport {
  EngineOptions opt;
  std::int64_t grid = 0;
  std::vector<RoundRecord> rounds;
  std::vector<TrigPoly> P, Q;
  std::vector<StepFunction> S;
  std::vector<GridMask> U;
  TrigPoly p_sum;  // analytic prefix sum_k P_k
  TrigPoly q_sum;  // corrector sum_k Q_k
  double q_sum_sup = 0.0;
  bool complete = false;
  std::string failure;

  bool all_round_clauses_pass() const;
};

/// The induction engine: per round approximate the residual by a step
/// function, split it into a uniformly small corrector Q_n (Fejer mean of
/// the clipped step target) and an analytic part P_n reproducing the loud
/// residual at the grid nodes, and verify clauses
///   (i) rho(f, sum_{k<=n} (P_k + Q_k)) < 4^{-n}
///   (ii) spec(P_n) in [0, inf) exactly
///   (iii) ||Q_n||_inf < eps 2^{-n}.
/// Rounds stop early (reports emitted up to the failing round) when a clause
/// cannot be met.
DecompositionReport analytic_decompose(const SampledFunction& f,
                                       const EngineOptions& opt);

/// U-norm variant: corrector multiplied by a dilated bilateral flat
/// polynomial; clause (iii) becomes a U-norm budget and residuals are
/// reported in measure with the achieved constant.
DecompositionReport menshov_decompose(const SampledFunction& f, EngineOptions opt);

/// Re-checks clauses (i)-(iii) of round n from the stored polynomials,
/// independently of the engine's accumulation path.
Certificate verify_round(const SampledFunction& f, const DecompositionReport& rep,
                         int n);

}  // namespace triglab::decompose
