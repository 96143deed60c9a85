#pragma once

#include <cstdint>
#include <vector>

#include "triglab/certificate.hpp"
#include "triglab/common.hpp"
#include "triglab/trigpoly.hpp"

namespace triglab::synth {

enum class SpectrumKind { Analytic, Bilateral };

/// Contract for a "flat" polynomial h ~ 1.
/// Analytic: spec(h) in [1, budget], rho(h, 1) < rho_tol, max|c| < coeff_cap.
/// Bilateral: c(0) = 0, max|c| < coeff_cap (= delta), m{|h-1| > coeff_cap}
/// < c_target * gamma, ||h*||_inf <= 1/gamma.
struct FlatContract {
  SpectrumKind kind = SpectrumKind::Analytic;
  double rho_tol = 0.5;
  double coeff_cap = 0.5;
  double gamma = 0.0;     // bilateral only
  double c_target = 4.0;  // bilateral only
  // Optional split of the rho tolerance into an explicit value tube and bad
  // measure (both 0 = derive from rho_tol). With the split set, the analytic
  // verifier checks m{|h-1| > tube} < bad_measure instead of rho(h,1).
  double tube = 0.0;
  double bad_measure = 0.0;
};

struct SynthOptions {
  std::int64_t degree_budget = 4096;
  std::int64_t degree_start = 64;
  std::uint64_t seed = 1;
  int max_iters = 4000;     // per degree stage
  int check_every = 20;     // candidate verification cadence
  std::int64_t grid_factor = 8;
  double inner = 0.9;          // coefficient-cap fraction used by the solver
  double tube_inner = 0.8;     // value-tube fraction (between-node headroom)
  double measure_inner = 0.92; // bad-measure fraction
  double relax = 1.7;          // over-relaxation of the adaptive-phase steps
};

struct SynthResult {
  bool success = false;
  TrigPoly h;
  Certificate cert;  // independent verifier, fresh grid at 4x synthesis grid
  std::int64_t largest_degree_tried = 0;
  std::int64_t iterations = 0;
  std::string failure_reason;
  // Fejer-monotonicity monitor: distance to the value set before each
  // support projection during the convex (fixed exceptional arc) opening
  // phase of the last degree stage. Non-increase here is an invariant.
  std::vector<double> dist_trace;
};

/// Energy lower bound sum |c(n)|^2 >= m e^{2J/m} - 1, J = (1-m) ln(1/tube),
/// forced by the analytic spectrum (Jensen's inequality at z = 0 applied to
/// h - 1). Returns 0 when the contract is loose (tube >= 1), +inf (1e300)
/// when the exponent overflows doubles.
double flat_energy_floor(double tube, double bad_measure);

/// Alternating projections between the coefficient-support/cap set and the
/// value-tube set, degree doubling up to the budget. Every returned h has
/// passed the independent verifier; the synthesizer itself is untrusted.
SynthResult synthesize_flat(const FlatContract& c, const SynthOptions& opt);

/// Contract-level wrappers.
SynthResult synth_flat_analytic(double eps, std::int64_t budget, std::uint64_t seed);
SynthResult synth_flat_analytic_ex(double rho_tol, double coeff_cap,
                                   std::int64_t budget, std::uint64_t seed);
SynthResult synth_flat_bilateral(double gamma, double delta, double c_target,
                                 std::int64_t budget, std::uint64_t seed);

/// Evaluates every clause of the contract on a fresh grid (callers pass 4x
/// the synthesis grid). Pure; trusts nothing about how h was produced.
Certificate verify_flat_contract(const TrigPoly& h, const FlatContract& c,
                                 std::int64_t grid);

}  // namespace triglab::synth
