#pragma once

#include <cstdint>
#include <optional>

#include "triglab/certificate.hpp"
#include "triglab/product_poly.hpp"
#include "triglab/sampled.hpp"
#include "triglab/synth.hpp"
#include "triglab/trapezoid.hpp"

namespace triglab::constructors {

/// Knobs for the internal flat-polynomial synthesis. Zeros mean the strict
/// default wiring: rho tolerance delta/3 and coefficient cap delta^2/24.
/// Those constants make the transfer bound close with no measurement, but
/// their energy floor grows like exp(c/delta), so small delta runs are only
/// reachable with explicit relaxed settings (the certificate still measures
/// everything it claims either way).
struct FlatWiring {
  double rho_tol = 0.0;
  double coeff_cap = 0.0;
  std::int64_t budget = 1 << 15;
  std::uint64_t seed = 1;
  int max_iters = 4000;
};

struct IndicatorResult {
  ProductPoly P;  // g * h_[r] in factored form
  std::optional<TrigPoly> expanded;
  TrigPoly g;
  TrigPoly h;
  std::int64_t r = 0;
  double hstar_sup = 0.0;
  Certificate cert;
};

/// Indicator polynomial: P = g * h_[r] with h flat analytic and g a
/// trapezoid partial sum. Certificate clauses:
///   spec_nonneg:     min frequency >= 0 (exact bookkeeping)
///   rho_indicator:   rho(P, 1_I) < delta (grid)
///   offset_transfer: max over nodes outside I_delta of
///                    |g(t)| ||h*|| + 2 g*(t) ||h^||  < delta
/// Throws InvalidParams for bad delta, SynthFailed when the flat synthesis
/// is out of reach (the energy floor is quoted in the message).
IndicatorResult indicator_polynomial(const Arc& I, double delta,
                                     const FlatWiring& wiring = {},
                                     std::int64_t cert_grid = 4096);

struct StepPieceInfo {
  cplx value;
  Arc arc;
  double delta_piece = 0.0;
};

struct StepPolyResult {
  ProductPoly P;
  std::optional<TrigPoly> expanded;
  std::vector<StepPieceInfo> pieces;
  Certificate cert;
};

/// P = sum_j v_j * indicator(I_j, delta_j) over the nonzero arcs of phi,
/// delta_j = delta / (m * max(1, |v_j|)). Clauses:
///   spec_nonneg, rho_step (rho(P, phi) < delta),
///   quiet_maximal (rho(P'*1_U, 0) < delta via the summed transfer bound).
StepPolyResult step_polynomial(const StepFunction& phi, const GridMask& U,
                               double delta, const FlatWiring& wiring = {},
                               std::int64_t cert_grid = 4096);

struct PQPair {
  ProductPoly P;
  std::optional<TrigPoly> P_expanded;
  TrigPoly Q;
  Certificate cert;
  std::int64_t fejer_degree = 0;
};

/// Q is the Fejer mean of psi clipped to modulus <= 0.99a (so ||Q||_inf <
/// a holds by kernel positivity); phi is a step approximation of psi - Q
/// vanishing on U; P comes from step_polynomial. Clauses (1),(5),(6),(7).
PQPair pq_pair(const StepFunction& psi, const GridMask& U, double a,
               double delta, const FlatWiring& wiring = {},
               std::int64_t cert_grid = 4096);

/// U-norm variant: Q is replaced by Q * h_[r] with h bilateral flat; clause
/// (7) becomes ||Q||_U < a/gamma and (6) becomes the level-set form
/// m{|P+Q-psi| > delta} < C gamma with the achieved constant reported.
PQPair pq_pair_u(const StepFunction& psi, const GridMask& U, double a,
                 double gamma, double delta, double c_target,
                 const FlatWiring& wiring = {}, std::int64_t cert_grid = 4096);

/// Arcs (start node, node count) of the mask's in-set, wrapping allowed.
std::vector<std::pair<std::int64_t, std::int64_t>> mask_runs(const GridMask& m);

}  // namespace triglab::constructors
