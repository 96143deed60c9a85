#pragma once

#include <cstdint>

#include "triglab/certificate.hpp"
#include "triglab/common.hpp"
#include "triglab/trigpoly.hpp"

namespace triglab {

/// Proper arc [start, start+length) on the circle, angles in radians.
struct Arc {
  double start = 0.0;
  double length = 0.0;
  bool empty() const { return length <= 0.0; }
};

struct TrapezoidResult {
  TrigPoly g;
  Certificate cert;
  std::int64_t truncation = 0;  // partial-sum cutoff N
  double ramp = 0.0;
};

/// Fourier coefficient of the trapezoid with plateau I and linear ramps of
/// width `ramp` on both sides (support = I widened by `ramp`).
cplx trapezoid_coeff(const Arc& I, double ramp, std::int64_t n);

/// Partial Fourier sum g of the trapezoid interpolating 1_I, ramp width
/// delta/2 per side, truncated so the coefficient tail is below both delta/6
/// and delta/(2*hstar_bound). Certificate clauses:
///   off_neighborhood: |g| < delta/(2*hstar_bound) outside I_delta
///   rho_indicator:    rho(g, 1_I) < delta/3
///   maximal_sup:      ||g*||_inf < 6/delta
/// Throws InfeasibleRamp when the arc plus ramps wraps the circle.
TrapezoidResult trapezoid_indicator(const Arc& I, double delta,
                                    double hstar_bound,
                                    std::int64_t cert_grid = 4096);

}  // namespace triglab
