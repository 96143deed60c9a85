#pragma once

#include <cstdint>
#include <vector>

#include "triglab/common.hpp"
#include "triglab/fft.hpp"

namespace triglab {

/// Complex values on the uniform dyadic grid t_j = 2*pi*j/G. The normalized
/// measure of a grid subset is (point count)/G; all measure claims derived
/// from samples carry a +-2/G honesty margin.
struct SampledFunction {
  std::int64_t G = 0;
  std::vector<cplx> v;

  SampledFunction() = default;
  SampledFunction(std::int64_t grid, cplx fill);
  static SampledFunction from_cvec(std::int64_t G, const CVec& c);
  CVec to_cvec() const;

  double t(std::int64_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(G); }
  std::size_t size() const { return v.size(); }
};

void require_same_grid(const SampledFunction& f, const SampledFunction& g);

/// Subset of grid nodes (union of grid points).
struct GridMask {
  std::int64_t G = 0;
  std::vector<std::uint8_t> in;

  static GridMask full(std::int64_t G);
  static GridMask empty(std::int64_t G);
  double measure() const;  // fraction of nodes
  GridMask complement() const;
  std::size_t count() const;
};

/// Distance of convergence in measure on the grid:
/// rho(f,g) = min over k = 0..G of max(d_(k+1), k/G), where d_(1) >= ... are
/// the sorted values of |f_j - g_j| and d_(G+1) = 0. Exact for the counting
/// measure.
double rho(const SampledFunction& f, const SampledFunction& g);
double rho_to_zero(const std::vector<double>& absvals, std::int64_t G);
/// rho restricted to U: rho((f-g)*1_U, 0).
double rho_on(const SampledFunction& f, const SampledFunction& g, const GridMask& U);

/// m{ |f| > eps } as a grid fraction.
double measure_above(const SampledFunction& f, double eps);

/// Step function: finitely many arcs with constant complex values.
/// Arc i runs from breaks[i] to breaks[i+1] (wrapping at the end); breaks are
/// strictly increasing in [0, 2*pi).
struct StepFunction {
  std::vector<double> breaks;
  std::vector<cplx> vals;

  static StepFunction constant(cplx c);
  /// Indicator-style: value `inside` on [start, start+len), `outside` elsewhere.
  static StepFunction arc_indicator(double start, double len, cplx inside,
                                    cplx outside = {0.0, 0.0});
  std::size_t arc_count() const { return vals.size(); }
  cplx at(double t) const;
  SampledFunction sample(std::int64_t G) const;
  /// True Fourier coefficient (closed form).
  cplx fourier_coeff(std::int64_t n) const;
  bool vanishes_on(const GridMask& U) const;
};

/// Piecewise-constant approximation on K equal arcs (value = sample at the
/// arc midpoint), K doubling from 2 until rho(S, f) < target.
/// Throws TargetUnreachable if K would exceed G/4.
StepFunction step_approximate(const SampledFunction& f, double target);

}  // namespace triglab
