#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "triglab/common.hpp"
#include "triglab/fft.hpp"

namespace triglab {

struct SampledFunction;

/// Trigonometric polynomial P(t) = sum c(n) e^{int} over a finite set of
/// integer frequencies.
///
/// Canonical form: frequencies strictly increasing, every stored coefficient
/// nonzero (exact zeros are dropped; coefficients are constructed, not
/// measured, so the comparison is exact). spec(P) is the stored frequency
/// set, lo/hi its extremes, degree = max(|lo|, |hi|) with deg(0) = 0.
class TrigPoly {
 public:
  TrigPoly() = default;

  static TrigPoly zero() { return TrigPoly(); }
  static TrigPoly constant(cplx c);
  static TrigPoly monomial(std::int64_t n, cplx c);
  /// Builds canonical form; throws InvalidParams on duplicate frequencies.
  static TrigPoly from_terms(std::vector<std::pair<std::int64_t, cplx>> terms);

  bool is_zero() const { return freq_.empty(); }
  std::size_t term_count() const { return freq_.size(); }
  std::int64_t lo() const;
  std::int64_t hi() const;
  std::int64_t degree() const;

  const std::vector<std::int64_t>& freqs() const { return freq_; }
  const std::vector<cplx>& coeffs() const { return coef_; }
  cplx coeff(std::int64_t n) const;  // 0 if absent

  /// P(r t); spec scales by r exactly.
  TrigPoly dilate(std::int64_t r) const;
  /// Restriction to frequencies in [l, m].
  TrigPoly segment(std::int64_t l, std::int64_t m) const;
  /// Symmetric partial sum: restriction to |n| <= N.
  TrigPoly symmetric_partial(std::int64_t N) const { return segment(-N, N); }

  TrigPoly operator+(const TrigPoly& o) const;
  TrigPoly operator-(const TrigPoly& o) const;
  TrigPoly scaled(cplx s) const;

  double coeff_sup() const;          // max |c(n)|
  double coeff_l1() const;           // sum |c(n)|
  double coeff_energy() const;       // sum |c(n)|^2
  double l2_norm() const;            // sqrt(coeff_energy), Parseval

 private:
  std::vector<std::int64_t> freq_;
  std::vector<cplx> coef_;
};

/// Exact coefficient convolution.
TrigPoly multiply(const TrigPoly& g, const TrigPoly& h);

/// Direct summation at one angle.
cplx eval(const TrigPoly& p, double t);

/// Values at t_j = 2*pi*j/G via coefficient folding (n mod G) and an FFT.
/// At grid nodes the fold is exact for any degree. The SampledFunction
/// overload demands G >= 2*degree + 2 (GridTooCoarse otherwise) so that the
/// samples determine the polynomial; eval_grid_folded has no such demand.
CVec eval_grid_folded(const TrigPoly& p, std::int64_t G);
SampledFunction eval_grid(const TrigPoly& p, std::int64_t G);

/// Sup-norm estimate: grid maximum with 8x-degree oversampling.
double sup_norm(const TrigPoly& p);
double sup_norm(const TrigPoly& p, std::int64_t grid);

/// U-norm: max over N >= 0 of sup_norm of the symmetric partial sum.
/// Partial sums change only at stored |n|, so the scan is over those levels.
double u_norm(const TrigPoly& p);
double u_norm(const TrigPoly& p, std::int64_t grid);

}  // namespace triglab
