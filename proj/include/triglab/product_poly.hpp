#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "triglab/common.hpp"
#include "triglab/fft.hpp"
#include "triglab/trigpoly.hpp"

namespace triglab {

/// Factored trigonometric polynomial: sum of terms
///   scale * prod_f poly_f(dilation_f * t).
/// Products of dilated factors can have virtual degree far beyond anything
/// materializable; grid values, spectral bounds and coefficient-sup bounds
/// stay cheap in this form.
struct DilatedFactor {
  TrigPoly poly;
  std::int64_t dilation = 1;
};

struct ProductTerm {
  cplx scale{1.0, 0.0};
  std::vector<DilatedFactor> factors;
};

class ProductPoly {
 public:
  ProductPoly() = default;
  static ProductPoly from_poly(const TrigPoly& p);
  static ProductPoly product(const TrigPoly& g, const TrigPoly& h, std::int64_t r);

  void add_term(ProductTerm t);
  const std::vector<ProductTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Exact values at the G grid nodes (per-factor coefficient folding).
  CVec eval_grid(std::int64_t G) const;

  /// Spectral support interval bookkeeping (exact integer arithmetic,
  /// overflow-checked): spec(sum of products) is contained in [lo, hi].
  std::int64_t spec_lo() const;
  std::int64_t spec_hi() const;
  bool analytic_spectrum() const { return empty() || spec_lo() >= 0; }

  /// Upper bound on max |coefficient|: per term the product of factor
  /// coefficient sups times the count bound of colliding products, summed.
  /// Exact for a single term with non-overlapping dilation bands.
  double coeff_sup_bound() const;

  double coeff_l1_bound() const;

  /// Total coefficient count if expanded.
  double term_count_if_expanded() const;

  /// Expand to an explicit TrigPoly when small enough.
  std::optional<TrigPoly> materialize(double max_terms = 4e6) const;

 private:
  std::vector<ProductTerm> terms_;
};

}  // namespace triglab
