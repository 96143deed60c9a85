#pragma once

#include <cstdint>

#include "triglab/certificate.hpp"
#include "triglab/trigpoly.hpp"

namespace triglab {

struct SpecialProductResult {
  TrigPoly product;  // g(t) * h(r t)
  Certificate cert;
  double hstar_sup = 0.0;
  double h_coeff_sup = 0.0;
  std::int64_t refined_points = 0;  // nodes that needed the exact diameter
};

/// P = g * h_[r] with r > 3*deg(g) (DilationTooSmall otherwise), plus a
/// certificate of the maximal-function transfer bound
///   P*(t) <= |g(t)| * ||h*||_inf + 2 g*(t) * ||h^||_inf
/// checked at every node of the given grid. P*(t) is evaluated through an
/// exact block regrouping of its prefix values:
///   A_{(m,k)}(t) = g(t) * H_{m-1}(rt) + G_k(t) * c_h(m) e^{i r n_m t},
/// whose planar diameter is bounded above via 32-direction support tables of
/// the g-prefix set (support-function interpolation); nodes where the bound
/// does not settle the comparison fall back to the exact diameter.
/// The certificate clause "transfer_pointwise" stores the worst ratio
/// P*_bound / rhs over the grid (bound 1).
SpecialProductResult special_product(const TrigPoly& g, const TrigPoly& h,
                                     std::int64_t r, std::int64_t grid = 4096);

}  // namespace triglab
