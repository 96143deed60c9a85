#pragma once

#include <cstdint>
#include <vector>

#include "triglab/common.hpp"
#include "triglab/trigpoly.hpp"

namespace triglab {

// Maximal partial-sum function P*(t) = sup over coefficient segments [l, m]
// (single terms included) of |sum_{n=l}^{m} c(n) e^{int}|. Pointwise this is
// the diameter of the planar prefix-value set {0 = A_{lo-1}, A_{lo}, ..,
// A_{hi}} with A_k(t) = sum_{n<=k} c(n) e^{int}.

/// Exact P* at every grid node (prefix walk + exact planar diameter:
/// directional prune, then convex hull + rotating calipers, with an O(d^2)
/// scan for small point sets).
std::vector<double> maximal_at_grid(const TrigPoly& p, std::int64_t G);

/// O(d^2) segment enumeration; independent path used as the oracle.
std::vector<double> maximal_bruteforce_at_grid(const TrigPoly& p, std::int64_t G);

struct SampledFunction;
/// Grid form with the sampling precondition G >= 2*degree + 2.
SampledFunction maximal(const TrigPoly& p, std::int64_t G);

/// Sup estimate of ||P*||_inf with 8x-degree oversampling (capped at
/// max_grid to keep huge polynomials affordable; the cap is recorded by the
/// caller when it matters).
double maximal_sup(const TrigPoly& p, std::int64_t max_grid = (1 << 16));

/// Exact diameter of a planar point set.
double planar_diameter(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace triglab
