#pragma once

#include <cstdint>

#include "triglab/trigpoly.hpp"

namespace triglab::density {

/// Discrete modulated average
///   F(t) = (1/N) sum_{j=0}^{N-1} f(t - 2 pi j/N) e^{i s 2 pi j/N},
/// which acts on finite polynomials as the exact congruence filter keeping
/// the frequencies n = s (mod N). Requires N >= 2.
TrigPoly modulated_average(const TrigPoly& f, std::int64_t s, std::int64_t N);

/// Direct N-term summation (the defining formula), used as the oracle.
cplx modulated_average_direct(const TrigPoly& f, std::int64_t s, std::int64_t N,
                              double t);

/// sum over n = s (mod N), n != s of |f^(n)|: the sup-norm bound on
/// F - f^(s) e^{ist}.
double congruence_tail(const TrigPoly& f, std::int64_t s, std::int64_t N);

}  // namespace triglab::density
