#include "triglab/density.hpp"

#include <cmath>

#include "triglab/common.hpp"

namespace triglab::density {

TrigPoly modulated_average(const TrigPoly& f, std::int64_t s, std::int64_t N) {
  if (N < 2) fail(ErrorCode::InvalidParams, "need N >= 2");
  std::vector<std::pair<std::int64_t, cplx>> terms;
  for (std::size_t i = 0; i < f.term_count(); ++i) {
    std::int64_t n = f.freqs()[i];
    std::int64_t d = (n - s) % N;
    if (d == 0) terms.emplace_back(n, f.coeffs()[i]);
  }
  return TrigPoly::from_terms(std::move(terms));
}

cplx modulated_average_direct(const TrigPoly& f, std::int64_t s, std::int64_t N,
                              double t) {
  cplx acc{0.0, 0.0};
  for (std::int64_t j = 0; j < N; ++j) {
    double u = kTwoPi * static_cast<double>(j) / static_cast<double>(N);
    double ph = static_cast<double>(s) * u;
    acc += eval(f, t - u) * cplx(std::cos(ph), std::sin(ph));
  }
  return acc / static_cast<double>(N);
}

double congruence_tail(const TrigPoly& f, std::int64_t s, std::int64_t N) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.term_count(); ++i) {
    std::int64_t n = f.freqs()[i];
    if (n != s && (n - s) % N == 0) sum += std::abs(f.coeffs()[i]);
  }
  return sum;
}

}  // namespace triglab::density
