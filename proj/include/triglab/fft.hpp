#pragma once

#include <cstdint>
#include <vector>

#include "triglab/common.hpp"

namespace triglab {

/// Split-complex buffer (structure-of-arrays), the working format of the
/// kernels and the FFT.
struct CVec {
  std::vector<double> re, im;

  CVec() = default;
  explicit CVec(std::size_t n) : re(n, 0.0), im(n, 0.0) {}
  std::size_t size() const { return re.size(); }
  cplx at(std::size_t j) const { return {re[j], im[j]}; }
  void set(std::size_t j, cplx z) {
    re[j] = z.real();
    im[j] = z.imag();
  }
};

/// Shared unit-circle table for a dyadic grid size G:
/// entry m is e^{2*pi*i*m/G}. Tables are cached per size.
struct PhaseTable {
  std::int64_t G = 0;
  std::vector<double> re, im;
};

const PhaseTable& phase_table(std::int64_t G);

/// In-place radix-2 FFT on a power-of-two-sized CVec.
/// forward:  X[k] = sum_j x[j] e^{-2*pi*i*jk/G}
/// inverse_unnormalized:  x[j] = sum_k X[k] e^{+2*pi*i*jk/G}
void fft_forward(CVec& v);
void fft_inverse_unnormalized(CVec& v);

}  // namespace triglab
