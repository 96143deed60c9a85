#pragma once

#include <cstddef>
#include <cstdint>

// Inner arithmetic loops on split-complex (separate re/im) arrays.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active table is chosen once at startup from CPUID; setting the
// environment variable TRIGLAB_NO_SIMD=1 forces the scalar table. The two
// tables are equivalence-tested against each other in the unit suite.

namespace triglab::kernels {

struct Table {
  const char* name;

  // a *= b, elementwise complex multiply.
  void (*cmul)(double* ar, double* ai, const double* br, const double* bi,
               std::size_t n);
  // d += (cr + i*ci) * s, constant complex times array.
  void (*caxpy)(double* dr, double* di, const double* sr, const double* si,
                double cr, double ci, std::size_t n);
  // dst[j] = re[j]^2 + im[j]^2
  void (*abs2)(const double* re, const double* im, double* dst, std::size_t n);
  double (*max_abs2)(const double* re, const double* im, std::size_t n);
  double (*sum_abs2)(const double* re, const double* im, std::size_t n);
  std::size_t (*count_abs2_above)(const double* re, const double* im,
                                  double thr2, std::size_t n);
  // Project values into the closed disk |z - c| <= radius.
  void (*clip_disk)(double* re, double* im, double cr, double ci, double radius,
                    std::size_t n);
  // Clip moduli to <= cap (phase preserved).
  void (*clip_cap)(double* re, double* im, double cap, std::size_t n);
  void (*scale)(double* re, double* im, double s, std::size_t n);

  // One radix-2 butterfly stage over `blocks` contiguous blocks of length
  // 2*half; twiddle for index k is (twr[k*stride], twi[k*stride]).
  void (*fft_stage)(double* re, double* im, const double* twr,
                    const double* twi, std::size_t half, std::size_t blocks,
                    std::size_t stride);

  // Prefix walk for the maximal partial-sum operator at grid nodes
  // j0..j0+cnt-1 of a uniform grid of size G (cnt <= 4).
  //
  // The polynomial is given by its coefficients (cre,cim) at sorted
  // frequencies; nmod[k] = frequency_k mod G indexes the phase table
  // (tabre,tabi)[m] = e^{2*pi*i*m/G}. For each node the walk visits prefix
  // values A_k = sum_{l<=k} c_l e^{i n_l t_j} (plus the initial 0) and
  // records min/max of the projections onto 4 fixed directions
  // (1,0),(0,1),(1,1)/sqrt2,(1,-1)/sqrt2 in widths[node*8..node*8+7] as
  // {min0,max0,min1,max1,...}. When store is non-null, prefix point k
  // (k = 0 is the initial 0) for node s is written planar per k:
  // x at store[k*2*cnt + s], y at store[k*2*cnt + cnt + s].
  void (*prefix_walk)(std::size_t nnz, const std::int64_t* nmod,
                      const double* cre, const double* cim, const double* tabre,
                      const double* tabi, std::int64_t G, std::int64_t j0,
                      std::size_t cnt, double* widths, double* store);
};

const Table& scalar();
const Table& active();
bool avx2_available();

}  // namespace triglab::kernels
