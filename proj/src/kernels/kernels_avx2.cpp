// AVX2 variants of the split-complex kernels. Compiled with -mavx2 -mfma and
// only dispatched to when the CPU reports AVX2, so no runtime guards here.

#include "triglab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace triglab::kernels {
namespace {

void a_cmul(double* ar, double* ai, const double* br, const double* bi,
            std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d xr = _mm256_loadu_pd(ar + j);
    __m256d xi = _mm256_loadu_pd(ai + j);
    __m256d yr = _mm256_loadu_pd(br + j);
    __m256d yi = _mm256_loadu_pd(bi + j);
    __m256d re = _mm256_fmsub_pd(xr, yr, _mm256_mul_pd(xi, yi));
    __m256d im = _mm256_fmadd_pd(xr, yi, _mm256_mul_pd(xi, yr));
    _mm256_storeu_pd(ar + j, re);
    _mm256_storeu_pd(ai + j, im);
  }
  for (; j < n; ++j) {
    double re = ar[j] * br[j] - ai[j] * bi[j];
    double im = ar[j] * bi[j] + ai[j] * br[j];
    ar[j] = re;
    ai[j] = im;
  }
}

void a_caxpy(double* dr, double* di, const double* sr, const double* si,
             double cr, double ci, std::size_t n) {
  __m256d vcr = _mm256_set1_pd(cr);
  __m256d vci = _mm256_set1_pd(ci);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d xr = _mm256_loadu_pd(sr + j);
    __m256d xi = _mm256_loadu_pd(si + j);
    __m256d re = _mm256_fmsub_pd(vcr, xr, _mm256_mul_pd(vci, xi));
    __m256d im = _mm256_fmadd_pd(vcr, xi, _mm256_mul_pd(vci, xr));
    _mm256_storeu_pd(dr + j, _mm256_add_pd(_mm256_loadu_pd(dr + j), re));
    _mm256_storeu_pd(di + j, _mm256_add_pd(_mm256_loadu_pd(di + j), im));
  }
  for (; j < n; ++j) {
    dr[j] += cr * sr[j] - ci * si[j];
    di[j] += cr * si[j] + ci * sr[j];
  }
}

void a_abs2(const double* re, const double* im, double* dst, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d r = _mm256_loadu_pd(re + j);
    __m256d i = _mm256_loadu_pd(im + j);
    _mm256_storeu_pd(dst + j, _mm256_fmadd_pd(r, r, _mm256_mul_pd(i, i)));
  }
  for (; j < n; ++j) dst[j] = re[j] * re[j] + im[j] * im[j];
}

double a_max_abs2(const double* re, const double* im, std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d r = _mm256_loadu_pd(re + j);
    __m256d i = _mm256_loadu_pd(im + j);
    vm = _mm256_max_pd(vm, _mm256_fmadd_pd(r, r, _mm256_mul_pd(i, i)));
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, vm);
  double m = std::max(std::max(buf[0], buf[1]), std::max(buf[2], buf[3]));
  for (; j < n; ++j) m = std::max(m, re[j] * re[j] + im[j] * im[j]);
  return m;
}

double a_sum_abs2(const double* re, const double* im, std::size_t n) {
  __m256d vs = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d r = _mm256_loadu_pd(re + j);
    __m256d i = _mm256_loadu_pd(im + j);
    vs = _mm256_add_pd(vs, _mm256_fmadd_pd(r, r, _mm256_mul_pd(i, i)));
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, vs);
  double s = buf[0] + buf[1] + buf[2] + buf[3];
  for (; j < n; ++j) s += re[j] * re[j] + im[j] * im[j];
  return s;
}

std::size_t a_count_abs2_above(const double* re, const double* im, double thr2,
                               std::size_t n) {
  __m256d vt = _mm256_set1_pd(thr2);
  std::size_t c = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d r = _mm256_loadu_pd(re + j);
    __m256d i = _mm256_loadu_pd(im + j);
    __m256d a2 = _mm256_fmadd_pd(r, r, _mm256_mul_pd(i, i));
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(a2, vt, _CMP_GT_OQ));
    c += static_cast<std::size_t>(__builtin_popcount(mask));
  }
  for (; j < n; ++j)
    if (re[j] * re[j] + im[j] * im[j] > thr2) ++c;
  return c;
}

void a_clip_disk(double* re, double* im, double cr, double ci, double radius,
                 std::size_t n) {
  __m256d vcr = _mm256_set1_pd(cr);
  __m256d vci = _mm256_set1_pd(ci);
  __m256d vr2 = _mm256_set1_pd(radius * radius);
  __m256d vr = _mm256_set1_pd(radius);
  __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d xr = _mm256_loadu_pd(re + j);
    __m256d xi = _mm256_loadu_pd(im + j);
    __m256d dr = _mm256_sub_pd(xr, vcr);
    __m256d di = _mm256_sub_pd(xi, vci);
    __m256d d2 = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
    __m256d out = _mm256_cmp_pd(d2, vr2, _CMP_GT_OQ);
    if (_mm256_movemask_pd(out)) {
      __m256d s = _mm256_div_pd(vr, _mm256_sqrt_pd(d2));
      s = _mm256_blendv_pd(one, s, out);
      xr = _mm256_fmadd_pd(dr, s, vcr);
      xi = _mm256_fmadd_pd(di, s, vci);
      _mm256_storeu_pd(re + j, xr);
      _mm256_storeu_pd(im + j, xi);
    }
  }
  for (; j < n; ++j) {
    double dr = re[j] - cr, di = im[j] - ci;
    double d2 = dr * dr + di * di;
    if (d2 > radius * radius) {
      double s = radius / std::sqrt(d2);
      re[j] = cr + dr * s;
      im[j] = ci + di * s;
    }
  }
}

void a_clip_cap(double* re, double* im, double cap, std::size_t n) {
  a_clip_disk(re, im, 0.0, 0.0, cap, n);
}

void a_scale(double* re, double* im, double s, std::size_t n) {
  __m256d vs = _mm256_set1_pd(s);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    _mm256_storeu_pd(re + j, _mm256_mul_pd(_mm256_loadu_pd(re + j), vs));
    _mm256_storeu_pd(im + j, _mm256_mul_pd(_mm256_loadu_pd(im + j), vs));
  }
  for (; j < n; ++j) {
    re[j] *= s;
    im[j] *= s;
  }
}

void a_fft_stage(double* re, double* im, const double* twr, const double* twi,
                 std::size_t half, std::size_t blocks, std::size_t stride) {
  const std::size_t len = half * 2;
  if (half < 4) {
    // Short butterflies: scalar is cheaper than lane shuffling.
    for (std::size_t b = 0; b < blocks; ++b) {
      double* r0 = re + b * len;
      double* i0 = im + b * len;
      for (std::size_t k = 0; k < half; ++k) {
        double wr = twr[k * stride], wi = twi[k * stride];
        double xr = r0[k + half], xi = i0[k + half];
        double tr = wr * xr - wi * xi;
        double ti = wr * xi + wi * xr;
        r0[k + half] = r0[k] - tr;
        i0[k + half] = i0[k] - ti;
        r0[k] += tr;
        i0[k] += ti;
      }
    }
    return;
  }
  const __m256i vidx = _mm256_set_epi64x(3 * static_cast<long long>(stride),
                                         2 * static_cast<long long>(stride),
                                         1 * static_cast<long long>(stride), 0);
  for (std::size_t b = 0; b < blocks; ++b) {
    double* r0 = re + b * len;
    double* i0 = im + b * len;
    for (std::size_t k = 0; k < half; k += 4) {
      __m256d wr, wi;
      if (stride == 1) {
        wr = _mm256_loadu_pd(twr + k);
        wi = _mm256_loadu_pd(twi + k);
      } else {
        wr = _mm256_i64gather_pd(twr + k * stride, vidx, 8);
        wi = _mm256_i64gather_pd(twi + k * stride, vidx, 8);
      }
      __m256d xr = _mm256_loadu_pd(r0 + k + half);
      __m256d xi = _mm256_loadu_pd(i0 + k + half);
      __m256d tr = _mm256_fmsub_pd(wr, xr, _mm256_mul_pd(wi, xi));
      __m256d ti = _mm256_fmadd_pd(wr, xi, _mm256_mul_pd(wi, xr));
      __m256d ur = _mm256_loadu_pd(r0 + k);
      __m256d ui = _mm256_loadu_pd(i0 + k);
      _mm256_storeu_pd(r0 + k + half, _mm256_sub_pd(ur, tr));
      _mm256_storeu_pd(i0 + k + half, _mm256_sub_pd(ui, ti));
      _mm256_storeu_pd(r0 + k, _mm256_add_pd(ur, tr));
      _mm256_storeu_pd(i0 + k, _mm256_add_pd(ui, ti));
    }
  }
}

void a_prefix_walk(std::size_t nnz, const std::int64_t* nmod, const double* cre,
                   const double* cim, const double* tabre, const double* tabi,
                   std::int64_t G, std::int64_t j0, std::size_t cnt,
                   double* widths, double* store) {
  if (cnt < 4) {
    scalar().prefix_walk(nnz, nmod, cre, cim, tabre, tabi, G, j0, cnt, widths,
                         store);
    return;
  }
  const __m256d half = _mm256_set1_pd(0.70710678118654752440);
  __m256d ax = _mm256_setzero_pd(), ay = _mm256_setzero_pd();
  __m256d mn0 = _mm256_setzero_pd(), mx0 = _mm256_setzero_pd();
  __m256d mn1 = _mm256_setzero_pd(), mx1 = _mm256_setzero_pd();
  __m256d mn2 = _mm256_setzero_pd(), mx2 = _mm256_setzero_pd();
  __m256d mn3 = _mm256_setzero_pd(), mx3 = _mm256_setzero_pd();
  if (store) {
    _mm256_storeu_pd(store + 0, _mm256_setzero_pd());
    _mm256_storeu_pd(store + 4, _mm256_setzero_pd());
  }
  alignas(32) std::int64_t idx[4];
  for (std::size_t k = 0; k < nnz; ++k) {
    const std::int64_t m = nmod[k];
    idx[0] = (m * j0) % G;
    idx[1] = (m * (j0 + 1)) % G;
    idx[2] = (m * (j0 + 2)) % G;
    idx[3] = (m * (j0 + 3)) % G;
    __m256i vi = _mm256_load_si256(reinterpret_cast<const __m256i*>(idx));
    __m256d pr = _mm256_i64gather_pd(tabre, vi, 8);
    __m256d pi = _mm256_i64gather_pd(tabi, vi, 8);
    __m256d vcr = _mm256_set1_pd(cre[k]);
    __m256d vci = _mm256_set1_pd(cim[k]);
    ax = _mm256_add_pd(ax, _mm256_fmsub_pd(vcr, pr, _mm256_mul_pd(vci, pi)));
    ay = _mm256_add_pd(ay, _mm256_fmadd_pd(vcr, pi, _mm256_mul_pd(vci, pr)));
    if (store) {
      _mm256_storeu_pd(store + (k + 1) * 8 + 0, ax);
      _mm256_storeu_pd(store + (k + 1) * 8 + 4, ay);
    }
    __m256d d2 = _mm256_mul_pd(_mm256_add_pd(ax, ay), half);
    __m256d d3 = _mm256_mul_pd(_mm256_sub_pd(ax, ay), half);
    mn0 = _mm256_min_pd(mn0, ax);
    mx0 = _mm256_max_pd(mx0, ax);
    mn1 = _mm256_min_pd(mn1, ay);
    mx1 = _mm256_max_pd(mx1, ay);
    mn2 = _mm256_min_pd(mn2, d2);
    mx2 = _mm256_max_pd(mx2, d2);
    mn3 = _mm256_min_pd(mn3, d3);
    mx3 = _mm256_max_pd(mx3, d3);
  }
  alignas(32) double b0[4], b1[4], b2[4], b3[4], b4[4], b5[4], b6[4], b7[4];
  _mm256_store_pd(b0, mn0);
  _mm256_store_pd(b1, mx0);
  _mm256_store_pd(b2, mn1);
  _mm256_store_pd(b3, mx1);
  _mm256_store_pd(b4, mn2);
  _mm256_store_pd(b5, mx2);
  _mm256_store_pd(b6, mn3);
  _mm256_store_pd(b7, mx3);
  for (std::size_t s = 0; s < 4; ++s) {
    double* w = widths + s * 8;
    w[0] = b0[s];
    w[1] = b1[s];
    w[2] = b2[s];
    w[3] = b3[s];
    w[4] = b4[s];
    w[5] = b5[s];
    w[6] = b6[s];
    w[7] = b7[s];
  }
}

}  // namespace

const Table& avx2_table() {
  static const Table t = {
      "avx2",         a_cmul,     a_caxpy,    a_abs2,
      a_max_abs2,     a_sum_abs2, a_count_abs2_above,
      a_clip_disk,    a_clip_cap, a_scale,    a_fft_stage,
      a_prefix_walk,
  };
  return t;
}

}  // namespace triglab::kernels

#endif  // x86-64
