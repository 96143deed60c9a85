#include <algorithm>
#include <cmath>

#include "triglab/kernels.hpp"

namespace triglab::kernels {
namespace {

void s_cmul(double* ar, double* ai, const double* br, const double* bi,
            std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double re = ar[j] * br[j] - ai[j] * bi[j];
    double im = ar[j] * bi[j] + ai[j] * br[j];
    ar[j] = re;
    ai[j] = im;
  }
}

void s_caxpy(double* dr, double* di, const double* sr, const double* si,
             double cr, double ci, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    dr[j] += cr * sr[j] - ci * si[j];
    di[j] += cr * si[j] + ci * sr[j];
  }
}

void s_abs2(const double* re, const double* im, double* dst, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) dst[j] = re[j] * re[j] + im[j] * im[j];
}

double s_max_abs2(const double* re, const double* im, std::size_t n) {
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    m = std::max(m, re[j] * re[j] + im[j] * im[j]);
  return m;
}

double s_sum_abs2(const double* re, const double* im, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += re[j] * re[j] + im[j] * im[j];
  return s;
}

std::size_t s_count_abs2_above(const double* re, const double* im, double thr2,
                               std::size_t n) {
  std::size_t c = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (re[j] * re[j] + im[j] * im[j] > thr2) ++c;
  return c;
}

void s_clip_disk(double* re, double* im, double cr, double ci, double radius,
                 std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double dr = re[j] - cr, di = im[j] - ci;
    double d2 = dr * dr + di * di;
    if (d2 > radius * radius) {
      double s = radius / std::sqrt(d2);
      re[j] = cr + dr * s;
      im[j] = ci + di * s;
    }
  }
}

void s_clip_cap(double* re, double* im, double cap, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d2 = re[j] * re[j] + im[j] * im[j];
    if (d2 > cap * cap) {
      double s = cap / std::sqrt(d2);
      re[j] *= s;
      im[j] *= s;
    }
  }
}

void s_scale(double* re, double* im, double s, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    re[j] *= s;
    im[j] *= s;
  }
}

void s_fft_stage(double* re, double* im, const double* twr, const double* twi,
                 std::size_t half, std::size_t blocks, std::size_t stride) {
  const std::size_t len = half * 2;
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
}

void s_prefix_walk(std::size_t nnz, const std::int64_t* nmod, const double* cre,
                   const double* cim, const double* tabre, const double* tabi,
                   std::int64_t G, std::int64_t j0, std::size_t cnt,
                   double* widths, double* store) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  for (std::size_t s = 0; s < cnt; ++s) {
    std::int64_t j = j0 + static_cast<std::int64_t>(s);
    double ax = 0.0, ay = 0.0;
    double mn0 = 0, mx0 = 0, mn1 = 0, mx1 = 0, mn2 = 0, mx2 = 0, mn3 = 0,
           mx3 = 0;
    if (store) {
      store[0 * 2 * cnt + s] = 0.0;
      store[0 * 2 * cnt + cnt + s] = 0.0;
    }
    for (std::size_t k = 0; k < nnz; ++k) {
      std::int64_t idx = (nmod[k] * j) % G;
      double pr = tabre[idx], pi = tabi[idx];
      ax += cre[k] * pr - cim[k] * pi;
      ay += cre[k] * pi + cim[k] * pr;
      if (store) {
        store[(k + 1) * 2 * cnt + s] = ax;
        store[(k + 1) * 2 * cnt + cnt + s] = ay;
      }
      double d2 = (ax + ay) * kInvSqrt2;
      double d3 = (ax - ay) * kInvSqrt2;
      mn0 = std::min(mn0, ax);
      mx0 = std::max(mx0, ax);
      mn1 = std::min(mn1, ay);
      mx1 = std::max(mx1, ay);
      mn2 = std::min(mn2, d2);
      mx2 = std::max(mx2, d2);
      mn3 = std::min(mn3, d3);
      mx3 = std::max(mx3, d3);
    }
    double* w = widths + s * 8;
    w[0] = mn0;
    w[1] = mx0;
    w[2] = mn1;
    w[3] = mx1;
    w[4] = mn2;
    w[5] = mx2;
    w[6] = mn3;
    w[7] = mx3;
  }
}

}  // namespace

const Table& scalar() {
  static const Table t = {
      "scalar",       s_cmul,     s_caxpy,    s_abs2,
      s_max_abs2,     s_sum_abs2, s_count_abs2_above,
      s_clip_disk,    s_clip_cap, s_scale,    s_fft_stage,
      s_prefix_walk,
  };
  return t;
}

}  // namespace triglab::kernels
