#include "triglab/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "triglab/kernels.hpp"
#include "triglab/sampled.hpp"

namespace triglab {
namespace {

double diameter_scan(const double* xs, const double* ys, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
      best = std::max(best, dx * dx + dy * dy);
    }
  return std::sqrt(best);
}

struct Pt {
  double x, y;
};

double cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Monotone chain hull + rotating calipers.
double diameter_hull(std::vector<Pt>& pts) {
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Pt& a, const Pt& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n == 1) return 0.0;
  std::vector<Pt> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  const std::size_t h = hull.size();
  if (h == 1) return 0.0;
  if (h == 2) {
    double dx = hull[0].x - hull[1].x, dy = hull[0].y - hull[1].y;
    return std::sqrt(dx * dx + dy * dy);
  }
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < h; ++i) {
    std::size_t ni = (i + 1) % h;
    while (true) {
      std::size_t nj = (j + 1) % h;
      double c1 = std::abs(cross(hull[i], hull[ni], hull[j]));
      double c2 = std::abs(cross(hull[i], hull[ni], hull[nj]));
      if (c2 > c1) j = nj;
      else break;
    }
    for (std::size_t cand : {j, (j + 1) % h}) {
      double dx = hull[i].x - hull[cand].x, dy = hull[i].y - hull[cand].y;
      best = std::max(best, dx * dx + dy * dy);
    }
  }
  return std::sqrt(best);
}

// Exact diameter with a directional prune: points strictly inside the hull of
// the 16 directional extremes cannot be hull vertices, so dropping them never
// changes the diameter.
double diameter_pruned(const double* xs, const double* ys, std::size_t n) {
  if (n <= 96) return diameter_scan(xs, ys, n);
  constexpr int kDirs = 8;  // covers 16 half-directions via min and max
  double cs[kDirs], sn[kDirs];
  for (int m = 0; m < kDirs; ++m) {
    double a = kPi * m / kDirs;
    cs[m] = std::cos(a);
    sn[m] = std::sin(a);
  }
  std::size_t argmin[kDirs], argmax[kDirs];
  double mn[kDirs], mx[kDirs];
  for (int m = 0; m < kDirs; ++m) {
    mn[m] = 1e300;
    mx[m] = -1e300;
    argmin[m] = argmax[m] = 0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int m = 0; m < kDirs; ++m) {
      double d = xs[i] * cs[m] + ys[i] * sn[m];
      if (d < mn[m]) {
        mn[m] = d;
        argmin[m] = i;
      }
      if (d > mx[m]) {
        mx[m] = d;
        argmax[m] = i;
      }
    }
  }
  // Hull of the extreme points, ordered by angle around their centroid.
  std::vector<Pt> ext;
  for (int m = 0; m < kDirs; ++m) {
    ext.push_back({xs[argmin[m]], ys[argmin[m]]});
    ext.push_back({xs[argmax[m]], ys[argmax[m]]});
  }
  std::vector<Pt> poly = ext;
  std::sort(poly.begin(), poly.end(), [](const Pt& a, const Pt& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  poly.erase(std::unique(poly.begin(), poly.end(),
                         [](const Pt& a, const Pt& b) {
                           return a.x == b.x && a.y == b.y;
                         }),
             poly.end());
  if (poly.size() < 3) {
    std::vector<Pt> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = {xs[i], ys[i]};
    return diameter_hull(all);
  }
  // Build the extreme-point hull once.
  std::vector<Pt> hullp = poly;
  {
    std::vector<Pt> tmp = hullp;
    std::vector<Pt> hull(2 * tmp.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < tmp.size(); ++i) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], tmp[i]) <= 0) --k;
      hull[k++] = tmp[i];
    }
    std::size_t lower = k + 1;
    for (std::size_t i = tmp.size() - 1; i-- > 0;) {
      while (k >= lower && cross(hull[k - 2], hull[k - 1], tmp[i]) <= 0) --k;
      hull[k++] = tmp[i];
    }
    hull.resize(k - 1);
    hullp = hull;
  }
  // Keep points not strictly inside (tiny margin keeps boundary points).
  double scale = 0.0;
  for (const auto& p : hullp) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
  double margin = 1e-12 * (scale + 1e-300);
  std::vector<Pt> kept;
  kept.reserve(256);
  const std::size_t h = hullp.size();
  for (std::size_t i = 0; i < n; ++i) {
    Pt p{xs[i], ys[i]};
    bool inside = true;
    for (std::size_t e = 0; e < h; ++e) {
      const Pt& a = hullp[e];
      const Pt& b = hullp[(e + 1) % h];
      if (cross(a, b, p) < margin) {  // not strictly left of the edge
        inside = false;
        break;
      }
    }
    if (!inside) kept.push_back(p);
  }
  if (kept.size() <= 96) {
    std::vector<double> kx(kept.size()), ky(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      kx[i] = kept[i].x;
      ky[i] = kept[i].y;
    }
    return diameter_scan(kx.data(), ky.data(), kept.size());
  }
  return diameter_hull(kept);
}

std::vector<std::int64_t> freqs_mod(const TrigPoly& p, std::int64_t G) {
  std::vector<std::int64_t> nm(p.term_count());
  const auto& f = p.freqs();
  for (std::size_t i = 0; i < nm.size(); ++i) {
    std::int64_t m = f[i] % G;
    if (m < 0) m += G;
    nm[i] = m;
  }
  return nm;
}

}  // namespace

double planar_diameter(const std::vector<double>& xs, const std::vector<double>& ys) {
  return diameter_pruned(xs.data(), ys.data(), xs.size());
}

std::vector<double> maximal_at_grid(const TrigPoly& p, std::int64_t G) {
  std::vector<double> out(static_cast<std::size_t>(G), 0.0);
  if (p.is_zero()) return out;
  const PhaseTable& tab = phase_table(G);
  const std::size_t nnz = p.term_count();
  auto nm = freqs_mod(p, G);
  std::vector<double> cre(nnz), cim(nnz);
  for (std::size_t i = 0; i < nnz; ++i) {
    cre[i] = p.coeffs()[i].real();
    cim[i] = p.coeffs()[i].imag();
  }
  const auto& K = kernels::active();
  std::vector<double> widths(4 * 8);
  std::vector<double> store((nnz + 1) * 8);
  std::vector<double> xs(nnz + 1), ys(nnz + 1);
  for (std::int64_t j0 = 0; j0 < G; j0 += 4) {
    std::size_t cnt = static_cast<std::size_t>(std::min<std::int64_t>(4, G - j0));
    K.prefix_walk(nnz, nm.data(), cre.data(), cim.data(), tab.re.data(),
                  tab.im.data(), G, j0, cnt, widths.data(), store.data());
    for (std::size_t s = 0; s < cnt; ++s) {
      for (std::size_t k = 0; k <= nnz; ++k) {
        xs[k] = store[k * 2 * cnt + s];
        ys[k] = store[k * 2 * cnt + cnt + s];
      }
      out[static_cast<std::size_t>(j0) + s] = diameter_pruned(xs.data(), ys.data(), nnz + 1);
    }
  }
  return out;
}

std::vector<double> maximal_bruteforce_at_grid(const TrigPoly& p, std::int64_t G) {
  std::vector<double> out(static_cast<std::size_t>(G), 0.0);
  const auto& f = p.freqs();
  const auto& c = p.coeffs();
  const std::size_t nnz = f.size();
  std::vector<cplx> terms(nnz);
  for (std::int64_t j = 0; j < G; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
    for (std::size_t m = 0; m < nnz; ++m) {
      double a = static_cast<double>(f[m]) * t;
      terms[m] = c[m] * cplx(std::cos(a), std::sin(a));
    }
    double best = 0.0;
    for (std::size_t l = 0; l < nnz; ++l) {
      cplx s{0.0, 0.0};
      for (std::size_t m = l; m < nnz; ++m) {
        s += terms[m];
        best = std::max(best, std::norm(s));
      }
    }
    out[static_cast<std::size_t>(j)] = std::sqrt(best);
  }
  return out;
}

SampledFunction maximal(const TrigPoly& p, std::int64_t G) {
  if (G < 2 * p.degree() + 2)
    fail(ErrorCode::GridTooCoarse, "need G >= 2*degree + 2");
  auto vals = maximal_at_grid(p, G);
  SampledFunction f(G, {0.0, 0.0});
  for (std::size_t j = 0; j < vals.size(); ++j) f.v[j] = {vals[j], 0.0};
  return f;
}

double maximal_sup(const TrigPoly& p, std::int64_t max_grid) {
  if (p.is_zero()) return 0.0;
  std::int64_t G = next_pow2(std::max<std::int64_t>(16, 8 * p.degree() + 2));
  G = std::min(G, std::max<std::int64_t>(max_grid, 16));
  auto vals = maximal_at_grid(p, G);
  double m = 0.0;
  for (double v : vals) m = std::max(m, v);
  return m;
}

}  // namespace triglab
