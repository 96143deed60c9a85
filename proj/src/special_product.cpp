#include "triglab/special_product.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "triglab/kernels.hpp"
#include "triglab/maximal.hpp"
#include "triglab/sampled.hpp"

namespace triglab {
namespace {

constexpr int kDirs = 32;  // full-circle support samples
constexpr double kGap = kTwoPi / kDirs;

// Support function of the prefix point set of g at one node, sampled at
// kDirs directions. Entry m is max_k <A_k, u_m> over prefix points
// (initial 0 included).
struct SupportTable {
  double s[kDirs];
};

}  // namespace

SpecialProductResult special_product(const TrigPoly& g, const TrigPoly& h,
                                     std::int64_t r, std::int64_t grid) {
  if (r <= 3 * g.degree())
    fail(ErrorCode::DilationTooSmall, "need r > 3*deg(g)");
  if (r < 1) fail(ErrorCode::DilationTooSmall, "need r >= 1");

  SpecialProductResult out;
  out.cert.subject = "special_product";
  out.cert.grid_size = grid;
  out.product = multiply(g, h.dilate(r));

  const std::int64_t G = grid;
  const PhaseTable& tab = phase_table(G);

  if (g.is_zero() || h.is_zero()) {
    out.cert.add("transfer_pointwise", 1.0, 0.0, "zero product");
    return out;
  }

  out.h_coeff_sup = h.coeff_sup();
  out.hstar_sup = maximal_sup(h);

  // g values, g prefix points and their support tables on the grid.
  const std::size_t ng = g.term_count();
  auto gm = std::vector<std::int64_t>(ng);
  for (std::size_t i = 0; i < ng; ++i) {
    std::int64_t m = g.freqs()[i] % G;
    if (m < 0) m += G;
    gm[i] = m;
  }
  std::vector<double> gcre(ng), gcim(ng);
  for (std::size_t i = 0; i < ng; ++i) {
    gcre[i] = g.coeffs()[i].real();
    gcim[i] = g.coeffs()[i].imag();
  }

  // h prefix values on its own circle, sampled on the same grid: H_k(r t_j)
  // = H_k at node (r j) mod G.
  const std::size_t nh = h.term_count();
  std::vector<CVec> hpref(nh + 1, CVec(static_cast<std::size_t>(G)));
  {
    CVec acc(static_cast<std::size_t>(G));
    const auto& K = kernels::active();
    CVec row(static_cast<std::size_t>(G));
    for (std::size_t k = 0; k < nh; ++k) {
      std::int64_t m = h.freqs()[k] % G;
      if (m < 0) m += G;
      for (std::int64_t j = 0; j < G; ++j) {
        std::int64_t idx = (m * j) % G;
        row.re[static_cast<std::size_t>(j)] = tab.re[static_cast<std::size_t>(idx)];
        row.im[static_cast<std::size_t>(j)] = tab.im[static_cast<std::size_t>(idx)];
      }
      K.caxpy(acc.re.data(), acc.im.data(), row.re.data(), row.im.data(),
              h.coeffs()[k].real(), h.coeffs()[k].imag(), acc.size());
      hpref[k + 1] = acc;
    }
  }

  std::vector<double> gstar = maximal_at_grid(g, G);

  const std::int64_t rmod = ((r % G) + G) % G;
  std::vector<double> dirc(kDirs), dirs(kDirs);
  for (int m = 0; m < kDirs; ++m) {
    dirc[m] = std::cos(m * kGap);
    dirs[m] = std::sin(m * kGap);
  }

  // arg and |c| of h's coefficients, and the per-node phase step of e^{i r n_m t}.
  std::vector<double> habs(nh), harg(nh);
  std::vector<std::int64_t> hrmod(nh);
  for (std::size_t k = 0; k < nh; ++k) {
    habs[k] = std::abs(h.coeffs()[k]);
    harg[k] = std::arg(h.coeffs()[k]);
    __int128 rn = static_cast<__int128>(r) * h.freqs()[k];
    std::int64_t rm = static_cast<std::int64_t>(((rn % G) + G) % G);
    hrmod[k] = rm;
  }

  const double secant = 1.0 / std::cos(0.5 * kGap);
  double worst_ratio = 0.0;
  std::int64_t worst_node = -1;

  std::vector<double> widths(4 * 8);
  std::vector<double> store((ng + 1) * 8);
  std::optional<TrigPoly> materialized;

  for (std::int64_t j0 = 0; j0 < G; j0 += 4) {
    std::size_t cnt = static_cast<std::size_t>(std::min<std::int64_t>(4, G - j0));
    kernels::active().prefix_walk(ng, gm.data(), gcre.data(), gcim.data(),
                                  tab.re.data(), tab.im.data(), G, j0, cnt,
                                  widths.data(), store.data());
    for (std::size_t s = 0; s < cnt; ++s) {
      std::int64_t j = j0 + static_cast<std::int64_t>(s);
      // Support table of the g prefix set at this node.
      SupportTable st;
      for (int m = 0; m < kDirs; ++m) st.s[m] = 0.0;  // initial 0 point
      for (std::size_t k = 0; k <= ng; ++k) {
        double x = store[k * 2 * cnt + s];
        double y = store[k * 2 * cnt + cnt + s];
        for (int m = 0; m < kDirs; ++m)
          st.s[m] = std::max(st.s[m], x * dirc[m] + y * dirs[m]);
      }
      double gx = store[ng * 2 * cnt + s];
      double gy = store[ng * 2 * cnt + cnt + s];
      double gabs = std::hypot(gx, gy);

      // Directional extremes of the union of blocks
      //   center_k + rot_k * (g prefix set),
      // center_k = g(t) H_{k-1}(rt), rot_k = c_h(k) e^{i r n_k t}.
      // The origin is a member of the union (first block, empty g prefix),
      // so the extremes start at 0.
      double wmax[kDirs];
      for (int m = 0; m < kDirs; ++m) wmax[m] = 0.0;
      const std::size_t src = static_cast<std::size_t>((rmod * j) % G);
      const double inv_singap = 1.0 / std::sin(kGap);
      for (std::size_t k = 0; k < nh; ++k) {
        double hx = hpref[k].re[src];
        double hy = hpref[k].im[src];
        // center = g * H_{k-1}(rt); hpref[k] already holds H_k, so index k
        // here is the prefix BEFORE coefficient k.
        double cx = gx * hx - gy * hy;
        double cy = gx * hy + gy * hx;
        double rot_abs = habs[k];
        double rot_arg = harg[k] + kTwoPi * static_cast<double>((hrmod[k] * j) % G) /
                                        static_cast<double>(G);
        // Support of rot*(g set) in direction u_m is
        // rot_abs * S(u_m - rot_arg); the offset within the sample cell is
        // the same for every m, so the two interpolation weights are shared.
        double pos = wrap_angle(-rot_arg) / kGap;
        int ibase = static_cast<int>(pos);
        if (ibase >= kDirs) ibase = kDirs - 1;
        double a = (pos - ibase) * kGap;
        double w1 = std::sin(kGap - a) * inv_singap * rot_abs;
        double w2 = std::sin(a) * inv_singap * rot_abs;
        for (int m = 0; m < kDirs; ++m) {
          int i0 = (m + ibase) & (kDirs - 1);
          int i1 = (i0 + 1) & (kDirs - 1);
          double proj = cx * dirc[m] + cy * dirs[m];
          double sup = st.s[i0] * w1 + st.s[i1] * w2;
          wmax[m] = std::max(wmax[m], proj + sup);
        }
      }
      double diam_ub = 0.0;
      for (int m = 0; m < kDirs / 2; ++m)
        diam_ub = std::max(diam_ub, wmax[m] + wmax[m + kDirs / 2]);
      diam_ub *= secant;

      double rhs = gabs * out.hstar_sup +
                   2.0 * gstar[static_cast<std::size_t>(j)] * out.h_coeff_sup;
      double ratio;
      if (rhs <= 0.0) {
        ratio = diam_ub > 0.0 ? 2.0 : 0.0;
      } else {
        ratio = diam_ub / rhs;
      }
      if (ratio > 1.0) {
        // The quick upper bound did not settle it; take the exact value.
        if (!materialized) materialized = out.product;
        auto& P = *materialized;
        std::size_t np = P.term_count();
        std::vector<double> xs(np + 1), ys(np + 1);
        xs[0] = ys[0] = 0.0;
        cplx a{0.0, 0.0};
        for (std::size_t k = 0; k < np; ++k) {
          std::int64_t m = ((P.freqs()[k] % G) + G) % G;
          std::size_t idx = static_cast<std::size_t>((m * j) % G);
          a += P.coeffs()[k] * cplx(tab.re[idx], tab.im[idx]);
          xs[k + 1] = a.real();
          ys[k + 1] = a.imag();
        }
        double exact = planar_diameter(xs, ys);
        ratio = rhs > 0.0 ? exact / rhs : (exact > 0.0 ? 2.0 : 0.0);
        ++out.refined_points;
      }
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_node = j;
      }
    }
  }

  auto& c = out.cert.add("transfer_pointwise", 1.0, worst_ratio,
                         "worst node " + std::to_string(worst_node));
  (void)c;
  return out;
}

}  // namespace triglab
