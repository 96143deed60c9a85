#include <cstdio>
#include <cstdlib>
#include "triglab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "triglab/fft.hpp"
#include "triglab/kernels.hpp"
#include "triglab/maximal.hpp"
#include "triglab/sampled.hpp"

namespace triglab::synth {
namespace {

struct Workspace {
  std::int64_t D = 0;
  std::int64_t G = 0;
  // Exceptional arc centered at t = 0 as grid indices [0, e_half) and
  // (G - e_half, G); the complement is the contiguous range [e_half,
  // G - e_half].
  std::int64_t e_half = 0;
  double tube = 0.0;
  double cap = 0.0;
  SpectrumKind kind = SpectrumKind::Analytic;

  bool in_support(std::int64_t bin) const {
    if (kind == SpectrumKind::Analytic) return bin >= 1 && bin <= D;
    return (bin >= 1 && bin <= D) || (bin >= G - D && bin <= G - 1);
  }
};

void project_support_cap(CVec& c, const Workspace& w) {
  const std::int64_t G = w.G;
  for (std::int64_t b = 0; b < G; ++b) {
    if (!w.in_support(b)) {
      c.re[static_cast<std::size_t>(b)] = 0.0;
      c.im[static_cast<std::size_t>(b)] = 0.0;
    }
  }
  kernels::active().clip_cap(c.re.data(), c.im.data(), w.cap, c.size());
}

// Distance (coefficient l2) from c to the value set, and projection.
//
// Two value sets are supported. With a fixed exceptional arc the set is
// convex: {v : |v_j - 1| <= tube for t_j outside E}. In adaptive mode the
// exceptional nodes are wherever the current iterate is worst: the set is
// {v : #{j : |v_j - 1| > tube} <= bad_nodes}, and leaving the bad_nodes
// largest deviations untouched is its exact (greedy) metric projection. The
// adaptive set is not convex; the independent verifier keeps the result
// honest either way.
double project_value_tube(CVec& c, const Workspace& w, bool adaptive,
                          std::vector<std::size_t>& scratch) {
  const std::int64_t G = w.G;
  CVec v = c;
  fft_inverse_unnormalized(v);
  double dist2 = 0.0;
  const double r2 = w.tube * w.tube;
  if (!adaptive) {
    std::size_t lo = static_cast<std::size_t>(w.e_half);
    std::size_t n = static_cast<std::size_t>(G - 2 * w.e_half);
    for (std::size_t j = lo; j < lo + n; ++j) {
      double dr = v.re[j] - 1.0, di = v.im[j];
      double d2 = dr * dr + di * di;
      if (d2 > r2) {
        double d = std::sqrt(d2) - w.tube;
        dist2 += d * d;
      }
    }
    kernels::active().clip_disk(v.re.data() + lo, v.im.data() + lo, 1.0, 0.0,
                                w.tube, n);
  } else {
    const std::size_t bad_budget = static_cast<std::size_t>(2 * w.e_half);
    scratch.clear();
    for (std::size_t j = 0; j < v.size(); ++j) {
      double dr = v.re[j] - 1.0, di = v.im[j];
      if (dr * dr + di * di > r2) scratch.push_back(j);
    }
    if (scratch.size() > bad_budget) {
      // exempt the bad_budget largest deviations, clip the rest
      std::nth_element(scratch.begin(), scratch.begin() + bad_budget,
                       scratch.end(), [&](std::size_t a, std::size_t b) {
                         double da = (v.re[a] - 1.0) * (v.re[a] - 1.0) +
                                     v.im[a] * v.im[a];
                         double db = (v.re[b] - 1.0) * (v.re[b] - 1.0) +
                                     v.im[b] * v.im[b];
                         return da > db;
                       });
      for (std::size_t i = bad_budget; i < scratch.size(); ++i) {
        std::size_t j = scratch[i];
        double dr = v.re[j] - 1.0, di = v.im[j];
        double d2 = dr * dr + di * di;
        double d = std::sqrt(d2);
        dist2 += (d - w.tube) * (d - w.tube);
        double s = w.tube / d;
        v.re[j] = 1.0 + dr * s;
        v.im[j] = di * s;
      }
    }
  }
  fft_forward(v);
  kernels::active().scale(v.re.data(), v.im.data(), 1.0 / static_cast<double>(G),
                          v.size());
  c = std::move(v);
  // Value-domain l2^2 equals G * coefficient l2^2 (Parseval); report the
  // coefficient-domain distance to match the A-side metric.
  return std::sqrt(dist2 / static_cast<double>(G));
}

// Warm seed for the analytic case: h0 = 1 - e^{iA} with A the analytic
// signal (spectrum in [1, G/2)) of M * profile, where the profile is 1 off E
// and dips smoothly on E. Then |h0 - 1| = e^{-Im A} equals the tube off E
// exactly and the mean coefficient of e^{iA} is exactly 1, so spec(h0) stays
// in [1, inf). The projections repair the coefficient caps.
CVec analytic_seed(const Workspace& w) {
  const std::int64_t G = w.G;
  const double m = 2.0 * static_cast<double>(w.e_half) / static_cast<double>(G);
  const double M = std::log(1.0 / std::max(w.tube, 1e-12));
  std::vector<double> prof(static_cast<std::size_t>(G));
  const double dip = -(1.0 - m) / std::max(m, 1e-9);
  for (std::int64_t j = 0; j < G; ++j) {
    // distance to 0 along the circle, in nodes
    std::int64_t d = std::min(j, G - j);
    double x = 1.0;
    if (d < w.e_half) {
      double s = static_cast<double>(d) / static_cast<double>(w.e_half);
      double bump = std::cos(0.5 * kPi * s);
      bump *= bump;
      x = 1.0 + (dip - 1.0) * bump;
    }
    prof[static_cast<std::size_t>(j)] = x;
  }
  double mean = 0.0;
  for (double x : prof) mean += x;
  mean /= static_cast<double>(G);
  double scale = M / std::max(1e-9, 1.0 - mean);
  CVec phi(static_cast<std::size_t>(G));
  for (std::size_t j = 0; j < phi.size(); ++j) phi.re[j] = (prof[j] - mean) * scale;
  fft_forward(phi);
  CVec A(static_cast<std::size_t>(G));
  for (std::int64_t n = 1; n < G / 2; ++n) {
    // A-hat(n) = 2 i phi-hat(n)
    double pr = phi.re[static_cast<std::size_t>(n)] / static_cast<double>(G);
    double pi = phi.im[static_cast<std::size_t>(n)] / static_cast<double>(G);
    A.re[static_cast<std::size_t>(n)] = -2.0 * pi;
    A.im[static_cast<std::size_t>(n)] = 2.0 * pr;
  }
  fft_inverse_unnormalized(A);
  CVec h(static_cast<std::size_t>(G));
  for (std::size_t j = 0; j < h.size(); ++j) {
    // 1 - e^{iA}
    cplx ia(-A.im[j], A.re[j]);
    cplx e = std::exp(ia);
    h.re[j] = 1.0 - e.real();
    h.im[j] = -e.imag();
  }
  fft_forward(h);
  kernels::active().scale(h.re.data(), h.im.data(), 1.0 / static_cast<double>(G),
                          h.size());
  return h;
}

TrigPoly bins_to_poly(const CVec& c, const Workspace& w) {
  std::vector<std::pair<std::int64_t, cplx>> terms;
  const std::int64_t G = w.G;
  for (std::int64_t b = 0; b < G; ++b) {
    cplx z = c.at(static_cast<std::size_t>(b));
    if (z == cplx(0.0, 0.0)) continue;
    std::int64_t n = (b <= G / 2) ? b : b - G;
    terms.emplace_back(n, z);
  }
  return TrigPoly::from_terms(std::move(terms));
}

// Largest modulus over all symmetric partial sums on the synthesis grid.
double max_symmetric_partial(const CVec& c, const Workspace& w) {
  const std::int64_t G = w.G;
  const PhaseTable& tab = phase_table(G);
  const auto& K = kernels::active();
  CVec acc(static_cast<std::size_t>(G));
  CVec row(static_cast<std::size_t>(G));
  double best = 0.0;
  // level 0
  // (bin 0 is always zero here, but keep it for generality)
  acc.re.assign(acc.size(), c.re[0]);
  acc.im.assign(acc.size(), c.im[0]);
  best = std::max(best, K.max_abs2(acc.re.data(), acc.im.data(), acc.size()));
  for (std::int64_t N = 1; N <= w.D; ++N) {
    for (std::int64_t bin : {N, G - N}) {
      if (bin < 0 || bin >= G) continue;
      cplx z = c.at(static_cast<std::size_t>(bin));
      if (z == cplx(0.0, 0.0)) continue;
      std::int64_t m = bin % G;
      for (std::int64_t j = 0; j < G; ++j) {
        std::int64_t idx = (m * j) % G;
        row.re[static_cast<std::size_t>(j)] = tab.re[static_cast<std::size_t>(idx)];
        row.im[static_cast<std::size_t>(j)] = tab.im[static_cast<std::size_t>(idx)];
      }
      K.caxpy(acc.re.data(), acc.im.data(), row.re.data(), row.im.data(),
              z.real(), z.imag(), acc.size());
    }
    best = std::max(best, K.max_abs2(acc.re.data(), acc.im.data(), acc.size()));
  }
  return std::sqrt(best);
}

}  // namespace

double flat_energy_floor(double tube, double bad_measure) {
  if (tube >= 1.0 || bad_measure >= 1.0) return 0.0;
  if (bad_measure <= 0.0) return 1e300;
  double J = (1.0 - bad_measure) * std::log(1.0 / tube);
  double expo = 2.0 * J / bad_measure;
  if (expo > 690.0) return 1e300;
  return std::max(0.0, bad_measure * std::exp(expo) - 1.0);
}

Certificate verify_flat_contract(const TrigPoly& h, const FlatContract& c,
                                 std::int64_t grid) {
  Certificate cert;
  cert.subject = c.kind == SpectrumKind::Analytic ? "flat_analytic" : "flat_bilateral";
  cert.grid_size = grid;
  SampledFunction ones(grid, {1.0, 0.0});
  SampledFunction hv = SampledFunction::from_cvec(grid, eval_grid_folded(h, grid));
  if (c.kind == SpectrumKind::Analytic) {
    std::int64_t bad = 0;
    for (auto n : h.freqs())
      if (n < 1) ++bad;
    cert.add("spectrum_analytic", 0.0, static_cast<double>(bad),
             "frequencies below 1");
    if (c.tube > 0.0 && c.bad_measure > 0.0) {
      SampledFunction diff = hv;
      for (auto& z : diff.v) z -= 1.0;
      cert.add("levelset_measure", c.bad_measure, measure_above(diff, c.tube),
               "m{|h-1| > tube}");
    } else {
      cert.add("rho_one", c.rho_tol, rho(hv, ones), "grid rho");
    }
    cert.add("coeff_sup", c.coeff_cap, h.coeff_sup(), "exact");
  } else {
    cert.add("mean_zero", 0.0, std::abs(h.coeff(0)), "exact");
    cert.add("coeff_sup", c.coeff_cap, h.coeff_sup(), "exact");
    SampledFunction diff = hv;
    for (auto& z : diff.v) z -= 1.0;
    cert.add("levelset_measure", c.c_target * c.gamma,
             measure_above(diff, c.coeff_cap), "m{|h-1| > delta}");
    cert.add("maximal_sup", 1.0 / c.gamma, maximal_sup(h), "grid sup of h*");
  }
  // Energy identity sanity: Parseval between stored coefficients and values.
  CVec cv = hv.to_cvec();
  double grid_energy =
      kernels::active().sum_abs2(cv.re.data(), cv.im.data(), cv.size()) /
      static_cast<double>(grid);
  double coeff_energy = h.coeff_energy();
  double rel = std::abs(grid_energy - coeff_energy) /
               std::max(1e-300, coeff_energy);
  if (2 * h.degree() + 2 <= grid) cert.add("parseval_rel", 1e-8, rel, "energy identity");
  return cert;
}

SynthResult synthesize_flat(const FlatContract& con, const SynthOptions& opt) {
  SynthResult res;
  const bool analytic = con.kind == SpectrumKind::Analytic;

  // Hard feasibility floor from the analytic energy bound.
  if (analytic) {
    double ftube = con.tube > 0.0 ? con.tube : con.rho_tol;
    double fmeas = con.bad_measure > 0.0 ? con.bad_measure : con.rho_tol;
    double floor = flat_energy_floor(ftube, fmeas);
    double most = static_cast<double>(opt.degree_budget) * con.coeff_cap * con.coeff_cap;
    if (floor > most) {
      res.failure_reason =
          "energy floor " + std::to_string(floor) + " exceeds budget capacity " +
          std::to_string(most);
      res.largest_degree_tried = 0;
      return res;
    }
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  Workspace w;
  w.kind = con.kind;
  const bool split = analytic && con.tube > 0.0 && con.bad_measure > 0.0;
  // The value tube is shaved harder than the measure: a degree-D polynomial
  // pinned at the synthesis nodes can overshoot between the nodes of the 4x
  // verification grid, and that overshoot lands in the measured bad set.
  w.tube = opt.tube_inner * (split ? con.tube : (analytic ? con.rho_tol : con.coeff_cap));
  w.cap = opt.inner * con.coeff_cap;
  double e_measure = analytic
                         ? (split ? opt.inner * con.bad_measure
                                  : std::min(opt.measure_inner * con.rho_tol, 0.46))
                         : std::min(0.8 * con.c_target * con.gamma, 0.45);

  std::int64_t D_start = opt.degree_start;
  if (analytic) {
    double soft = flat_energy_floor(w.tube, e_measure);
    if (soft < 1e290) {
      std::int64_t dmin = static_cast<std::int64_t>(soft / (w.cap * w.cap)) + 1;
      D_start = std::max(D_start, std::min(dmin, opt.degree_budget));
    }
  }
  D_start = next_pow2(std::max<std::int64_t>(8, D_start));

  CVec carry;  // warm start between degree stages
  for (std::int64_t D = D_start; D <= next_pow2(opt.degree_budget); D <<= 1) {
    if (D > opt.degree_budget && D / 2 >= opt.degree_budget) break;
    w.D = std::min(D, opt.degree_budget);
    w.G = next_pow2(std::max<std::int64_t>(8, opt.grid_factor * w.D));
    w.e_half = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(e_measure * static_cast<double>(w.G) / 2.0)));
    res.largest_degree_tried = w.D;

    CVec c(static_cast<std::size_t>(w.G));
    if (carry.size() > 0) {
      // Re-seat the previous spectrum in the new bin layout.
      for (std::size_t b = 0; b < carry.size(); ++b) {
        double re = carry.re[b], im = carry.im[b];
        if (re == 0.0 && im == 0.0) continue;
        std::int64_t oldG = static_cast<std::int64_t>(carry.size());
        std::int64_t n = (static_cast<std::int64_t>(b) <= oldG / 2)
                             ? static_cast<std::int64_t>(b)
                             : static_cast<std::int64_t>(b) - oldG;
        std::int64_t nb = n >= 0 ? n : w.G + n;
        c.re[static_cast<std::size_t>(nb)] = re;
        c.im[static_cast<std::size_t>(nb)] = im;
      }
    } else if (analytic) {
      c = analytic_seed(w);
    }
    // Seeded noise on top; the support projection then removes any constant
    // component and out-of-band leftovers.
    for (std::int64_t b = 0; b < w.G; ++b) {
      if (!w.in_support(b)) continue;
      std::size_t sb = static_cast<std::size_t>(b);
      if (c.re[sb] == 0.0 && c.im[sb] == 0.0) {
        c.re[sb] = 0.05 * w.cap * u(rng);
        c.im[sb] = 0.05 * w.cap * u(rng);
      }
    }
    project_support_cap(c, w);

    double last_dist = 1e300;
    std::vector<std::size_t> scratch;
    // Opening iterations: convex fixed-arc exceptional set (Fejer-monotone,
    // monitored through dist_trace). Remainder: the exceptional nodes adapt
    // to the iterate, with the tube and cap annealed from a loose start down
    // to their targets; continuation keeps the alternation off the local
    // configurations that a cold tight start falls into.
    const int convex_iters = std::min(300, opt.max_iters / 4);
    const int anneal_iters = (opt.max_iters - convex_iters) / 2;
    const double tube_target = w.tube;
    const double cap_target = w.cap;
    const double tube_start = std::max(tube_target, std::min(0.45, 2.0 * tube_target));
    const double cap_start = std::max(cap_target, std::min(0.45, 2.5 * cap_target));
    res.dist_trace.clear();
    for (int it = 0; it < opt.max_iters; ++it) {
      bool adaptive = it >= convex_iters;
      if (adaptive && anneal_iters > 0) {
        double f = std::min(1.0, static_cast<double>(it - convex_iters) /
                                     static_cast<double>(anneal_iters));
        w.tube = tube_start * std::pow(tube_target / tube_start, f);
        w.cap = cap_start * std::pow(cap_target / cap_start, f);
      }
      CVec prev;
      if (adaptive) prev = c;
      double dist = project_value_tube(c, w, adaptive, scratch);
      project_support_cap(c, w);
      if (adaptive && opt.relax > 1.0) {
        // extrapolated composite step c <- prev + relax (T(prev) - prev)
        const double l = opt.relax;
        for (std::size_t i = 0; i < c.size(); ++i) {
          c.re[i] = prev.re[i] + l * (c.re[i] - prev.re[i]);
          c.im[i] = prev.im[i] + l * (c.im[i] - prev.im[i]);
        }
        project_support_cap(c, w);
      }
      if (!analytic && (it % 50 == 49)) {
        double mps = max_symmetric_partial(c, w);
        double beta = mps * con.gamma;
        if (beta > 1.0)
          kernels::active().scale(c.re.data(), c.im.data(), 1.0 / beta, c.size());
      }
      if (!adaptive) res.dist_trace.push_back(dist);
      ++res.iterations;
      bool check = (it % opt.check_every == opt.check_every - 1) ||
                   dist < 1e-14 || it == opt.max_iters - 1;
      if (check) {
        TrigPoly cand = bins_to_poly(c, w);
        Certificate cert = verify_flat_contract(cand, con, 4 * w.G);
        if (std::getenv("TRIGLAB_SYNTH_DEBUG")) {
          std::fprintf(stderr, "D=%lld it=%d dist=%.3e nnz=%zu", (long long)w.D,
                       it, dist, cand.term_count());
          for (const auto& cl : cert.clauses)
            std::fprintf(stderr, " %s=%.4g/%.4g%s", cl.name.c_str(), cl.measured,
                         cl.bound, cl.pass ? "" : "!");
          std::fprintf(stderr, "\n");
        }
        if (cert.pass()) {
          res.success = true;
          res.h = std::move(cand);
          res.cert = std::move(cert);
          return res;
        }
      }
      // Stall detection: no progress and already feasible-checked above.
      if (dist < 1e-15 && last_dist < 1e-15) break;
      last_dist = dist;
    }
    carry = c;
    if (w.D >= opt.degree_budget) break;
  }
  res.failure_reason = res.failure_reason.empty()
                           ? "degree budget exhausted without passing the verifier"
                           : res.failure_reason;
  return res;
}

SynthResult synth_flat_analytic(double eps, std::int64_t budget, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 2.0))
    fail(ErrorCode::InvalidEpsilon, "eps must lie in (0, 2)");
  FlatContract c;
  c.kind = SpectrumKind::Analytic;
  c.rho_tol = eps;
  c.coeff_cap = eps;
  SynthOptions o;
  o.degree_budget = budget;
  o.seed = seed;
  return synthesize_flat(c, o);
}

SynthResult synth_flat_analytic_ex(double rho_tol, double coeff_cap,
                                   std::int64_t budget, std::uint64_t seed) {
  if (!(rho_tol > 0.0) || !(coeff_cap > 0.0))
    fail(ErrorCode::InvalidParams, "tolerances must be positive");
  FlatContract c;
  c.kind = SpectrumKind::Analytic;
  c.rho_tol = rho_tol;
  c.coeff_cap = coeff_cap;
  SynthOptions o;
  o.degree_budget = budget;
  o.seed = seed;
  return synthesize_flat(c, o);
}

SynthResult synth_flat_bilateral(double gamma, double delta, double c_target,
                                 std::int64_t budget, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0 && delta > 0.0 && delta < 1.0))
    fail(ErrorCode::InvalidParams, "need 0 < gamma, delta < 1");
  FlatContract c;
  c.kind = SpectrumKind::Bilateral;
  c.rho_tol = delta;
  c.coeff_cap = delta;
  c.gamma = gamma;
  c.c_target = c_target;
  SynthOptions o;
  o.degree_budget = budget;
  o.seed = seed;
  return synthesize_flat(c, o);
}

}  // namespace triglab::synth
