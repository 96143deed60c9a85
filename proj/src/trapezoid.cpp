#include "triglab/trapezoid.hpp"

#include <algorithm>
#include <cmath>

#include "triglab/kernels.hpp"
#include "triglab/maximal.hpp"
#include "triglab/sampled.hpp"

namespace triglab {

cplx trapezoid_coeff(const Arc& I, double ramp, std::int64_t n) {
  // Trapezoid = (2pi/w) * (1_J (*) 1_W) with J = I widened by w/2 and
  // W = [-w/2, w/2]; coefficients multiply under normalized convolution.
  const double w = ramp;
  const double LJ = I.length + w;
  const double c = I.start + 0.5 * I.length;
  if (n == 0) return {LJ / kTwoPi, 0.0};
  double nn = static_cast<double>(n);
  double a = (std::sin(nn * LJ / 2.0) / (kPi * nn));
  double b = (std::sin(nn * w / 2.0) / (kPi * nn));
  cplx phase(std::cos(nn * c), -std::sin(nn * c));
  return (kTwoPi / w) * a * b * phase;
}

TrapezoidResult trapezoid_indicator(const Arc& I, double delta,
                                    double hstar_bound, std::int64_t cert_grid) {
  if (!(delta > 0.0 && delta < 1.0))
    fail(ErrorCode::InvalidParams, "delta must be in (0,1)");
  if (hstar_bound <= 0.0)
    fail(ErrorCode::InvalidParams, "hstar_bound must be > 0");

  TrapezoidResult r;
  r.cert.subject = "trapezoid_indicator";
  r.cert.grid_size = cert_grid;

  if (I.empty()) {
    r.g = TrigPoly::zero();
    r.cert.add("off_neighborhood", delta / (2.0 * hstar_bound), 0.0, "empty arc");
    r.cert.add("rho_indicator", delta / 3.0, 0.0, "empty arc");
    r.cert.add("maximal_sup", 6.0 / delta, 0.0, "empty arc");
    return r;
  }
  const double w = delta / 2.0;
  if (I.length + 2.0 * w >= kTwoPi)
    fail(ErrorCode::InfeasibleRamp, "arc plus ramps exceeds the circle");

  // Tail bound sum_{|n|>N} |coeff| <= 4/(pi w N); pick N against both targets.
  const double off_target = delta / (2.0 * hstar_bound);
  const double tail_target = 0.9 * std::min(delta / 6.0, off_target);
  std::int64_t N = static_cast<std::int64_t>(std::ceil(4.0 / (kPi * w * tail_target))) + 1;

  std::vector<std::pair<std::int64_t, cplx>> terms;
  terms.reserve(static_cast<std::size_t>(2 * N + 1));
  for (std::int64_t n = -N; n <= N; ++n) {
    cplx c = trapezoid_coeff(I, w, n);
    if (std::abs(c) > 0.0) terms.emplace_back(n, c);
  }
  r.g = TrigPoly::from_terms(std::move(terms));
  r.truncation = N;
  r.ramp = w;

  // Measure the three clauses.
  const std::int64_t G = next_pow2(std::max<std::int64_t>(cert_grid, 8));
  CVec gv = eval_grid_folded(r.g, G);
  SampledFunction gs = SampledFunction::from_cvec(G, gv);
  StepFunction ind = StepFunction::arc_indicator(I.start, I.length, {1.0, 0.0});
  double rho_meas = rho(gs, ind.sample(G));

  double off_max = 0.0;
  const double lo = wrap_angle(I.start - delta);
  const double hilen = I.length + 2.0 * delta;
  for (std::int64_t j = 0; j < G; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
    double rel = wrap_angle(t - lo);
    bool in_neighborhood = rel < hilen;
    if (!in_neighborhood) off_max = std::max(off_max, std::abs(gs.v[static_cast<std::size_t>(j)]));
  }

  // ||g*||_inf: exact when affordable, else the l1 coefficient bound.
  double gstar;
  std::string gstar_note;
  if (static_cast<double>(r.g.term_count()) * static_cast<double>(G) <= 2.5e8) {
    gstar = maximal_sup(r.g, std::max<std::int64_t>(G, 4096));
    gstar_note = "exact prefix-diameter";
  } else {
    gstar = r.g.coeff_l1();
    gstar_note = "l1 coefficient bound";
  }

  r.cert.add("off_neighborhood", off_target, off_max, "grid max outside I_delta");
  r.cert.add("rho_indicator", delta / 3.0, rho_meas, "grid rho");
  r.cert.add("maximal_sup", 6.0 / delta, gstar, gstar_note);
  return r;
}

}  // namespace triglab
