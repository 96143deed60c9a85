#include "triglab/constructors.hpp"

#include <algorithm>
#include <cmath>

#include "triglab/kernels.hpp"
#include "triglab/maximal.hpp"

namespace triglab::constructors {
namespace {

constexpr double kExpandCap = 4e6;

SampledFunction values_of(const ProductPoly& P, std::int64_t G) {
  return SampledFunction::from_cvec(G, P.eval_grid(G));
}

// Pointwise transfer bound for P = g * h_[r]:
//   P*(t) <= |g(t)| ||h*||_inf + 2 g*(t) ||h^||_inf.
// Returns the bound at every node of the grid.
std::vector<double> transfer_bound(const TrigPoly& g, double hstar_sup,
                                   double h_cap, std::int64_t G) {
  CVec gv = eval_grid_folded(g, G);
  std::vector<double> gstar = maximal_at_grid(g, G);
  double gl1 = g.coeff_l1();
  std::vector<double> out(static_cast<std::size_t>(G));
  for (std::int64_t j = 0; j < G; ++j) {
    std::size_t s = static_cast<std::size_t>(j);
    double gabs = std::hypot(gv.re[s], gv.im[s]);
    double gs = std::min(gstar[s], gl1);
    out[s] = gabs * hstar_sup + 2.0 * gs * h_cap;
  }
  return out;
}

double flat_rho_default(double delta) { return delta / 3.0; }
double flat_cap_default(double delta) { return delta * delta / 24.0; }

synth::SynthResult make_flat(double delta, const FlatWiring& w) {
  double rho_tol = w.rho_tol > 0 ? w.rho_tol : flat_rho_default(delta);
  double cap = w.coeff_cap > 0 ? w.coeff_cap : flat_cap_default(delta);
  synth::FlatContract con;
  con.kind = synth::SpectrumKind::Analytic;
  con.rho_tol = rho_tol;
  con.coeff_cap = cap;
  synth::SynthOptions o;
  o.degree_budget = w.budget;
  o.seed = w.seed;
  o.max_iters = w.max_iters;
  auto r = synth::synthesize_flat(con, o);
  if (!r.success)
    fail(ErrorCode::SynthFailed,
         "flat analytic synthesis (rho " + std::to_string(rho_tol) + ", cap " +
             std::to_string(cap) + "): " + r.failure_reason);
  return r;
}

}  // namespace

std::vector<std::pair<std::int64_t, std::int64_t>> mask_runs(const GridMask& m) {
  std::vector<std::pair<std::int64_t, std::int64_t>> runs;
  const std::int64_t G = m.G;
  std::int64_t total = static_cast<std::int64_t>(m.count());
  if (total == 0) return runs;
  if (total == G) {
    runs.emplace_back(0, G);
    return runs;
  }
  // start scanning right after a gap
  std::int64_t start = 0;
  while (m.in[static_cast<std::size_t>(start)]) ++start;
  std::int64_t run_start = -1;
  for (std::int64_t k = 0; k <= G; ++k) {
    std::int64_t j = (start + k) % G;
    bool inside = k < G && m.in[static_cast<std::size_t>(j)];
    if (inside && run_start < 0) run_start = j;
    if (!inside && run_start >= 0) {
      std::int64_t len = j - run_start;
      if (len <= 0) len += G;
      if (k == G && j == run_start) len = G;
      runs.emplace_back(run_start, len);
      run_start = -1;
    }
  }
  return runs;
}

IndicatorResult indicator_polynomial(const Arc& I, double delta,
                                     const FlatWiring& wiring,
                                     std::int64_t cert_grid) {
  if (!(delta > 0.0 && delta < 1.0))
    fail(ErrorCode::InvalidParams, "delta must be in (0,1)");
  IndicatorResult out;
  out.cert.subject = "indicator_polynomial";
  out.cert.grid_size = cert_grid;

  if (I.empty()) {
    out.cert.add("spec_nonneg", 0.0, 0.0, "zero polynomial");
    out.cert.add("rho_indicator", delta, 0.0, "zero polynomial");
    out.cert.add("offset_transfer", delta, 0.0, "zero polynomial");
    return out;
  }

  auto flat = make_flat(delta, wiring);
  out.h = std::move(flat.h);
  out.hstar_sup = maximal_sup(out.h);
  double h_cap = out.h.coeff_sup();

  auto trap = trapezoid_indicator(I, delta, out.hstar_sup, cert_grid);
  out.g = std::move(trap.g);
  out.r = 3 * out.g.degree() + 1;
  out.P = ProductPoly::product(out.g, out.h, out.r);
  out.expanded = out.P.materialize(kExpandCap);

  const std::int64_t G = cert_grid;
  out.cert.add("spec_nonneg", 0.0,
               static_cast<double>(out.P.spec_lo() < 0 ? 1 : 0),
               "exact frequency bookkeeping");

  SampledFunction pv = values_of(out.P, G);
  StepFunction ind = StepFunction::arc_indicator(I.start, I.length, {1.0, 0.0});
  out.cert.add("rho_indicator", delta, rho(pv, ind.sample(G)), "grid rho");

  auto bound = transfer_bound(out.g, out.hstar_sup, h_cap, G);
  double worst = 0.0;
  const double lo = wrap_angle(I.start - delta);
  const double hilen = I.length + 2.0 * delta;
  for (std::int64_t j = 0; j < G; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
    if (wrap_angle(t - lo) < hilen) continue;  // inside I_delta
    worst = std::max(worst, bound[static_cast<std::size_t>(j)]);
  }
  out.cert.add("offset_transfer", delta, worst,
               "|g| ||h*|| + 2 g* ||h^|| outside I_delta");
  // Context for verification without rerunning the synthesis.
  out.cert.add("h_coeff_cap_used", std::max(wiring.coeff_cap, flat_cap_default(delta)),
               h_cap, "flat factor coefficient sup");
  return out;
}

StepPolyResult step_polynomial(const StepFunction& phi, const GridMask& U,
                               double delta, const FlatWiring& wiring,
                               std::int64_t cert_grid) {
  if (!(delta > 0.0 && delta < 1.0))
    fail(ErrorCode::InvalidParams, "delta must be in (0,1)");
  if (!phi.vanishes_on(U))
    fail(ErrorCode::InvalidParams, "phi must vanish on U");

  StepPolyResult out;
  out.cert.subject = "step_polynomial";
  out.cert.grid_size = cert_grid;
  const std::int64_t G = cert_grid;

  // Arcs of constancy with nonzero values.
  std::vector<std::pair<Arc, cplx>> arcs;
  for (std::size_t i = 0; i < phi.arc_count(); ++i) {
    double a = phi.breaks[i];
    double b = (i + 1 < phi.arc_count()) ? phi.breaks[i + 1] : phi.breaks[0] + kTwoPi;
    if (phi.vals[i] != cplx(0.0, 0.0)) arcs.push_back({Arc{a, b - a}, phi.vals[i]});
  }
  const double m = static_cast<double>(std::max<std::size_t>(1, arcs.size()));

  std::vector<std::vector<double>> piece_bounds;
  FlatWiring w = wiring;
  for (const auto& [arc, v] : arcs) {
    double dj = delta / (m * std::max(1.0, std::abs(v)));
    auto piece = indicator_polynomial(arc, dj, w, cert_grid);
    w.seed += 1;  // factors stay independent but deterministic
    if (!piece.cert.pass()) {
      // carry the failing clause through
      for (auto& c : piece.cert.clauses)
        if (!c.pass) out.cert.add("piece_" + c.name, c.bound, c.measured, c.note);
    }
    piece_bounds.push_back(transfer_bound(piece.g, piece.hstar_sup,
                                          piece.h.coeff_sup(), G));
    for (auto& t : piece.P.terms()) {
      ProductTerm scaled = t;
      scaled.scale *= v;
      out.P.add_term(std::move(scaled));
    }
    out.pieces.push_back({v, arc, dj});
  }
  out.expanded = out.P.materialize(kExpandCap);

  out.cert.add("spec_nonneg", 0.0,
               static_cast<double>(!out.P.empty() && out.P.spec_lo() < 0 ? 1 : 0),
               "exact frequency bookkeeping");
  SampledFunction pv = values_of(out.P, G);
  out.cert.add("rho_step", delta, rho(pv, phi.sample(G)), "grid rho");

  // clause (5): rho(P* 1_U, 0) via the summed transfer bound; exact P* is
  // used instead whenever the expansion is small enough.
  std::vector<double> total(static_cast<std::size_t>(G), 0.0);
  for (std::size_t p = 0; p < arcs.size(); ++p) {
    double av = std::abs(arcs[p].second);
    for (std::int64_t j = 0; j < G; ++j)
      total[static_cast<std::size_t>(j)] += av * piece_bounds[p][static_cast<std::size_t>(j)];
  }
  std::string note = "summed transfer bound";
  if (out.expanded && out.expanded->term_count() > 0 &&
      static_cast<double>(out.expanded->term_count()) * static_cast<double>(G) <= 2.5e8) {
    auto exact = maximal_at_grid(*out.expanded, G);
    for (std::size_t j = 0; j < total.size(); ++j) total[j] = std::min(total[j], exact[j]);
    note = "min(transfer bound, exact prefix-diameter)";
  }
  std::vector<double> quiet(static_cast<std::size_t>(G), 0.0);
  for (std::int64_t j = 0; j < G; ++j)
    if (U.in[static_cast<std::size_t>(j)]) quiet[static_cast<std::size_t>(j)] = total[static_cast<std::size_t>(j)];
  out.cert.add("quiet_maximal", delta, rho_to_zero(quiet, G), note);
  return out;
}

namespace {

// Q := Fejer mean of the clipped step function, degree M.
TrigPoly fejer_of_step(const StepFunction& psi_c, std::int64_t M) {
  std::vector<std::pair<std::int64_t, cplx>> terms;
  for (std::int64_t n = -M; n <= M; ++n) {
    double w = 1.0 - static_cast<double>(std::llabs(n)) / static_cast<double>(M + 1);
    cplx c = psi_c.fourier_coeff(n) * w;
    if (c != cplx(0.0, 0.0)) terms.emplace_back(n, c);
  }
  return TrigPoly::from_terms(std::move(terms));
}

StepFunction clip_step(const StepFunction& psi, double cap) {
  StepFunction out = psi;
  for (auto& v : out.vals) {
    double a = std::abs(v);
    if (a > cap) v *= cap / a;
  }
  return out;
}

}  // namespace

PQPair pq_pair(const StepFunction& psi, const GridMask& U, double a,
               double delta, const FlatWiring& wiring, std::int64_t cert_grid) {
  if (!(a > 0.0) || !(delta > 0.0 && delta < 1.0))
    fail(ErrorCode::InvalidParams, "need a > 0 and delta in (0,1)");
  const std::int64_t G = cert_grid;
  // precondition |psi| < a on U
  for (std::int64_t j = 0; j < G; ++j) {
    if (!U.in[static_cast<std::size_t>(j)]) continue;
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
    if (std::abs(psi.at(t)) >= a)
      fail(ErrorCode::ClippingInfeasible, "|psi| >= a on part of U");
  }

  PQPair out;
  out.cert.subject = "pq_pair";
  out.cert.grid_size = G;

  StepFunction psi_c = clip_step(psi, 0.99 * a);
  SampledFunction psi_s = psi.sample(G);

  // Fejer degree: double until Q tracks psi on U within delta/3.
  TrigPoly Q;
  double rho_q = 1e300;
  for (std::int64_t M = 16; M <= G / 2 - 1; M <<= 1) {
    Q = fejer_of_step(psi_c, M);
    SampledFunction qv = SampledFunction::from_cvec(G, eval_grid_folded(Q, G));
    rho_q = rho_on(qv, psi_s, U);
    out.fejer_degree = M;
    if (rho_q < delta / 3.0) break;
  }
  if (!(rho_q < delta / 3.0))
    fail(ErrorCode::TargetUnreachable, "Fejer mean cannot track psi on U");
  out.Q = Q;
  SampledFunction qv = SampledFunction::from_cvec(G, eval_grid_folded(Q, G));

  // phi: step approximation of psi - Q, zero on U. Arcs: U^c runs split into
  // chunks, value at the chunk midpoint; chunk count doubles until within
  // budget 2*delta/3.
  StepFunction phi;
  double rho_phi = 1e300;
  SampledFunction target(G, {0.0, 0.0});
  for (std::int64_t j = 0; j < G; ++j)
    target.v[static_cast<std::size_t>(j)] =
        psi_s.v[static_cast<std::size_t>(j)] - qv.v[static_cast<std::size_t>(j)];
  auto runs = mask_runs(U.complement());
  for (std::int64_t pieces_per_run = 1; pieces_per_run <= G / 4; pieces_per_run <<= 1) {
    std::vector<std::pair<double, cplx>> marks;  // (start angle, value)
    for (auto [start, len] : runs) {
      std::int64_t chunk = std::max<std::int64_t>(1, len / pieces_per_run);
      for (std::int64_t off = 0; off < len; off += chunk) {
        std::int64_t clen = std::min(chunk, len - off);
        std::int64_t mid = (start + off + clen / 2) % G;
        double t0 = kTwoPi * static_cast<double>((start + off) % G) / static_cast<double>(G);
        marks.emplace_back(t0, target.v[static_cast<std::size_t>(mid)]);
      }
      double tend = kTwoPi * static_cast<double>((start + len) % G) / static_cast<double>(G);
      marks.emplace_back(tend, cplx{0.0, 0.0});
    }
    if (marks.empty()) {
      phi = StepFunction::constant({0.0, 0.0});
      rho_phi = rho(phi.sample(G), target);
      break;
    }
    std::sort(marks.begin(), marks.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    StepFunction cand;
    for (auto& [t0, v] : marks) {
      if (!cand.breaks.empty() && t0 == cand.breaks.back()) {
        cand.vals.back() = v;
        continue;
      }
      cand.breaks.push_back(t0);
      cand.vals.push_back(v);
    }
    if (cand.breaks.front() != 0.0 && cand.vals.back() != cand.vals.front()) {
      // arc from the last mark wraps to the first; representation handles it
    }
    phi = cand;
    rho_phi = rho(phi.sample(G), target);
    if (rho_phi < 2.0 * delta / 3.0) break;
  }
  if (!(rho_phi < 2.0 * delta / 3.0))
    fail(ErrorCode::TargetUnreachable, "step approximation of psi - Q too coarse");

  auto sp = step_polynomial(phi, U, delta / 3.0, wiring, cert_grid);
  out.P = std::move(sp.P);
  out.P_expanded = std::move(sp.expanded);

  out.cert.add("spec_nonneg", 0.0,
               static_cast<double>(!out.P.empty() && out.P.spec_lo() < 0 ? 1 : 0),
               "exact frequency bookkeeping");
  const CertClause* quiet = sp.cert.find("quiet_maximal");
  out.cert.add("quiet_maximal", delta, quiet ? quiet->measured : 0.0,
               quiet ? quiet->note : "zero P");
  SampledFunction pv = values_of(out.P, G);
  SampledFunction sum(G, {0.0, 0.0});
  for (std::int64_t j = 0; j < G; ++j) {
    std::size_t s = static_cast<std::size_t>(j);
    sum.v[s] = pv.v[s] + qv.v[s];
  }
  out.cert.add("rho_sum", delta, rho(sum, psi_s), "rho(P+Q, psi)");
  out.cert.add("q_sup", a, sup_norm(out.Q), "8x oversampled; Fejer mean of clipped psi");
  return out;
}

PQPair pq_pair_u(const StepFunction& psi, const GridMask& U, double a,
                 double gamma, double delta, double c_target,
                 const FlatWiring& wiring, std::int64_t cert_grid) {
  if (!(gamma > 0.0 && gamma < 1.0))
    fail(ErrorCode::InvalidParams, "gamma must be in (0,1)");
  PQPair base = pq_pair(psi, U, a, std::min(delta / 2.0, 0.5 * 0.999), wiring, cert_grid);

  double u_delta = std::min(0.2, delta / 2.0);
  auto hb = synth::synth_flat_bilateral(gamma, u_delta, c_target, wiring.budget,
                                        wiring.seed + 77);
  if (!hb.success)
    fail(ErrorCode::SynthFailed, "bilateral flat synthesis: " + hb.failure_reason);

  std::int64_t r = 3 * base.Q.degree() + 1;
  TrigPoly Qu = multiply(base.Q, hb.h.dilate(r));

  PQPair out;
  out.P = std::move(base.P);
  out.P_expanded = std::move(base.P_expanded);
  out.Q = std::move(Qu);
  out.fejer_degree = base.fejer_degree;
  out.cert.subject = "pq_pair_u";
  out.cert.grid_size = cert_grid;
  const std::int64_t G = cert_grid;

  out.cert.add("spec_nonneg", 0.0,
               static_cast<double>(!out.P.empty() && out.P.spec_lo() < 0 ? 1 : 0),
               "exact frequency bookkeeping");
  const CertClause* quiet = base.cert.find("quiet_maximal");
  out.cert.add("quiet_maximal", delta, quiet ? quiet->measured : 0.0,
               quiet ? quiet->note : "");

  SampledFunction pv = values_of(out.P, G);
  CVec quv = eval_grid_folded(out.Q, G);
  SampledFunction psi_s = psi.sample(G);
  SampledFunction diff(G, {0.0, 0.0});
  for (std::int64_t j = 0; j < G; ++j) {
    std::size_t s = static_cast<std::size_t>(j);
    diff.v[s] = pv.v[s] + quv.at(s) - psi_s.v[s];
  }
  double meas = measure_above(diff, delta);
  out.cert.add("levelset_sum", c_target * gamma, meas,
               "achieved C = " + std::to_string(meas / gamma));
  out.cert.add("u_norm_q", a / gamma, u_norm(out.Q, G),
               "grid " + std::to_string(G) + " symmetric partial sums");
  return out;
}

}  // namespace triglab::constructors
