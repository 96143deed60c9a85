#include "triglab/sampled.hpp"

#include <algorithm>
#include <cmath>

namespace triglab {

SampledFunction::SampledFunction(std::int64_t grid, cplx fill) : G(grid) {
  if (!is_pow2(grid) || grid < 8)
    fail(ErrorCode::InvalidParams, "grid size must be a dyadic power >= 8");
  v.assign(static_cast<std::size_t>(grid), fill);
}

SampledFunction SampledFunction::from_cvec(std::int64_t G, const CVec& c) {
  SampledFunction f(G, {0.0, 0.0});
  for (std::size_t j = 0; j < f.v.size(); ++j) f.v[j] = c.at(j);
  return f;
}

CVec SampledFunction::to_cvec() const {
  CVec c(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) c.set(j, v[j]);
  return c;
}

void require_same_grid(const SampledFunction& f, const SampledFunction& g) {
  if (f.G != g.G) fail(ErrorCode::GridMismatch, "grids differ");
}

GridMask GridMask::full(std::int64_t G) {
  GridMask m;
  m.G = G;
  m.in.assign(static_cast<std::size_t>(G), 1);
  return m;
}

GridMask GridMask::empty(std::int64_t G) {
  GridMask m;
  m.G = G;
  m.in.assign(static_cast<std::size_t>(G), 0);
  return m;
}

std::size_t GridMask::count() const {
  std::size_t c = 0;
  for (auto b : in) c += b;
  return c;
}

double GridMask::measure() const {
  return static_cast<double>(count()) / static_cast<double>(G);
}

GridMask GridMask::complement() const {
  GridMask m = *this;
  for (auto& b : m.in) b = b ? 0 : 1;
  return m;
}

double rho_to_zero(const std::vector<double>& absvals, std::int64_t G) {
  std::vector<double> d = absvals;
  std::sort(d.begin(), d.end(), std::greater<double>());
  const std::size_t n = d.size();
  double best = 1e300;
  for (std::size_t k = 0; k <= n; ++k) {
    double dk1 = (k < n) ? d[k] : 0.0;
    double cand = std::max(dk1, static_cast<double>(k) / static_cast<double>(G));
    best = std::min(best, cand);
  }
  return best;
}

double rho(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  std::vector<double> d(f.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = std::abs(f.v[j] - g.v[j]);
  return rho_to_zero(d, f.G);
}

double rho_on(const SampledFunction& f, const SampledFunction& g, const GridMask& U) {
  require_same_grid(f, g);
  if (U.G != f.G) fail(ErrorCode::GridMismatch, "mask grid differs");
  std::vector<double> d(f.size(), 0.0);
  for (std::size_t j = 0; j < d.size(); ++j)
    if (U.in[j]) d[j] = std::abs(f.v[j] - g.v[j]);
  return rho_to_zero(d, f.G);
}

double measure_above(const SampledFunction& f, double eps) {
  if (eps < 0) fail(ErrorCode::InvalidParams, "eps must be >= 0");
  std::size_t c = 0;
  for (const auto& z : f.v)
    if (std::abs(z) > eps) ++c;
  return static_cast<double>(c) / static_cast<double>(f.G);
}

StepFunction StepFunction::constant(cplx c) {
  StepFunction s;
  s.breaks = {0.0};
  s.vals = {c};
  return s;
}

StepFunction StepFunction::arc_indicator(double start, double len, cplx inside,
                                         cplx outside) {
  if (len <= 0.0) return constant(outside);
  if (len >= kTwoPi) return constant(inside);
  double a = wrap_angle(start);
  double b = wrap_angle(start + len);
  StepFunction s;
  if (a < b) {
    if (a > 0.0) {
      s.breaks = {0.0, a, b};
      s.vals = {outside, inside, outside};
    } else {
      s.breaks = {0.0, b};
      s.vals = {inside, outside};
    }
  } else {
    // wraps through 0
    s.breaks = {0.0, b, a};
    s.vals = {inside, outside, inside};
  }
  return s;
}

cplx StepFunction::at(double t) const {
  double x = wrap_angle(t);
  // last break <= x (arcs wrap: values[i] on [breaks[i], breaks[i+1]))
  auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  std::size_t i = (it == breaks.begin()) ? vals.size() - 1
                                         : static_cast<std::size_t>(it - breaks.begin()) - 1;
  return vals[i];
}

SampledFunction StepFunction::sample(std::int64_t G) const {
  SampledFunction f(G, {0.0, 0.0});
  for (std::int64_t j = 0; j < G; ++j) f.v[static_cast<std::size_t>(j)] = at(f.t(j));
  return f;
}

cplx StepFunction::fourier_coeff(std::int64_t n) const {
  cplx s{0.0, 0.0};
  const std::size_t m = vals.size();
  for (std::size_t i = 0; i < m; ++i) {
    double a = breaks[i];
    double b = (i + 1 < m) ? breaks[i + 1] : breaks[0] + kTwoPi;
    double len = b - a;
    if (n == 0) {
      s += vals[i] * (len / kTwoPi);
    } else {
      // (1/2pi) int_a^b e^{-int} dt
      double mid = 0.5 * (a + b);
      double half = 0.5 * len;
      double nn = static_cast<double>(n);
      cplx phase(std::cos(nn * mid), -std::sin(nn * mid));
      s += vals[i] * phase * (std::sin(nn * half) / (kPi * nn));
    }
  }
  return s;
}

bool StepFunction::vanishes_on(const GridMask& U) const {
  for (std::int64_t j = 0; j < U.G; ++j) {
    if (!U.in[static_cast<std::size_t>(j)]) continue;
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(U.G);
    if (at(t) != cplx(0.0, 0.0)) return false;
  }
  return true;
}

StepFunction step_approximate(const SampledFunction& f, double target) {
  if (target <= 0) fail(ErrorCode::InvalidParams, "target must be > 0");
  for (std::int64_t K = 2; K <= f.G / 4; K <<= 1) {
    StepFunction s;
    s.breaks.resize(static_cast<std::size_t>(K));
    s.vals.resize(static_cast<std::size_t>(K));
    for (std::int64_t i = 0; i < K; ++i) {
      s.breaks[static_cast<std::size_t>(i)] =
          kTwoPi * static_cast<double>(i) / static_cast<double>(K);
      std::int64_t mid = (2 * i + 1) * f.G / (2 * K);
      s.vals[static_cast<std::size_t>(i)] = f.v[static_cast<std::size_t>(mid)];
    }
    if (rho(s.sample(f.G), f) < target) return s;
  }
  fail(ErrorCode::TargetUnreachable, "step approximation needs more than G/4 arcs");
}

}  // namespace triglab
