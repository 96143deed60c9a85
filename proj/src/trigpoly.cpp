#include "triglab/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "triglab/kernels.hpp"
#include "triglab/sampled.hpp"

namespace triglab {

TrigPoly TrigPoly::constant(cplx c) { return monomial(0, c); }

TrigPoly TrigPoly::monomial(std::int64_t n, cplx c) {
  TrigPoly p;
  if (c != cplx(0.0, 0.0)) {
    p.freq_.push_back(n);
    p.coef_.push_back(c);
  }
  return p;
}

TrigPoly TrigPoly::from_terms(std::vector<std::pair<std::int64_t, cplx>> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  TrigPoly p;
  p.freq_.reserve(terms.size());
  p.coef_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && terms[i].first == terms[i - 1].first)
      fail(ErrorCode::InvalidParams, "duplicate frequency in term list");
    if (terms[i].second != cplx(0.0, 0.0)) {
      p.freq_.push_back(terms[i].first);
      p.coef_.push_back(terms[i].second);
    }
  }
  return p;
}

std::int64_t TrigPoly::lo() const {
  return freq_.empty() ? 0 : freq_.front();
}

std::int64_t TrigPoly::hi() const { return freq_.empty() ? 0 : freq_.back(); }

std::int64_t TrigPoly::degree() const {
  if (freq_.empty()) return 0;
  return std::max(std::llabs(freq_.front()), std::llabs(freq_.back()));
}

cplx TrigPoly::coeff(std::int64_t n) const {
  auto it = std::lower_bound(freq_.begin(), freq_.end(), n);
  if (it == freq_.end() || *it != n) return {0.0, 0.0};
  return coef_[static_cast<std::size_t>(it - freq_.begin())];
}

TrigPoly TrigPoly::dilate(std::int64_t r) const {
  if (r < 1) fail(ErrorCode::InvalidParams, "dilation factor must be >= 1");
  TrigPoly p;
  p.freq_.reserve(freq_.size());
  p.coef_ = coef_;
  for (std::int64_t n : freq_) {
    if (n != 0 && std::llabs(n) > (std::int64_t{1} << 62) / r)
      fail(ErrorCode::InvalidParams, "dilated frequency overflows");
    p.freq_.push_back(n * r);
  }
  return p;
}

TrigPoly TrigPoly::segment(std::int64_t l, std::int64_t m) const {
  TrigPoly p;
  for (std::size_t i = 0; i < freq_.size(); ++i) {
    if (freq_[i] >= l && freq_[i] <= m) {
      p.freq_.push_back(freq_[i]);
      p.coef_.push_back(coef_[i]);
    }
  }
  return p;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
  TrigPoly p;
  std::size_t i = 0, j = 0;
  while (i < freq_.size() || j < o.freq_.size()) {
    std::int64_t n;
    cplx c;
    if (j >= o.freq_.size() || (i < freq_.size() && freq_[i] < o.freq_[j])) {
      n = freq_[i];
      c = coef_[i];
      ++i;
    } else if (i >= freq_.size() || o.freq_[j] < freq_[i]) {
      n = o.freq_[j];
      c = o.coef_[j];
      ++j;
    } else {
      n = freq_[i];
      c = coef_[i] + o.coef_[j];
      ++i;
      ++j;
    }
    if (c != cplx(0.0, 0.0)) {
      p.freq_.push_back(n);
      p.coef_.push_back(c);
    }
  }
  return p;
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const {
  return *this + o.scaled({-1.0, 0.0});
}

TrigPoly TrigPoly::scaled(cplx s) const {
  if (s == cplx(0.0, 0.0)) return TrigPoly();
  TrigPoly p = *this;
  for (auto& c : p.coef_) c *= s;
  return p;
}

double TrigPoly::coeff_sup() const {
  double m = 0.0;
  for (const auto& c : coef_) m = std::max(m, std::abs(c));
  return m;
}

double TrigPoly::coeff_l1() const {
  double s = 0.0;
  for (const auto& c : coef_) s += std::abs(c);
  return s;
}

double TrigPoly::coeff_energy() const {
  double s = 0.0;
  for (const auto& c : coef_) s += std::norm(c);
  return s;
}

double TrigPoly::l2_norm() const { return std::sqrt(coeff_energy()); }

TrigPoly multiply(const TrigPoly& g, const TrigPoly& h) {
  if (g.is_zero() || h.is_zero()) return TrigPoly::zero();
  std::map<std::int64_t, cplx> acc;
  const auto& gf = g.freqs();
  const auto& gc = g.coeffs();
  const auto& hf = h.freqs();
  const auto& hc = h.coeffs();
  for (std::size_t i = 0; i < gf.size(); ++i)
    for (std::size_t j = 0; j < hf.size(); ++j) acc[gf[i] + hf[j]] += gc[i] * hc[j];
  std::vector<std::pair<std::int64_t, cplx>> terms(acc.begin(), acc.end());
  return TrigPoly::from_terms(std::move(terms));
}

cplx eval(const TrigPoly& p, double t) {
  cplx s{0.0, 0.0};
  const auto& f = p.freqs();
  const auto& c = p.coeffs();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double a = static_cast<double>(f[i]) * t;
    s += c[i] * cplx(std::cos(a), std::sin(a));
  }
  return s;
}

CVec eval_grid_folded(const TrigPoly& p, std::int64_t G) {
  if (!is_pow2(G) || G < 8)
    fail(ErrorCode::InvalidParams, "grid size must be a dyadic power >= 8");
  CVec v(static_cast<std::size_t>(G));
  const auto& f = p.freqs();
  const auto& c = p.coeffs();
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::int64_t m = f[i] % G;
    if (m < 0) m += G;
    v.re[static_cast<std::size_t>(m)] += c[i].real();
    v.im[static_cast<std::size_t>(m)] += c[i].imag();
  }
  fft_inverse_unnormalized(v);
  return v;
}

SampledFunction eval_grid(const TrigPoly& p, std::int64_t G) {
  if (G < 2 * p.degree() + 2)
    fail(ErrorCode::GridTooCoarse, "need G >= 2*degree + 2");
  return SampledFunction::from_cvec(G, eval_grid_folded(p, G));
}

double sup_norm(const TrigPoly& p, std::int64_t grid) {
  if (p.is_zero()) return 0.0;
  CVec v = eval_grid_folded(p, grid);
  return std::sqrt(kernels::active().max_abs2(v.re.data(), v.im.data(), v.size()));
}

double sup_norm(const TrigPoly& p) {
  std::int64_t G = next_pow2(std::max<std::int64_t>(16, 8 * p.degree() + 2));
  return sup_norm(p, G);
}

double u_norm(const TrigPoly& p, std::int64_t grid) {
  if (p.is_zero()) return 0.0;
  const PhaseTable& tab = phase_table(grid);
  CVec acc(static_cast<std::size_t>(grid));
  // Levels of |n| present, ascending; frequencies enter in +-pairs.
  const auto& f = p.freqs();
  const auto& c = p.coeffs();
  std::vector<std::size_t> order(f.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ka = std::llabs(f[a]), kb = std::llabs(f[b]);
    if (ka != kb) return ka < kb;
    return f[a] < f[b];
  });
  const auto& K = kernels::active();
  double best = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::int64_t level = std::llabs(f[order[i]]);
    while (i < order.size() && std::llabs(f[order[i]]) == level) {
      std::size_t idx = order[i];
      std::int64_t m = f[idx] % grid;
      if (m < 0) m += grid;
      // acc += c * e^{i n t_j}: phase row is a stride-m walk of the table.
      // Build the phase row explicitly once per frequency.
      static thread_local CVec row;
      if (row.size() != static_cast<std::size_t>(grid)) row = CVec(static_cast<std::size_t>(grid));
      for (std::int64_t j = 0; j < grid; ++j) {
        std::int64_t t = (m * j) % grid;
        row.re[static_cast<std::size_t>(j)] = tab.re[static_cast<std::size_t>(t)];
        row.im[static_cast<std::size_t>(j)] = tab.im[static_cast<std::size_t>(t)];
      }
      K.caxpy(acc.re.data(), acc.im.data(), row.re.data(), row.im.data(),
              c[idx].real(), c[idx].imag(), acc.size());
      ++i;
    }
    best = std::max(best, K.max_abs2(acc.re.data(), acc.im.data(), acc.size()));
  }
  return std::sqrt(best);
}

double u_norm(const TrigPoly& p) {
  std::int64_t G = next_pow2(std::max<std::int64_t>(16, 8 * p.degree() + 2));
  return u_norm(p, G);
}

}  // namespace triglab
