#include "triglab/product_poly.hpp"

#include <algorithm>
#include <cmath>

#include "triglab/kernels.hpp"

namespace triglab {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  __int128 p = static_cast<__int128>(a) * static_cast<__int128>(b);
  if (p > std::numeric_limits<std::int64_t>::max() ||
      p < std::numeric_limits<std::int64_t>::min())
    fail(ErrorCode::InvalidParams, "frequency bookkeeping overflows int64");
  return static_cast<std::int64_t>(p);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  __int128 p = static_cast<__int128>(a) + static_cast<__int128>(b);
  if (p > std::numeric_limits<std::int64_t>::max() ||
      p < std::numeric_limits<std::int64_t>::min())
    fail(ErrorCode::InvalidParams, "frequency bookkeeping overflows int64");
  return static_cast<std::int64_t>(p);
}

}  // namespace

ProductPoly ProductPoly::from_poly(const TrigPoly& p) {
  ProductPoly q;
  if (!p.is_zero()) {
    ProductTerm t;
    t.factors.push_back({p, 1});
    q.terms_.push_back(std::move(t));
  }
  return q;
}

ProductPoly ProductPoly::product(const TrigPoly& g, const TrigPoly& h, std::int64_t r) {
  ProductPoly q;
  if (g.is_zero() || h.is_zero()) return q;
  ProductTerm t;
  t.factors.push_back({g, 1});
  t.factors.push_back({h, r});
  q.terms_.push_back(std::move(t));
  return q;
}

void ProductPoly::add_term(ProductTerm t) {
  if (t.scale == cplx(0.0, 0.0)) return;
  for (const auto& f : t.factors)
    if (f.poly.is_zero()) return;
  terms_.push_back(std::move(t));
}

CVec ProductPoly::eval_grid(std::int64_t G) const {
  CVec acc(static_cast<std::size_t>(G));
  const auto& K = kernels::active();
  for (const auto& term : terms_) {
    CVec prod(static_cast<std::size_t>(G));
    bool first = true;
    for (const auto& f : term.factors) {
      CVec vals = eval_grid_folded(f.poly, G);  // base values of poly(t)
      // poly(r t) at node j equals poly(t) at node (r j) mod G.
      CVec mapped(static_cast<std::size_t>(G));
      std::int64_t rmod = f.dilation % G;
      if (rmod < 0) rmod += G;
      if (rmod == 1) {
        mapped = vals;
      } else {
        for (std::int64_t j = 0; j < G; ++j) {
          std::int64_t src = (rmod * j) % G;
          mapped.re[static_cast<std::size_t>(j)] = vals.re[static_cast<std::size_t>(src)];
          mapped.im[static_cast<std::size_t>(j)] = vals.im[static_cast<std::size_t>(src)];
        }
      }
      if (first) {
        prod = std::move(mapped);
        first = false;
      } else {
        K.cmul(prod.re.data(), prod.im.data(), mapped.re.data(), mapped.im.data(),
               prod.size());
      }
    }
    if (first) continue;
    K.caxpy(acc.re.data(), acc.im.data(), prod.re.data(), prod.im.data(),
            term.scale.real(), term.scale.imag(), acc.size());
  }
  return acc;
}

std::int64_t ProductPoly::spec_lo() const {
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  for (const auto& term : terms_) {
    std::int64_t l = 0;
    for (const auto& f : term.factors)
      l = checked_add(l, checked_mul(f.dilation, f.poly.lo()));
    lo = std::min(lo, l);
  }
  return terms_.empty() ? 0 : lo;
}

std::int64_t ProductPoly::spec_hi() const {
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& term : terms_) {
    std::int64_t h = 0;
    for (const auto& f : term.factors)
      h = checked_add(h, checked_mul(f.dilation, f.poly.hi()));
    hi = std::max(hi, h);
  }
  return terms_.empty() ? 0 : hi;
}

double ProductPoly::coeff_sup_bound() const {
  // Within one dilated product, distinct factor-frequency combinations can
  // collide only if the dilation bands overlap; the l1-of-smaller-factors
  // bound below is always valid.
  double total = 0.0;
  for (const auto& term : terms_) {
    double bound = std::abs(term.scale);
    if (term.factors.empty()) {
      total += bound;
      continue;
    }
    // sup of convolution <= sup of one factor times l1 of the rest; choose
    // the ordering that keeps the product smallest.
    double best = 1e300;
    for (std::size_t pick = 0; pick < term.factors.size(); ++pick) {
      double b = term.factors[pick].poly.coeff_sup();
      for (std::size_t i = 0; i < term.factors.size(); ++i)
        if (i != pick) b *= term.factors[i].poly.coeff_l1();
      best = std::min(best, b);
    }
    total += bound * best;
  }
  return total;
}

double ProductPoly::coeff_l1_bound() const {
  double total = 0.0;
  for (const auto& term : terms_) {
    double b = std::abs(term.scale);
    for (const auto& f : term.factors) b *= f.poly.coeff_l1();
    total += b;
  }
  return total;
}

double ProductPoly::term_count_if_expanded() const {
  double total = 0.0;
  for (const auto& term : terms_) {
    double b = 1.0;
    for (const auto& f : term.factors) b *= static_cast<double>(f.poly.term_count());
    total += b;
  }
  return total;
}

std::optional<TrigPoly> ProductPoly::materialize(double max_terms) const {
  if (term_count_if_expanded() > max_terms) return std::nullopt;
  TrigPoly acc = TrigPoly::zero();
  for (const auto& term : terms_) {
    TrigPoly prod = TrigPoly::constant(term.scale);
    for (const auto& f : term.factors)
      prod = multiply(prod, f.poly.dilate(f.dilation));
    acc = acc + prod;
  }
  return acc;
}

}  // namespace triglab
