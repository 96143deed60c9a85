#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "triglab/fft.hpp"
#include "triglab/kernels.hpp"

using namespace triglab;

namespace {

struct Arrays {
  std::vector<double> re, im;
};

Arrays random_arrays(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Arrays a;
  a.re.resize(n);
  a.im.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.re[i] = u(rng);
    a.im[i] = u(rng);
  }
  return a;
}

}  // namespace

// The SIMD table must agree with the scalar reference on every kernel.
TEST_CASE("kernel tables are equivalent") {
  const auto& S = kernels::scalar();
  const auto& A = kernels::active();
  INFO("active table: ", A.name);
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    auto x = random_arrays(n, 11 + n);
    auto y = random_arrays(n, 99 + n);

    auto xs = x, xa = x;
    S.cmul(xs.re.data(), xs.im.data(), y.re.data(), y.im.data(), n);
    A.cmul(xa.re.data(), xa.im.data(), y.re.data(), y.im.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(xs.re[i] == doctest::Approx(xa.re[i]).epsilon(1e-13));
      CHECK(xs.im[i] == doctest::Approx(xa.im[i]).epsilon(1e-13));
    }

    xs = x;
    xa = x;
    S.caxpy(xs.re.data(), xs.im.data(), y.re.data(), y.im.data(), 0.3, -1.2, n);
    A.caxpy(xa.re.data(), xa.im.data(), y.re.data(), y.im.data(), 0.3, -1.2, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(xs.re[i] == doctest::Approx(xa.re[i]).epsilon(1e-13));

    CHECK(S.max_abs2(x.re.data(), x.im.data(), n) ==
          doctest::Approx(A.max_abs2(x.re.data(), x.im.data(), n)).epsilon(1e-14));
    CHECK(S.sum_abs2(x.re.data(), x.im.data(), n) ==
          doctest::Approx(A.sum_abs2(x.re.data(), x.im.data(), n)).epsilon(1e-12));
    CHECK(S.count_abs2_above(x.re.data(), x.im.data(), 1.7, n) ==
          A.count_abs2_above(x.re.data(), x.im.data(), 1.7, n));

    xs = x;
    xa = x;
    S.clip_disk(xs.re.data(), xs.im.data(), 1.0, 0.0, 0.8, n);
    A.clip_disk(xa.re.data(), xa.im.data(), 1.0, 0.0, 0.8, n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(xs.re[i] == doctest::Approx(xa.re[i]).epsilon(1e-13));
      CHECK(xs.im[i] == doctest::Approx(xa.im[i]).epsilon(1e-13));
    }

    xs = x;
    xa = x;
    S.clip_cap(xs.re.data(), xs.im.data(), 0.5, n);
    A.clip_cap(xa.re.data(), xa.im.data(), 0.5, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(xs.re[i] == doctest::Approx(xa.re[i]).epsilon(1e-13));
  }
}

TEST_CASE("prefix_walk scalar/simd equivalence incl. stored points") {
  const auto& S = kernels::scalar();
  const auto& A = kernels::active();
  const std::int64_t G = 64;
  const auto& tab = phase_table(G);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t nnz = 17;
  std::vector<std::int64_t> nmod(nnz);
  std::vector<double> cre(nnz), cim(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    nmod[k] = static_cast<std::int64_t>(k * 3 % G);
    cre[k] = u(rng);
    cim[k] = u(rng);
  }
  std::vector<double> ws(32), wa(32), ps((nnz + 1) * 8), pa((nnz + 1) * 8);
  S.prefix_walk(nnz, nmod.data(), cre.data(), cim.data(), tab.re.data(),
                tab.im.data(), G, 8, 4, ws.data(), ps.data());
  A.prefix_walk(nnz, nmod.data(), cre.data(), cim.data(), tab.re.data(),
                tab.im.data(), G, 8, 4, wa.data(), pa.data());
  for (std::size_t i = 0; i < ws.size(); ++i)
    CHECK(ws[i] == doctest::Approx(wa[i]).epsilon(1e-13));
  for (std::size_t i = 0; i < ps.size(); ++i)
    CHECK(ps[i] == doctest::Approx(pa[i]).epsilon(1e-13));
}

TEST_CASE("fft roundtrip and known spectra") {
  for (std::size_t n : {8u, 64u, 1024u}) {
    auto a = random_arrays(n, 1234 + n);
    CVec v;
    v.re = a.re;
    v.im = a.im;
    CVec w = v;
    fft_forward(w);
    fft_inverse_unnormalized(w);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(w.re[i] / static_cast<double>(n) == doctest::Approx(v.re[i]).epsilon(1e-11));
      CHECK(w.im[i] / static_cast<double>(n) == doctest::Approx(v.im[i]).epsilon(1e-11));
    }
  }
  // e^{i t_j} has forward transform G at bin 1.
  const std::size_t G = 16;
  CVec v(G);
  for (std::size_t j = 0; j < G; ++j) {
    double t = kTwoPi * static_cast<double>(j) / G;
    v.re[j] = std::cos(t);
    v.im[j] = std::sin(t);
  }
  fft_forward(v);
  for (std::size_t k = 0; k < G; ++k) {
    double expect = (k == 1) ? static_cast<double>(G) : 0.0;
    CHECK(v.re[k] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(v.im[k] == doctest::Approx(0.0).epsilon(1e-12));
  }
}
