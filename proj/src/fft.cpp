#include "triglab/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "triglab/kernels.hpp"

namespace triglab {

const PhaseTable& phase_table(std::int64_t G) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<PhaseTable>> cache;
  if (!is_pow2(G)) fail(ErrorCode::InvalidParams, "grid size must be a power of two");
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(G);
  if (it != cache.end()) return *it->second;
  auto t = std::make_unique<PhaseTable>();
  t->G = G;
  t->re.resize(G);
  t->im.resize(G);
  for (std::int64_t m = 0; m < G; ++m) {
    double a = kTwoPi * static_cast<double>(m) / static_cast<double>(G);
    t->re[m] = std::cos(a);
    t->im[m] = std::sin(a);
  }
  auto& ref = *t;
  cache.emplace(G, std::move(t));
  return ref;
}

namespace {

void bit_reverse_permute(CVec& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(v.re[i], v.re[j]);
      std::swap(v.im[i], v.im[j]);
    }
  }
}

// sign = -1 forward, +1 inverse (unnormalized).
void fft_core(CVec& v, int sign) {
  const std::size_t n = v.size();
  if (!is_pow2(static_cast<std::int64_t>(n)))
    fail(ErrorCode::InvalidParams, "fft size must be a power of two");
  if (n == 1) return;
  const PhaseTable& tab = phase_table(static_cast<std::int64_t>(n));
  // Twiddle for index k at stage of half-length h: e^{sign*2*pi*i*k*(n/2h)/n}.
  // For the forward direction we need conjugated entries; build per-direction
  // tables once (cached alongside the phase table would complicate eviction,
  // so keep a local static keyed by size and sign).
  static std::mutex mu;
  static std::map<std::pair<std::int64_t, int>, std::unique_ptr<std::vector<double>[]>> twcache;
  const double* twr;
  const double* twi;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_pair(static_cast<std::int64_t>(n), sign);
    auto it = twcache.find(key);
    if (it == twcache.end()) {
      auto arr = std::make_unique<std::vector<double>[]>(2);
      arr[0].resize(n / 2);
      arr[1].resize(n / 2);
      for (std::size_t k = 0; k < n / 2; ++k) {
        arr[0][k] = tab.re[k];
        arr[1][k] = sign < 0 ? -tab.im[k] : tab.im[k];
      }
      it = twcache.emplace(key, std::move(arr)).first;
    }
    twr = it->second[0].data();
    twi = it->second[1].data();
  }
  bit_reverse_permute(v);
  const auto& K = kernels::active();
  for (std::size_t half = 1; half < n; half <<= 1) {
    std::size_t blocks = n / (half * 2);
    std::size_t stride = n / (half * 2);
    K.fft_stage(v.re.data(), v.im.data(), twr, twi, half, blocks, stride);
  }
}

}  // namespace

void fft_forward(CVec& v) { fft_core(v, -1); }
void fft_inverse_unnormalized(CVec& v) { fft_core(v, +1); }

}  // namespace triglab
