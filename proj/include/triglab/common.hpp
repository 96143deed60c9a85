#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace triglab {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

/// Errors carry a stable code so the CLI can name the failing condition.
enum class ErrorCode {
  GridTooCoarse,
  GridMismatch,
  DilationTooSmall,
  TargetUnreachable,
  InfeasibleRamp,
  InvalidEpsilon,
  InvalidParams,
  ClippingInfeasible,
  SynthFailed,
  BadFile,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& what) {
  throw Error(c, what);
}

inline bool is_pow2(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline std::int64_t next_pow2(std::int64_t n) {
  std::int64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

}  // namespace triglab
