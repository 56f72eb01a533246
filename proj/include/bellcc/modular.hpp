#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace bellcc {

using Complex = std::complex<double>;

// Representative of v in {0, ..., d-1}.
constexpr int mod(long long v, int d) {
  long long r = v % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

// omega^e with omega = exp(2 pi i / d). The exponent is reduced first so
// that equal residues give bit-identical results.
inline Complex omega_pow(int d, long long e) {
  const double angle = 2.0 * std::numbers::pi * mod(e, d) / d;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace bellcc
