#pragma once

// Fourier analysis of functions x0 -> omega^{n(x0)} on Z_d.

#include <complex>
#include <optional>
#include <vector>

#include "bellcc/errors.hpp"
#include "bellcc/modular.hpp"

namespace bellcc {

// B(x0) = omega^{n(x0)} for x0 = 0..d-1, with exponents kept as integers.
struct OmegaFunction {
  int d = 2;
  std::vector<int> n;

  Complex operator()(int x0) const { return omega_pow(d, n[x0]); }
};

inline void require_valid(const OmegaFunction& bf) {
  if (bf.d < 1 || bf.n.size() != static_cast<size_t>(bf.d))
    throw InputError("omega function needs exactly d exponents");
  for (int v : bf.n)
    if (v < 0 || v >= bf.d) throw InputError("omega function exponent out of range");
}

// K(l, B^r) = (1/d) sum_{x0} omega^{r n(x0)} omega^{-l x0}
inline Complex dft_power(const OmegaFunction& bf, int l, int r) {
  require_valid(bf);
  Complex s = 0.0;
  for (int x0 = 0; x0 < bf.d; ++x0)
    s += omega_pow(bf.d, static_cast<long long>(r) * bf.n[x0] - static_cast<long long>(l) * x0);
  return s / static_cast<double>(bf.d);
}

// lambda_nu = #{x0 : n(x0) - x0 = nu mod d} / d, i.e. K(1, B) written as a
// convex combination of the roots omega^nu.
inline std::vector<double> convex_weights(const OmegaFunction& bf) {
  require_valid(bf);
  std::vector<int> count(bf.d, 0);
  for (int x0 = 0; x0 < bf.d; ++x0) ++count[mod(bf.n[x0] - x0, bf.d)];
  std::vector<double> out(bf.d);
  for (int nu = 0; nu < bf.d; ++nu) out[nu] = static_cast<double>(count[nu]) / bf.d;
  return out;
}

struct AffineExponent {
  int slope = 0;   // s
  int offset = 0;  // t

  bool operator==(const AffineExponent&) const = default;
};

// Returns (s, t) when n(x0) = s x0 + t mod d for every x0. Exact
// congruence test, no Fourier thresholds involved.
inline std::optional<AffineExponent> linear_detect(const OmegaFunction& bf) {
  require_valid(bf);
  const int t = bf.n[0];
  const int s = bf.d > 1 ? mod(bf.n[1] - t, bf.d) : 0;
  for (int x0 = 0; x0 < bf.d; ++x0)
    if (bf.n[x0] != mod(static_cast<long long>(s) * x0 + t, bf.d)) return std::nullopt;
  return AffineExponent{s, t};
}

}  // namespace bellcc
