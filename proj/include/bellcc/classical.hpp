#pragma once

// Exact classical optimisation by enumeration: the local bound of a Bell
// functional, and the value of its communication game when Alice's message
// is an arbitrary function of (x0, x) and Bob decodes optimally.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bellcc/ccp.hpp"
#include "bellcc/errors.hpp"
#include "bellcc/fourier.hpp"
#include "bellcc/functional.hpp"
#include "bellcc/modular.hpp"
#include "bellcc/parallel.hpp"

namespace bellcc {

inline constexpr double kDefaultBellCap = 1e8;
inline constexpr double kDefaultCcpCap = 1e7;

struct EnumerationOptions {
  double cap = kDefaultBellCap;
  int threads = 1;
};

// Local deterministic assignment a(x), b(y).
struct DeterministicBellStrategy {
  std::vector<int> a;
  std::vector<int> b;

  bool operator==(const DeterministicBellStrategy&) const = default;
};

// m(x0, x), stored at x0*mA + x.
struct MessagingStrategy {
  int d = 2;
  int mA = 1;
  std::vector<int> m;

  MessagingStrategy() = default;
  MessagingStrategy(int d_, int mA_) : d(d_), mA(mA_), m(static_cast<size_t>(d_) * mA_, 0) {}

  int operator()(int x0, int x) const { return m[static_cast<size_t>(x0) * mA + x]; }
  int& at(int x0, int x) { return m[static_cast<size_t>(x0) * mA + x]; }

  // m = x0 + a(x)
  static MessagingStrategy linear(int d, const std::vector<int>& a) {
    MessagingStrategy s(d, static_cast<int>(a.size()));
    for (int x0 = 0; x0 < d; ++x0)
      for (int x = 0; x < s.mA; ++x) s.at(x0, x) = mod(x0 + a[x], d);
    return s;
  }

  bool operator==(const MessagingStrategy&) const = default;
};

// Bob's guess G(y, message), stored at y*d + message.
struct GuessStrategy {
  int d = 2;
  int mB = 1;
  std::vector<int> g;

  GuessStrategy() = default;
  GuessStrategy(int d_, int mB_) : d(d_), mB(mB_), g(static_cast<size_t>(d_) * mB_, 0) {}

  int operator()(int y, int msg) const { return g[static_cast<size_t>(y) * d + msg]; }
  int& at(int y, int msg) { return g[static_cast<size_t>(y) * d + msg]; }

  bool operator==(const GuessStrategy&) const = default;
};

namespace detail {

// d^n as a double, saturating far above any cap.
inline double power_count(int d, int n) { return std::pow(static_cast<double>(d), n); }

// w[(x*mB + y)*d + s] = p(x,y) * sum of c over terms at (x,y) with F = s.
inline std::vector<double> residue_payoffs(const BellFunctional& f) {
  std::vector<double> w(static_cast<size_t>(f.mA()) * f.mB() * f.d(), 0.0);
  for (const Term& t : f.terms)
    w[(static_cast<size_t>(t.x) * f.mB() + t.y) * f.d() + t.F] += f.scenario.prob(t.x, t.y) * t.c;
  return w;
}

// Decodes index n into `digits` base-d digits, most significant first.
inline void decode_digits(std::uint64_t n, int d, std::vector<int>& digits) {
  for (size_t pos = digits.size(); pos-- > 0;) {
    digits[pos] = static_cast<int>(n % d);
    n /= d;
  }
}

}  // namespace detail

inline double deterministic_bell_value(const BellFunctional& f, const DeterministicBellStrategy& s) {
  double v = 0.0;
  for (const Term& t : f.terms)
    if (mod(s.a[t.x] + s.b[t.y], f.d()) == t.F) v += f.scenario.prob(t.x, t.y) * t.c;
  return v;
}

// The behavior P(a,b|x,y) = [a = a(x)] [b = b(y)].
inline Behavior deterministic_behavior(const Scenario& sc, const DeterministicBellStrategy& s) {
  Behavior beh(sc.d, sc.mA, sc.mB);
  for (int x = 0; x < sc.mA; ++x)
    for (int y = 0; y < sc.mB; ++y) beh.at(s.a[x], s.b[y], x, y) = 1.0;
  return beh;
}

struct BellBound {
  double value;
  DeterministicBellStrategy argmax;
};

// Local bound B by enumerating all d^(mA+mB) deterministic strategies.
// Ties resolve to the lexicographically smallest (a, b).
inline BellBound bell_bound(const BellFunctional& f, const EnumerationOptions& opts = {}) {
  require_valid(f);
  const int d = f.d(), mA = f.mA(), mB = f.mB();
  const double count = detail::power_count(d, mA + mB);
  if (count > opts.cap)
    throw InfeasibleError("bell_bound: " + std::to_string(count) +
                          " strategies exceed the enumeration cap");
  const auto w = detail::residue_payoffs(f);
  const auto score = [&](std::uint64_t n) {
    std::vector<int> digits(mA + mB);
    detail::decode_digits(n, d, digits);
    double v = 0.0;
    for (int x = 0; x < mA; ++x)
      for (int y = 0; y < mB; ++y)
        v += w[(static_cast<size_t>(x) * mB + y) * d + mod(digits[x] + digits[mA + y], d)];
    return v;
  };
  const ArgMax best = parallel_argmax(static_cast<std::uint64_t>(count), opts.threads, score);
  std::vector<int> digits(mA + mB);
  detail::decode_digits(best.index, d, digits);
  DeterministicBellStrategy s{{digits.begin(), digits.begin() + mA},
                              {digits.begin() + mA, digits.end()}};
  return {best.value, std::move(s)};
}

// Payoff of the linear protocol m = x0 + a(x), G = m + b(y).
inline double ccp_value_linear(const CcpGame& game, const DeterministicBellStrategy& s) {
  const int d = game.d;
  if (s.a.size() != static_cast<size_t>(game.mA()) || s.b.size() != static_cast<size_t>(game.mB()))
    throw InputError("strategy size does not match the game");
  double value = 0.0;
  for (int x0 = 0; x0 < d; ++x0)
    for (int x = 0; x < game.mA(); ++x)
      for (int y = 0; y < game.mB(); ++y) {
        const int message = mod(x0 + s.a[x], d);
        const int guess = mod(message + s.b[y], d);
        for (const Term& t : game.terms(x, y))
          if (guess == game.target(t, x0)) value += game.x0_prior[x0] * game.p(x, y) * t.c;
      }
  return value;
}

// Average payoff for an explicit encoder/decoder pair.
inline double ccp_value(const CcpGame& game, const MessagingStrategy& m, const GuessStrategy& g) {
  double value = 0.0;
  for (int x0 = 0; x0 < game.d; ++x0)
    for (int x = 0; x < game.mA(); ++x)
      for (int y = 0; y < game.mB(); ++y) {
        const int guess = g(y, m(x0, x));
        for (const Term& t : game.terms(x, y))
          if (guess == game.target(t, x0)) value += game.x0_prior[x0] * game.p(x, y) * t.c;
      }
  return value;
}

struct BestResponse {
  GuessStrategy guess;
  double value;
};

namespace detail {

// Bob's optimal decoder for a fixed encoder, given precomputed residue
// payoffs: for every (y, message) take the guess with the largest
// posterior-weighted payoff, smallest guess on ties.
inline double best_response_value(const CcpGame& game, const std::vector<double>& w,
                                  const MessagingStrategy& m, GuessStrategy* out) {
  const int d = game.d, mA = game.mA(), mB = game.mB();
  double value = 0.0;
  std::vector<double> score(d);
  for (int y = 0; y < mB; ++y)
    for (int msg = 0; msg < d; ++msg) {
      std::fill(score.begin(), score.end(), 0.0);
      for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < mA; ++x) {
          if (m(x0, x) != msg) continue;
          const double* row = &w[(static_cast<size_t>(x) * mB + y) * d];
          for (int g = 0; g < d; ++g) score[g] += game.x0_prior[x0] * row[mod(g - x0, d)];
        }
      int best = 0;
      for (int g = 1; g < d; ++g)
        if (score[g] > score[best]) best = g;
      if (out) out->at(y, msg) = best;
      value += score[best];
    }
  return value;
}

}  // namespace detail

inline BestResponse bob_best_response(const CcpGame& game, const MessagingStrategy& m) {
  if (m.d != game.d || m.mA != game.mA() || m.m.size() != static_cast<size_t>(game.d) * game.mA())
    throw InputError("messaging strategy size does not match the game");
  const auto w = detail::residue_payoffs(game.functional);
  GuessStrategy g(game.d, game.mB());
  const double v = detail::best_response_value(game, w, m, &g);
  return {std::move(g), v};
}

struct CcpBound {
  double value;
  MessagingStrategy argmax;
};

// Best classical payoff over every messaging function m(x0, x), each paired
// with Bob's optimal (unrestricted) decoder.
inline CcpBound ccp_bound_general(const CcpGame& game,
                                  const EnumerationOptions& opts = {kDefaultCcpCap, 1}) {
  const int d = game.d, mA = game.mA();
  const double count = detail::power_count(d, d * mA);
  if (count > opts.cap)
    throw InfeasibleError("ccp_bound_general: " + std::to_string(count) +
                          " messaging functions exceed the enumeration cap");
  const auto w = detail::residue_payoffs(game.functional);
  const auto decode = [&](std::uint64_t n) {
    MessagingStrategy m(d, mA);
    detail::decode_digits(n, d, m.m);
    return m;
  };
  const ArgMax best = parallel_argmax(static_cast<std::uint64_t>(count), opts.threads,
                                      [&](std::uint64_t n) {
                                        return detail::best_response_value(game, w, decode(n), nullptr);
                                      });
  return {best.value, decode(best.index)};
}

struct AdditiveCcpBound {
  double value;
  MessagingStrategy messaging;
  std::vector<int> b;
};

// Best payoff when Bob is restricted to the additive decoder G = m + b(y)
// while the messaging m(x0, x) stays arbitrary. For fixed b the payoff
// separates over (x0, x), so each message is chosen independently.
inline AdditiveCcpBound ccp_bound_additive(const CcpGame& game,
                                           const EnumerationOptions& opts = {kDefaultCcpCap, 1}) {
  const int d = game.d, mA = game.mA(), mB = game.mB();
  const double count = detail::power_count(d, mB);
  if (count > opts.cap)
    throw InfeasibleError("ccp_bound_additive: " + std::to_string(count) +
                          " decoders exceed the enumeration cap");
  const auto w = detail::residue_payoffs(game.functional);
  const auto best_messages = [&](const std::vector<int>& b, MessagingStrategy* out) {
    double value = 0.0;
    for (int x0 = 0; x0 < d; ++x0)
      for (int x = 0; x < mA; ++x) {
        double top = -std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int msg = 0; msg < d; ++msg) {
          double s = 0.0;
          for (int y = 0; y < mB; ++y)
            s += w[(static_cast<size_t>(x) * mB + y) * d + mod(msg + b[y] - x0, d)];
          if (s > top) top = s, arg = msg;
        }
        if (out) out->at(x0, x) = arg;
        value += game.x0_prior[x0] * top;
      }
    return value;
  };
  const ArgMax best = parallel_argmax(static_cast<std::uint64_t>(count), opts.threads,
                                      [&](std::uint64_t n) {
                                        std::vector<int> b(mB);
                                        detail::decode_digits(n, d, b);
                                        return best_messages(b, nullptr);
                                      });
  AdditiveCcpBound out{best.value, MessagingStrategy(d, mA), std::vector<int>(mB)};
  detail::decode_digits(best.index, d, out.b);
  best_messages(out.b, &out.messaging);
  return out;
}

// Contribution of Alice's input x to the payoff when Bob decodes with the
// fixed additive rule G = m + b(y).
inline double per_setting_payoff(const CcpGame& game, const MessagingStrategy& m,
                                 const std::vector<int>& b, int x) {
  double value = 0.0;
  for (int x0 = 0; x0 < game.d; ++x0)
    for (int y = 0; y < game.mB(); ++y) {
      const int guess = mod(m(x0, x) + b[y], game.d);
      for (const Term& t : game.terms(x, y))
        if (guess == game.target(t, x0)) value += game.x0_prior[x0] * game.p(x, y) * t.c;
    }
  return value;
}

// The exponent function x0 -> m(x0, x) of a messaging strategy at fixed x.
inline OmegaFunction message_exponents(const MessagingStrategy& m, int x) {
  OmegaFunction bf{m.d, std::vector<int>(m.d)};
  for (int x0 = 0; x0 < m.d; ++x0) bf.n[x0] = m(x0, x);
  return bf;
}

}  // namespace bellcc
