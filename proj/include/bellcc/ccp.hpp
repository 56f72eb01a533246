#pragma once

// The communication complexity game attached to a Bell functional: Alice
// holds (x0, x), Bob holds y, one dit travels from Alice to Bob, and a guess
// G earns c^{i,k}_{xy} whenever G = x0 + F^i_{xy}(k) mod d.

#include <vector>

#include "bellcc/errors.hpp"
#include "bellcc/functional.hpp"
#include "bellcc/modular.hpp"

namespace bellcc {

struct CcpGame {
  BellFunctional functional;
  int d = 2;
  std::vector<double> x0_prior;             // p(x0), uniform for built games
  std::vector<std::vector<Term>> by_setting;  // terms grouped by x*mB + y

  int mA() const { return functional.mA(); }
  int mB() const { return functional.mB(); }
  double p(int x, int y) const { return functional.scenario.prob(x, y); }
  const std::vector<Term>& terms(int x, int y) const {
    return by_setting[static_cast<size_t>(x) * mB() + y];
  }
  // f_{i,k}(x0, x, y) for a term of this game.
  int target(const Term& t, int x0) const { return mod(x0 + t.F, d); }
};

inline CcpGame build_game(const BellFunctional& f) {
  require_valid(f);
  CcpGame g;
  g.functional = f;
  g.d = f.d();
  g.x0_prior.assign(g.d, 1.0 / g.d);
  g.by_setting.resize(static_cast<size_t>(f.mA()) * f.mB());
  for (const Term& t : f.terms) g.by_setting[static_cast<size_t>(t.x) * f.mB() + t.y].push_back(t);
  return g;
}

// f_{i,k}(x0, x, y) = x0 + F^i_{xy}(k) mod d
inline int f_eval(const CcpGame& game, int i, int k, int x0, int x, int y) {
  if (x < 0 || x >= game.mA() || y < 0 || y >= game.mB() || x0 < 0 || x0 >= game.d)
    throw InputError("f_eval: input out of range");
  for (const Term& t : game.terms(x, y))
    if (t.i == i && t.k == k) return game.target(t, x0);
  throw InputError("f_eval: no term (i=" + std::to_string(i) + ", k=" + std::to_string(k) +
                   ") for (x=" + std::to_string(x) + ", y=" + std::to_string(y) + ")");
}

inline void require_compatible(const CcpGame& game, const Behavior& beh) {
  require_compatible(game.functional, beh);
}

// Entanglement-assisted payoff of the linear protocol: Alice sends
// x0 + a, Bob answers x0 + a + b.
inline double entangled_value(const CcpGame& game, const Behavior& beh) {
  require_compatible(game, beh);
  const int d = game.d;
  double value = 0.0;
  for (int x0 = 0; x0 < d; ++x0)
    for (int x = 0; x < game.mA(); ++x)
      for (int y = 0; y < game.mB(); ++y) {
        const double w = game.x0_prior[x0] * game.p(x, y);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const int guess = mod(x0 + a + b, d);
            for (const Term& t : game.terms(x, y))
              if (guess == game.target(t, x0)) value += w * beh(a, b, x, y) * t.c;
          }
      }
  return value;
}

// Deterministic post-processing of Alice's data into a message:
// m(x0, x, a), stored with a fastest, then x, then x0.
struct GeneralMessaging {
  int d = 2;
  int mA = 1;
  std::vector<int> m;

  GeneralMessaging() = default;
  GeneralMessaging(int d_, int mA_)
      : d(d_), mA(mA_), m(static_cast<size_t>(d_) * mA_ * d_, 0) {}

  size_t index(int x0, int x, int a) const {
    return (static_cast<size_t>(x0) * mA + x) * d + a;
  }
  int operator()(int x0, int x, int a) const { return m[index(x0, x, a)]; }
  int& at(int x0, int x, int a) { return m[index(x0, x, a)]; }

  // m = x0 + a
  static GeneralMessaging linear(int d, int mA) {
    GeneralMessaging g(d, mA);
    for (int x0 = 0; x0 < d; ++x0)
      for (int x = 0; x < mA; ++x)
        for (int a = 0; a < d; ++a) g.at(x0, x, a) = mod(x0 + a, d);
    return g;
  }
};

// Payoff when Alice sends m(x0, x, a) and Bob answers m + b.
inline double entangled_value_general(const CcpGame& game, const Behavior& beh,
                                      const GeneralMessaging& msg) {
  require_compatible(game, beh);
  const int d = game.d;
  if (msg.d != d || msg.mA != game.mA() || msg.m.size() != static_cast<size_t>(d) * d * msg.mA)
    throw InputError("messaging table dimensions do not match the game");
  double value = 0.0;
  for (int x0 = 0; x0 < d; ++x0)
    for (int x = 0; x < game.mA(); ++x)
      for (int y = 0; y < game.mB(); ++y) {
        const double w = game.x0_prior[x0] * game.p(x, y);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const int guess = mod(msg(x0, x, a) + b, d);
            for (const Term& t : game.terms(x, y))
              if (guess == game.target(t, x0)) value += w * beh(a, b, x, y) * t.c;
          }
      }
  return value;
}

}  // namespace bellcc
