#pragma once

// Bell functionals whose coefficients depend on the outcomes only through
// a + b mod d, together with behaviors P(a,b|x,y) and their correlators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bellcc/errors.hpp"
#include "bellcc/modular.hpp"

namespace bellcc {

inline constexpr double kProbabilitySumTol = 1e-12;
inline constexpr double kBehaviorTol = 1e-10;
inline constexpr double kImaginaryResidualTol = 1e-10;

// Outcome count d and setting counts, with the joint input distribution
// p(x,y) stored row-major (mA x mB).
struct Scenario {
  int d = 2;
  int mA = 1;
  int mB = 1;
  std::vector<double> p;

  double prob(int x, int y) const { return p[static_cast<size_t>(x) * mB + y]; }
  int settings() const { return mA * mB; }

  static Scenario uniform(int d, int mA, int mB) {
    return {d, mA, mB, std::vector<double>(static_cast<size_t>(mA) * mB, 1.0 / (mA * mB))};
  }

  bool operator==(const Scenario&) const = default;
};

// One coefficient c^{i,k}_{xy} attached to the event a + b = F^i_{xy}(k).
// Block index i is 1-based, k is 0-based.
struct Term {
  int x = 0;
  int y = 0;
  int i = 1;
  int k = 0;
  int F = 0;
  double c = 0.0;

  bool operator==(const Term&) const = default;
};

struct BellFunctional {
  Scenario scenario;
  std::vector<Term> terms;
  int N = 1;  // number of i-blocks
  int K = 0;  // largest k index

  int d() const { return scenario.d; }
  int mA() const { return scenario.mA; }
  int mB() const { return scenario.mB; }

  bool operator==(const BellFunctional&) const = default;
};

// Builds a functional, deriving N and K from the largest indices used.
inline BellFunctional make_functional(Scenario scenario, std::vector<Term> terms) {
  int N = 1, K = 0;
  for (const Term& t : terms) {
    N = std::max(N, t.i);
    K = std::max(K, t.k);
  }
  return {std::move(scenario), std::move(terms), N, K};
}

// ---------------------------------------------------------------------------
// Validation

enum class Rule {
  kScenarioSize,
  kPShape,
  kNegativeP,
  kUnnormalizedP,
  kBlockBound,  // (K+1) N <= d
  kIndexRange,
  kFRange,
  kDuplicateTerm,
  kCollisionAcrossBlocks,
  kCollisionWithinBlock,
};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::kScenarioSize: return "scenario size";
    case Rule::kPShape: return "p shape";
    case Rule::kNegativeP: return "negative p";
    case Rule::kUnnormalizedP: return "unnormalized p";
    case Rule::kBlockBound: return "(K+1)N <= d";
    case Rule::kIndexRange: return "index out of range";
    case Rule::kFRange: return "F out of range";
    case Rule::kDuplicateTerm: return "duplicate term";
    case Rule::kCollisionAcrossBlocks: return "F collision across blocks";
    case Rule::kCollisionWithinBlock: return "F collision within block";
  }
  return "unknown";
}

// A single broken invariant. Tuple fields are -1 when not applicable.
struct Violation {
  Rule rule;
  int x = -1, y = -1, i = -1, k = -1;
  std::string detail;

  std::string to_string() const {
    std::ostringstream os;
    os << rule_name(rule);
    if (x >= 0 || y >= 0 || i >= 0 || k >= 0)
      os << " at (x=" << x << ", y=" << y << ", i=" << i << ", k=" << k << ")";
    if (!detail.empty()) os << ": " << detail;
    return os.str();
  }
};

using ValidationReport = std::vector<Violation>;

inline ValidationReport validate(const BellFunctional& f) {
  ValidationReport out;
  const Scenario& s = f.scenario;
  if (s.d < 2 || s.mA < 1 || s.mB < 1) {
    out.push_back({Rule::kScenarioSize, -1, -1, -1, -1,
                   "need d >= 2, mA >= 1, mB >= 1"});
    return out;
  }
  if (s.p.size() != static_cast<size_t>(s.mA) * s.mB) {
    out.push_back({Rule::kPShape, -1, -1, -1, -1,
                   "p has " + std::to_string(s.p.size()) + " entries"});
    return out;
  }
  double total = 0.0;
  for (int x = 0; x < s.mA; ++x) {
    for (int y = 0; y < s.mB; ++y) {
      const double v = s.prob(x, y);
      if (!(v >= 0.0))
        out.push_back({Rule::kNegativeP, x, y, -1, -1, "p = " + std::to_string(v)});
      total += v;
    }
  }
  if (!(std::abs(total - 1.0) <= kProbabilitySumTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "sum of p is " << total;
    out.push_back({Rule::kUnnormalizedP, -1, -1, -1, -1, os.str()});
  }
  if (f.N < 1 || f.K < 0 || (f.K + 1) * f.N > s.d) {
    out.push_back({Rule::kBlockBound, -1, -1, -1, -1,
                   "(K+1)N = " + std::to_string((f.K + 1) * f.N) +
                       " with d = " + std::to_string(s.d)});
  }

  // First occurrence of each (x,y,i,k) and its F value.
  std::map<std::tuple<int, int, int, int>, int> seen;
  for (const Term& t : f.terms) {
    bool in_range = true;
    if (t.x < 0 || t.x >= s.mA || t.y < 0 || t.y >= s.mB || t.i < 1 || t.i > f.N ||
        t.k < 0 || t.k > f.K) {
      out.push_back({Rule::kIndexRange, t.x, t.y, t.i, t.k, ""});
      in_range = false;
    }
    if (t.F < 0 || t.F >= s.d) {
      out.push_back({Rule::kFRange, t.x, t.y, t.i, t.k, "F = " + std::to_string(t.F)});
      in_range = false;
    }
    if (!in_range) continue;
    auto key = std::make_tuple(t.x, t.y, t.i, t.k);
    if (seen.count(key)) {
      out.push_back({Rule::kDuplicateTerm, t.x, t.y, t.i, t.k, ""});
      continue;
    }
    seen.emplace(key, t.F);
  }

  // Distinct (i,k) at the same setting pair must name distinct residues.
  std::map<std::tuple<int, int, int>, std::pair<int, int>> owner;  // (x,y,F) -> (i,k)
  for (const auto& [key, F] : seen) {
    const auto [x, y, i, k] = key;
    auto [it, inserted] = owner.emplace(std::make_tuple(x, y, F), std::make_pair(i, k));
    if (inserted) continue;
    const auto [oi, ok] = it->second;
    const Rule rule = (oi != i) ? Rule::kCollisionAcrossBlocks : Rule::kCollisionWithinBlock;
    out.push_back({rule, x, y, i, k,
                   "F = " + std::to_string(F) + " also used by (i=" + std::to_string(oi) +
                       ", k=" + std::to_string(ok) + ")"});
  }
  return out;
}

inline bool is_valid(const BellFunctional& f) { return validate(f).empty(); }

inline void require_valid(const BellFunctional& f) {
  auto report = validate(f);
  if (!report.empty()) throw InputError("invalid Bell functional: " + report.front().to_string());
}

// ---------------------------------------------------------------------------
// Behaviors

// Conditional distribution P(a,b|x,y), stored with b fastest, then a, then
// the setting pair (x*mB + y).
struct Behavior {
  int d = 2;
  int mA = 1;
  int mB = 1;
  std::vector<double> P;

  Behavior() = default;
  Behavior(int d_, int mA_, int mB_)
      : d(d_), mA(mA_), mB(mB_), P(static_cast<size_t>(d_) * d_ * mA_ * mB_, 0.0) {}

  size_t index(int a, int b, int x, int y) const {
    return ((static_cast<size_t>(x) * mB + y) * d + a) * d + b;
  }
  double operator()(int a, int b, int x, int y) const { return P[index(a, b, x, y)]; }
  double& at(int a, int b, int x, int y) { return P[index(a, b, x, y)]; }

  // P(a + b = z mod d | x, y)
  double sum_prob(int z, int x, int y) const {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += (*this)(a, mod(z - a, d), x, y);
    return s;
  }

  bool matches(const Scenario& sc) const { return d == sc.d && mA == sc.mA && mB == sc.mB; }
};

inline bool is_valid_behavior(const Behavior& beh, double tol = kBehaviorTol) {
  if (beh.P.size() != static_cast<size_t>(beh.d) * beh.d * beh.mA * beh.mB) return false;
  for (int x = 0; x < beh.mA; ++x)
    for (int y = 0; y < beh.mB; ++y) {
      double s = 0.0;
      for (int a = 0; a < beh.d; ++a)
        for (int b = 0; b < beh.d; ++b) {
          const double v = beh(a, b, x, y);
          if (!(v >= -tol)) return false;
          s += v;
        }
      if (std::abs(s - 1.0) > tol) return false;
    }
  return true;
}

// Equal-weight mixture of two behaviors on the same scenario.
inline Behavior midpoint(const Behavior& u, const Behavior& v) {
  Behavior out = u;
  for (size_t n = 0; n < out.P.size(); ++n) out.P[n] = 0.5 * (u.P[n] + v.P[n]);
  return out;
}

inline void require_compatible(const BellFunctional& f, const Behavior& beh) {
  if (!beh.matches(f.scenario) ||
      beh.P.size() != static_cast<size_t>(beh.d) * beh.d * beh.mA * beh.mB)
    throw InputError("behavior dimensions do not match the functional's scenario");
}

// I^bell = sum_{x,y} p(x,y) sum_{i,k} c P(a + b = F | x, y)
inline double evaluate_bell(const BellFunctional& f, const Behavior& beh) {
  require_compatible(f, beh);
  double value = 0.0;
  for (const Term& t : f.terms)
    value += f.scenario.prob(t.x, t.y) * t.c * beh.sum_prob(t.F, t.x, t.y);
  return value;
}

// ---------------------------------------------------------------------------
// Correlators E(l|x,y) = sum_z omega^{l z} P(a + b = z | x, y)

struct CorrelatorTable {
  int d = 2;
  int mA = 1;
  int mB = 1;
  std::vector<Complex> E;  // index (x*mB + y)*d + l

  Complex operator()(int l, int x, int y) const {
    return E[(static_cast<size_t>(x) * mB + y) * d + l];
  }
};

inline CorrelatorTable correlators(const Behavior& beh) {
  CorrelatorTable out{beh.d, beh.mA, beh.mB,
                      std::vector<Complex>(static_cast<size_t>(beh.d) * beh.mA * beh.mB)};
  for (int x = 0; x < beh.mA; ++x)
    for (int y = 0; y < beh.mB; ++y) {
      std::vector<double> q(beh.d);
      for (int z = 0; z < beh.d; ++z) q[z] = beh.sum_prob(z, x, y);
      for (int l = 0; l < beh.d; ++l) {
        Complex s = 0.0;
        for (int z = 0; z < beh.d; ++z) s += omega_pow(beh.d, static_cast<long long>(l) * z) * q[z];
        out.E[(static_cast<size_t>(x) * beh.mB + y) * beh.d + l] = s;
      }
    }
  return out;
}

// Inverse transform: P(a + b = z | x, y), index (x*mB + y)*d + z.
inline std::vector<double> sum_distribution(const CorrelatorTable& E) {
  std::vector<double> out(static_cast<size_t>(E.d) * E.mA * E.mB);
  for (int x = 0; x < E.mA; ++x)
    for (int y = 0; y < E.mB; ++y)
      for (int z = 0; z < E.d; ++z) {
        Complex s = 0.0;
        for (int l = 0; l < E.d; ++l) s += omega_pow(E.d, -static_cast<long long>(l) * z) * E(l, x, y);
        out[(static_cast<size_t>(x) * E.mB + y) * E.d + z] = s.real() / E.d;
      }
  return out;
}

// Bell value from correlators. Throws InputError when the imaginary part
// of the sum exceeds the residual threshold.
inline double evaluate_bell_correlator(const BellFunctional& f, const CorrelatorTable& E) {
  const int d = f.d();
  if (E.d != d || E.mA != f.mA() || E.mB != f.mB() ||
      E.E.size() != static_cast<size_t>(d) * E.mA * E.mB)
    throw InputError("correlator table dimensions do not match the functional's scenario");
  Complex value = 0.0;
  for (const Term& t : f.terms) {
    Complex s = 0.0;
    for (int l = 0; l < d; ++l) s += omega_pow(d, -static_cast<long long>(l) * t.F) * E(l, t.x, t.y);
    value += f.scenario.prob(t.x, t.y) / d * t.c * s;
  }
  if (std::abs(value.imag()) >= kImaginaryResidualTol)
    throw InputError("correlator table has an imaginary residual of " +
                     std::to_string(value.imag()));
  return value.real();
}

}  // namespace bellcc
