#pragma once

// Built-in functionals (CHSH, CGLMP), their textbook quantum strategies,
// and seeded random instances for property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bellcc/errors.hpp"
#include "bellcc/functional.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/quantum.hpp"
#include "bellcc/random.hpp"

namespace bellcc {

// d = 2, two settings each, p = 1/4, one term per setting pair with
// F_xy = x y and c = 1: the CHSH winning probability.
inline BellFunctional chsh() {
  std::vector<Term> terms;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) terms.push_back({x, y, 1, 0, x * y, 1.0});
  return make_functional(Scenario::uniform(2, 2, 2), std::move(terms));
}

// CGLMP functional in a + b form, normalised by p = 1/4 (one quarter of the
// textbook I_d). Setting x = 0, 1 stands for A1, A2 and y = 0, 1 for B1, B2.
// Bob's outcomes are relabelled b -> -b mod d, which turns each textbook
// event A - B = v into a + b = v. Block i = 1 holds the rewarded events,
// block i = 2 the penalised ones, both weighted by 1 - 2k/(d-1).
inline BellFunctional cglmp(int d) {
  if (d < 2) throw InputError("cglmp: need d >= 2");
  const int K = d / 2 - 1;
  std::vector<Term> terms;
  for (int k = 0; k <= K; ++k) {
    const double c = d == 2 ? 1.0 : 1.0 - 2.0 * k / (d - 1);
    // (x, y, rewarded a+b, penalised a+b)
    const int table[4][4] = {
        {0, 0, k, -(k + 1)},   // A1 - B1 = k       | A1 - B1 = -(k+1)
        {1, 0, -(k + 1), k},   // B1 - A2 = k + 1   | B1 - A2 = -k
        {1, 1, k, -(k + 1)},   // A2 - B2 = k       | A2 - B2 = -(k+1)
        {0, 1, -k, k + 1},     // B2 - A1 = k       | B2 - A1 = -(k+1)
    };
    for (const auto& row : table) {
      terms.push_back({row[0], row[1], 1, k, mod(row[2], d), c});
      terms.push_back({row[0], row[1], 2, k, mod(row[3], d), -c});
    }
  }
  std::sort(terms.begin(), terms.end(), [](const Term& u, const Term& v) {
    return std::tie(u.x, u.y, u.i, u.k) < std::tie(v.x, v.y, v.i, v.k);
  });
  return make_functional(Scenario::uniform(d, 2, 2), std::move(terms));
}

struct CatalogEntry {
  std::string name;
  std::string description;
};

inline std::vector<CatalogEntry> catalog_entries() {
  std::vector<CatalogEntry> out{{"chsh", "CHSH winning probability, d = 2"}};
  for (int d = 2; d <= 8; ++d)
    out.push_back({"cglmp" + std::to_string(d),
                   "CGLMP, d = " + std::to_string(d) +
                       ", normalised by p = 1/4, Bob's outcomes relabelled b -> -b mod d"});
  return out;
}

inline std::optional<BellFunctional> catalog_lookup(const std::string& name) {
  if (name == "chsh") return chsh();
  if (name.rfind("cglmp", 0) == 0 && name.size() > 5) {
    const std::string digits = name.substr(5);
    if (!std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 2) return std::nullopt;
    const int d = std::stoi(digits);
    if (d >= 2) return cglmp(d);
  }
  return std::nullopt;
}

// Valid functional with every (i,k) present at each setting pair: the
// residues F are the first (K+1)N entries of a random permutation of Z_d,
// coefficients are uniform in [c_lo, c_hi) and p(x,y) is a random
// normalised table.
inline BellFunctional random_functional(std::uint64_t seed, int d, int mA, int mB, int N, int K,
                                        double c_lo = -1.0, double c_hi = 1.0) {
  if (d < 2 || mA < 1 || mB < 1 || N < 1 || K < 0 || (K + 1) * N > d)
    throw InfeasibleError("random_functional: need (K+1)N <= d and positive sizes");
  Rng rng = make_rng(seed, "random_functional");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Scenario sc{d, mA, mB, std::vector<double>(static_cast<size_t>(mA) * mB)};
  double total = 0.0;
  for (double& v : sc.p) total += (v = 0.05 + unit(rng));
  for (double& v : sc.p) v /= total;
  // Fold the rounding residue into the last entry so the sum is 1 to
  // within one ulp.
  double partial = 0.0;
  for (size_t n = 0; n + 1 < sc.p.size(); ++n) partial += sc.p[n];
  sc.p.back() = 1.0 - partial;

  std::vector<Term> terms;
  std::vector<int> residues(d);
  for (int x = 0; x < mA; ++x)
    for (int y = 0; y < mB; ++y) {
      for (int r = 0; r < d; ++r) residues[r] = r;
      for (int r = d - 1; r > 0; --r) {
        std::uniform_int_distribution<int> pick(0, r);
        std::swap(residues[r], residues[pick(rng)]);
      }
      int next = 0;
      for (int i = 1; i <= N; ++i)
        for (int k = 0; k <= K; ++k)
          terms.push_back({x, y, i, k, residues[next++], c_lo + (c_hi - c_lo) * unit(rng)});
    }
  BellFunctional f{std::move(sc), std::move(terms), N, K};
  return f;
}

// Random behavior: each P(.,.|x,y) drawn from a flat Dirichlet.
inline Behavior random_behavior(std::uint64_t seed, int d, int mA, int mB) {
  Rng rng = make_rng(seed, "random_behavior");
  std::exponential_distribution<double> expo(1.0);
  Behavior beh(d, mA, mB);
  for (int x = 0; x < mA; ++x)
    for (int y = 0; y < mB; ++y) {
      double total = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) total += (beh.at(a, b, x, y) = expo(rng));
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) beh.at(a, b, x, y) /= total;
    }
  return beh;
}

struct QuantumStrategy {
  DensityMatrix rho;
  MeasurementSet A;
  MeasurementSet B;
};

// |Phi+> with Alice measuring sigma_z, sigma_x and Bob measuring along
// (sigma_z +- sigma_x)/sqrt2; reaches (2 + sqrt2)/4 on chsh().
inline QuantumStrategy chsh_standard_strategy() {
  const auto basis = [](double theta) {
    // Eigenbasis of cos(theta) sigma_z + sin(theta) sigma_x, +1 eigenvector first.
    Matrix m(2, 2);
    m << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
    return m;
  };
  const double pi = std::numbers::pi;
  QuantumStrategy s{DensityMatrix::maximally_entangled(2), {}, {}};
  s.A = {Povm::from_basis(basis(0.0), 2), Povm::from_basis(basis(pi / 2), 2)};
  s.B = {Povm::from_basis(basis(pi / 4), 2), Povm::from_basis(basis(-pi / 4), 2)};
  return s;
}

// Maximally entangled state with the textbook CGLMP measurements
//   |k>_{A,x} = d^{-1/2} sum_j exp(2 pi i j (k + alpha_x) / d) |j>,  alpha = (0, 1/2)
//   |b>_{B,y} = d^{-1/2} sum_j exp(2 pi i j (b + beta_y) / d) |j>,  beta = (1/4, -1/4)
// Bob's vectors are the textbook ones after the relabelling b = -l, written
// for the state sum_j |j>|j>. Reaches 0.718234... on cglmp(3).
inline QuantumStrategy cglmp_standard_strategy(int d) {
  if (d < 2) throw InputError("cglmp_standard_strategy: need d >= 2");
  const double pi = std::numbers::pi;
  const double alpha[2] = {0.0, 0.5}, beta[2] = {0.25, -0.25};
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  QuantumStrategy s{DensityMatrix::maximally_entangled(d), {}, {}};
  for (int x = 0; x < 2; ++x) {
    Matrix basis(d, d);
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) basis(j, k) = norm * std::polar(1.0, 2 * pi * j * (k + alpha[x]) / d);
    s.A.push_back(Povm::from_basis(basis, d));
  }
  for (int y = 0; y < 2; ++y) {
    Matrix basis(d, d);
    for (int b = 0; b < d; ++b)
      for (int j = 0; j < d; ++j) basis(j, b) = norm * std::polar(1.0, 2 * pi * j * (b + beta[y]) / d);
    s.B.push_back(Povm::from_basis(basis, d));
  }
  return s;
}

}  // namespace bellcc
