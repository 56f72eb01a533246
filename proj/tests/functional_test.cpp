#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include "bellcc/catalog.hpp"
#include "bellcc/functional.hpp"
#include "bellcc/io.hpp"

using namespace bellcc;

namespace {

Behavior uniform_behavior(int d, int mA, int mB) {
  Behavior beh(d, mA, mB);
  for (double& v : beh.P) v = 1.0 / (d * d);
  return beh;
}

Behavior pr_box() {
  Behavior beh(2, 2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a) beh.at(a, (x * y + a) % 2, x, y) = 0.5;
  return beh;
}

bool has_rule(const ValidationReport& r, Rule rule) {
  for (const auto& v : r)
    if (v.rule == rule) return true;
  return false;
}

}  // namespace

TEST(Validate, CatalogInstancesAreValid) {
  EXPECT_TRUE(validate(chsh()).empty());
  for (int d = 2; d <= 8; ++d) EXPECT_TRUE(validate(cglmp(d)).empty()) << d;
}

TEST(Validate, DuplicateTerm) {
  BellFunctional f = chsh();
  f.terms.push_back(f.terms.front());
  const auto r = validate(f);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].rule, Rule::kDuplicateTerm);
  EXPECT_EQ(r[0].x, 0);
  EXPECT_EQ(r[0].y, 0);
}

TEST(Validate, BlockBound) {
  Scenario sc{3, 1, 1, {1.0}};
  const auto f = make_functional(sc, {{0, 0, 1, 0, 0, 1.0}, {0, 0, 2, 1, 1, 1.0}});
  EXPECT_EQ(f.N, 2);
  EXPECT_EQ(f.K, 1);
  const auto r = validate(f);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_STREQ(rule_name(r[0].rule), "(K+1)N <= d");
}

TEST(Validate, EachMutationClassNamesItsRule) {
  {
    BellFunctional f = cglmp(3);
    for (Term& t : f.terms)
      if (t.x == 1 && t.y == 1 && t.i == 2) t.F = 0;
    EXPECT_TRUE(has_rule(validate(f), Rule::kCollisionAcrossBlocks));
  }
  {
    BellFunctional f = chsh();
    f.scenario.p = {0.5, -0.25, 0.5, 0.25};
    const auto r = validate(f);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].rule, Rule::kNegativeP);
  }
  {
    BellFunctional f = chsh();
    f.scenario.p = {0.3, 0.3, 0.3, 0.3};
    const auto r = validate(f);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].rule, Rule::kUnnormalizedP);
  }
  {
    BellFunctional f = chsh();
    f.terms[1].F = 2;
    EXPECT_TRUE(has_rule(validate(f), Rule::kFRange));
  }
  {
    BellFunctional f = chsh();
    f.terms[1].y = 5;
    EXPECT_TRUE(has_rule(validate(f), Rule::kIndexRange));
  }
  {
    BellFunctional f = chsh();
    f.scenario.p = {0.5, 0.5};
    EXPECT_TRUE(has_rule(validate(f), Rule::kPShape));
  }
  {
    Scenario sc{4, 1, 1, {1.0}};
    const auto f = make_functional(sc, {{0, 0, 1, 0, 1, 1.0}, {0, 0, 1, 1, 1, 1.0}});
    EXPECT_TRUE(has_rule(validate(f), Rule::kCollisionWithinBlock));
  }
  {
    BellFunctional f = chsh();
    f.scenario.d = 1;
    EXPECT_TRUE(has_rule(validate(f), Rule::kScenarioSize));
  }
}

TEST(Validate, MutationCorpus) {
  std::ifstream manifest(std::string(BELLCC_TEST_DATA) + "/mutations/manifest.txt");
  ASSERT_TRUE(manifest);
  std::string line;
  int checked = 0;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string file = line.substr(0, tab), rule = line.substr(tab + 1);
    const auto f = load_functional(std::string(BELLCC_TEST_DATA) + "/mutations/" + file);
    const auto r = validate(f);
    ASSERT_FALSE(r.empty()) << file;
    bool named = false;
    for (const auto& v : r) named |= rule_name(v.rule) == rule;
    EXPECT_TRUE(named) << file << " expected " << rule << ", got " << r[0].to_string();
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(Validate, ZeroProbabilityPairsAllowed) {
  BellFunctional f = chsh();
  f.scenario.p = {0.5, 0.0, 0.0, 0.5};
  EXPECT_TRUE(validate(f).empty());
}

TEST(Validate, RequireValidThrows) {
  BellFunctional f = chsh();
  f.terms.push_back(f.terms.back());
  EXPECT_THROW(require_valid(f), InputError);
}

TEST(EvaluateBell, ChshExamples) {
  const auto f = chsh();
  EXPECT_NEAR(evaluate_bell(f, uniform_behavior(2, 2, 2)), 0.5, 1e-15);
  Behavior det(2, 2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) det.at(0, 0, x, y) = 1.0;
  EXPECT_NEAR(evaluate_bell(f, det), 0.75, 1e-15);
  EXPECT_NEAR(evaluate_bell(f, pr_box()), 1.0, 1e-15);
}

TEST(EvaluateBell, DimensionMismatchThrows) {
  EXPECT_THROW(evaluate_bell(chsh(), uniform_behavior(3, 2, 2)), InputError);
  EXPECT_THROW(evaluate_bell(chsh(), uniform_behavior(2, 1, 2)), InputError);
}

TEST(EvaluateBell, AgreesWithDirectSumOverOutcomes) {
  // Oracle: sum over (a, b) of P times coefficient of the matching term.
  for (int s = 0; s < 20; ++s) {
    const auto f = random_functional(s, 3, 2, 3, 1, 1);
    const auto beh = random_behavior(100 + s, 3, 2, 3);
    double oracle = 0.0;
    for (const Term& t : f.terms)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if ((a + b) % 3 == t.F) oracle += f.scenario.prob(t.x, t.y) * t.c * beh(a, b, t.x, t.y);
    EXPECT_NEAR(evaluate_bell(f, beh), oracle, 1e-13);
  }
}

TEST(Correlators, Examples) {
  const auto E = correlators(uniform_behavior(3, 2, 2));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      EXPECT_NEAR(std::abs(E(0, x, y) - Complex(1.0)), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(E(1, x, y)), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(E(2, x, y)), 0.0, 1e-15);
    }

  Behavior one(3, 1, 1);
  one.at(0, 1, 0, 0) = 0.5;
  one.at(2, 2, 0, 0) = 0.5;
  const auto E1 = correlators(one);
  for (int l = 0; l < 3; ++l) {
    const Complex w = std::polar(1.0, 2 * M_PI * l / 3);
    EXPECT_NEAR(std::abs(E1(l, 0, 0) - w), 0.0, 1e-14);
  }

  EXPECT_NEAR(std::abs(correlators(pr_box())(1, 1, 1) - Complex(-1.0)), 0.0, 1e-15);
}

TEST(Correlators, EvaluateCorrelatorExamples) {
  EXPECT_NEAR(evaluate_bell_correlator(chsh(), correlators(uniform_behavior(2, 2, 2))), 0.5, 1e-14);
  EXPECT_NEAR(evaluate_bell_correlator(chsh(), correlators(pr_box())), 1.0, 1e-14);
  const auto f = cglmp(3);
  for (int s = 0; s < 10; ++s) {
    const auto beh = random_behavior(s, 3, 2, 2);
    EXPECT_NEAR(evaluate_bell_correlator(f, correlators(beh)), evaluate_bell(f, beh), 1e-12);
  }
}

TEST(Correlators, CorruptedTableRejected) {
  auto E = correlators(uniform_behavior(2, 2, 2));
  E.E[1] = Complex(0.0, 0.5);
  EXPECT_THROW(evaluate_bell_correlator(chsh(), E), InputError);
}

TEST(Correlators, FourierConsistencyProperty) {
  for (int d = 2; d <= 5; ++d) {
    const int N = d >= 4 ? 2 : 1, K = d / N - 1;
    for (int s = 0; s < 200; ++s) {
      const auto f = random_functional(1000 * d + s, d, 2, 2, N, K);
      const auto beh = random_behavior(5000 * d + s, d, 2, 2);
      const auto E = correlators(beh);
      ASSERT_NEAR(evaluate_bell(f, beh), evaluate_bell_correlator(f, E), 1e-12) << d << " " << s;
      // Unit E(0), bounded modulus, and the inverse transform.
      const auto back = sum_distribution(E);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          ASSERT_NEAR(std::abs(E(0, x, y) - Complex(1.0)), 0.0, 1e-12);
          for (int l = 0; l < d; ++l) ASSERT_LE(std::abs(E(l, x, y)), 1.0 + 1e-12);
          for (int z = 0; z < d; ++z)
            ASSERT_NEAR(back[(x * 2 + y) * d + z], beh.sum_prob(z, x, y), 1e-12);
        }
    }
  }
}

TEST(Behavior, MidpointAndValidity) {
  const auto u = random_behavior(1, 3, 2, 2), v = random_behavior(2, 3, 2, 2);
  EXPECT_TRUE(is_valid_behavior(u));
  const auto m = midpoint(u, v);
  EXPECT_TRUE(is_valid_behavior(m));
  const auto f = cglmp(3);
  EXPECT_NEAR(evaluate_bell(f, m), 0.5 * (evaluate_bell(f, u) + evaluate_bell(f, v)), 1e-14);
  Behavior bad = u;
  bad.P[0] += 0.1;
  EXPECT_FALSE(is_valid_behavior(bad));
}
