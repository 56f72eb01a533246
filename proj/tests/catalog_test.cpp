#include <gtest/gtest.h>

#include "bellcc/catalog.hpp"
#include "bellcc/classical.hpp"

using namespace bellcc;

TEST(Catalog, ChshShape) {
  const auto f = chsh();
  EXPECT_EQ(f.d(), 2);
  EXPECT_EQ(f.N, 1);
  EXPECT_EQ(f.K, 0);
  ASSERT_EQ(f.terms.size(), 4u);
  for (const Term& t : f.terms) {
    EXPECT_EQ(t.F, t.x * t.y);
    EXPECT_EQ(t.c, 1.0);
    EXPECT_EQ(f.scenario.prob(t.x, t.y), 0.25);
  }
  EXPECT_DOUBLE_EQ(bell_bound(f).value, 0.75);
}

TEST(Catalog, CglmpShapeAndBlockBound) {
  for (int d = 2; d <= 10; ++d) {
    const auto f = cglmp(d);
    EXPECT_TRUE(validate(f).empty()) << d;
    EXPECT_EQ(f.N, 2);
    EXPECT_EQ(f.K, d / 2 - 1);
    EXPECT_LE((f.K + 1) * f.N, d);
    EXPECT_EQ(f.terms.size(), static_cast<size_t>(4 * 2 * (f.K + 1)));
    for (const Term& t : f.terms) {
      const double mag = d == 2 ? 1.0 : 1.0 - 2.0 * t.k / (d - 1);
      EXPECT_DOUBLE_EQ(t.c, t.i == 1 ? mag : -mag);
    }
  }
  EXPECT_THROW(cglmp(1), InputError);
}

TEST(Catalog, Cglmp3Values) {
  EXPECT_NEAR(bell_bound(cglmp(3)).value, 0.5, 1e-15);
  const auto s = cglmp_standard_strategy(3);
  EXPECT_NEAR(evaluate_bell(cglmp(3), born_behavior(s.rho, s.A, s.B)), 0.71823351, 1e-7);
}

// Textbook scale: 4 x value gives I_3 = 2 locally, 2.8729 for the
// maximally entangled strategy and 2.9149 at the optimum.
TEST(Catalog, Cglmp3TextbookScale) {
  EXPECT_NEAR(4 * bell_bound(cglmp(3)).value, 2.0, 1e-14);
  const auto s = cglmp_standard_strategy(3);
  EXPECT_NEAR(4 * evaluate_bell(cglmp(3), born_behavior(s.rho, s.A, s.B)), 2.872934, 1e-5);
  SeesawOptions opts;
  opts.restarts = 20;
  EXPECT_NEAR(4 * seesaw_bell(cglmp(3), 3, 3, opts).value, 2.914854, 1e-5);
}

// With coefficients +1 / -1 the d = 2 member is an affine image of CHSH:
// cglmp(2) = 2 chsh' - 1 where chsh' rewards a + b = xy + [x = 0, y = 1].
TEST(Catalog, Cglmp2IsAffineImageOfChsh) {
  const auto f2 = cglmp(2);
  std::vector<Term> terms;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      for (const Term& t : f2.terms)
        if (t.x == x && t.y == y && t.i == 1) terms.push_back({x, y, 1, 0, t.F, 1.0});
    }
  const auto chsh_prime = make_functional(Scenario::uniform(2, 2, 2), terms);
  EXPECT_NEAR(bell_bound(f2).value, 2 * bell_bound(chsh_prime).value - 1, 1e-15);
  EXPECT_NEAR(bell_bound(chsh_prime).value, 0.75, 1e-15);
  for (int s = 0; s < 20; ++s) {
    const auto beh = random_behavior(s, 2, 2, 2);
    EXPECT_NEAR(evaluate_bell(f2, beh), 2 * evaluate_bell(chsh_prime, beh) - 1, 1e-14);
  }
  SeesawOptions opts;
  opts.restarts = 5;
  EXPECT_NEAR(seesaw_bell(f2, 2, 2, opts).value, 2 * seesaw_bell(chsh(), 2, 2, opts).value - 1, 1e-8);
}

TEST(Catalog, LookupAndEntries) {
  for (const auto& e : catalog_entries()) {
    const auto f = catalog_lookup(e.name);
    ASSERT_TRUE(f.has_value()) << e.name;
    EXPECT_TRUE(validate(*f).empty());
  }
  EXPECT_EQ(*catalog_lookup("cglmp5"), cglmp(5));
  EXPECT_FALSE(catalog_lookup("cglmp").has_value());
  EXPECT_FALSE(catalog_lookup("cglmp1").has_value());
  EXPECT_FALSE(catalog_lookup("bogus").has_value());
}

TEST(RandomFunctional, ValidAndDeterministic) {
  const auto a = random_functional(1, 3, 2, 2, 1, 0);
  EXPECT_TRUE(validate(a).empty());
  EXPECT_EQ(a, random_functional(1, 3, 2, 2, 1, 0));
  EXPECT_NE(a, random_functional(2, 3, 2, 2, 1, 0));
  for (int s = 0; s < 100; ++s) {
    const int d = 2 + s % 6;
    const int N = 1 + s % 2;
    const auto f = random_functional(s, d, 1 + s % 3, 1 + s % 4, N, d / N - 1, -2.0, 3.0);
    EXPECT_TRUE(validate(f).empty()) << s;
    for (const Term& t : f.terms) {
      EXPECT_GE(t.c, -2.0);
      EXPECT_LT(t.c, 3.0);
    }
  }
  EXPECT_THROW(random_functional(1, 3, 2, 2, 2, 1), InfeasibleError);
}

TEST(RandomFunctional, GeneralBoundMatchesBellBoundOnSignedInstances) {
  for (int s = 0; s < 50; ++s) {
    const int d = 2 + s % 2;
    const auto f = random_functional(s, d, 2, 2, 1, 0);
    EXPECT_NEAR(ccp_bound_general(build_game(f)).value, bell_bound(f).value, 1e-12) << s;
  }
}
