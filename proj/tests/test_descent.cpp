#include "tautpic/descent.hpp"

#include <gtest/gtest.h>

using namespace tautpic;

namespace {

int value_on(const Presentation &p, const Character &chi, const char *expr) {
  return chi(parse_class(p, expr).coeffs);
}

AbGroupStructure z2() { return {0, {Integer(2)}}; }

} // namespace

TEST(EllipticCharacter, Values) {
  const auto p30 = build_lambda({3, 0});
  const auto chi30 = elliptic_character(p30);
  EXPECT_EQ(value_on(p30, chi30, "lambda"), 1);
  EXPECT_EQ(value_on(p30, chi30, "delta(1;)"), 1);
  EXPECT_EQ(value_on(p30, chi30, "delta(2;)"), 1);
  EXPECT_EQ(value_on(p30, chi30, "delta_irr"), 0);

  const auto p21 = build_lambda({2, 1});
  EXPECT_EQ(value_on(p21, elliptic_character(p21), "psi_1"), 0);

  const auto p12 = build_lambda({1, 2});
  EXPECT_EQ(value_on(p12, elliptic_character(p12), "delta(0;1,2)"), 1);
  EXPECT_EQ(value_on(p12, elliptic_character(p12), "delta(1;)"), 1);
}

TEST(EllipticCharacter, RejectsGenusZero) { EXPECT_THROW(elliptic_character(build_lambda({0, 5})), DomainError); }

TEST(HyperellipticCharacter, Values) {
  const auto p21 = build_lambda({2, 1});
  const auto chi21 = hyperelliptic_character(p21);
  EXPECT_EQ(value_on(p21, chi21, "lambda"), 0);
  EXPECT_EQ(value_on(p21, chi21, "delta(0;1)"), 1);
  EXPECT_EQ(value_on(p21, chi21, "psi_1"), 1);

  const auto p12 = build_lambda({1, 2});
  EXPECT_EQ(value_on(p12, hyperelliptic_character(p12), "lambda"), 1);

  const auto p30 = build_lambda({3, 0});
  const auto chi30 = hyperelliptic_character(p30);
  EXPECT_EQ(value_on(p30, chi30, "lambda"), 1);
  EXPECT_EQ(value_on(p30, chi30, "delta_irr"), 0);
  EXPECT_EQ(value_on(p30, chi30, "delta(1;)"), 0);
}

TEST(HyperellipticCharacter, OnlyForThreeOnTheNose) {
  EXPECT_THROW(hyperelliptic_character(build_lambda({2, 2})), DomainError);
  EXPECT_THROW(hyperelliptic_character(build_lambda({4, 0})), DomainError);
  EXPECT_THROW(hyperelliptic_character(build_lambda({0, 4})), DomainError);
}

TEST(Characters, VanishOnRelations) {
  for (int g = 1; g <= 5; ++g)
    for (int n = 0; n <= 5; ++n) {
      if (!is_hyperbolic(g, n) || (g == 1 && n == 1) || (g == 2 && n == 0))
        continue;
      const auto pres = build_lambda({g, n});
      ASSERT_TRUE(elliptic_character(pres).vanishes_on_relations(pres)) << g << "," << n;
      if (g + n == 3)
        ASSERT_TRUE(hyperelliptic_character(pres).vanishes_on_relations(pres)) << g << "," << n;
    }
}

TEST(Characters, NeedTheStableVariant) { EXPECT_THROW(elliptic_character(build_open({3, 1})), MismatchError); }

TEST(ClSubgroup, Examples) {
  const auto r30 = cl_subgroup(build_lambda({3, 0}));
  EXPECT_EQ(r30.quotient, z2());
  EXPECT_EQ(r30.method, ClMethod::both_agree);

  const auto r11 = cl_subgroup(build_lambda({1, 1}));
  EXPECT_EQ(r11.quotient, (AbGroupStructure{0, {Integer(12)}}));
  EXPECT_EQ(r11.method, ClMethod::explicit_list);

  const auto r21 = cl_subgroup(build_lambda({2, 1}));
  EXPECT_EQ(r21.quotient, (AbGroupStructure{0, {Integer(2), Integer(2)}}));
  EXPECT_EQ(r21.method, ClMethod::both_agree);

  const auto r12 = cl_subgroup(build_lambda({1, 2}));
  EXPECT_EQ(r12.quotient, (AbGroupStructure{0, {Integer(2), Integer(2)}}));
  EXPECT_EQ(r12.method, ClMethod::both_agree);

  const auto r20 = cl_subgroup(build_lambda({2, 0}));
  EXPECT_EQ(r20.quotient, (AbGroupStructure{0, {Integer(2), Integer(2)}}));

  const auto r41 = cl_subgroup(build_lambda({4, 1}));
  EXPECT_EQ(r41.quotient, z2());
  EXPECT_EQ(r41.method, ClMethod::both_agree);
}

TEST(ClSubgroup, GenusZeroIsEverything) {
  const auto r = cl_subgroup(build_lambda({0, 5}));
  EXPECT_TRUE(r.quotient.is_trivial());
  EXPECT_TRUE(r.warning.has_value());
  EXPECT_EQ(r.subgroup_basis, IntMatrix::identity(5));
}

TEST(ClSubgroup, BasisHasTheQuotientIndex) {
  for (const ModuliPair p : {ModuliPair{1, 1}, {2, 1}, {3, 2}}) {
    const auto pres = build_lambda(p);
    const auto r = cl_subgroup(pres);
    ASSERT_EQ(r.subgroup_basis.rows(), pres.coordinates.free_rank());
    Integer index = 1;
    for (const auto &d : r.quotient.invariant_factors)
      index *= d;
    EXPECT_EQ(abs(determinant(r.subgroup_basis)), index);
  }
}

TEST(ClSubgroup, Sweep) {
  for (int g = 1; g <= 6; ++g)
    for (int n = 0; n <= 6; ++n) {
      if (!is_hyperbolic(g, n))
        continue;
      const auto r = cl_subgroup(build_lambda({g, n}));
      if (g + n >= 4 || (g == 3 && n == 0)) {
        ASSERT_EQ(r.quotient, z2()) << g << "," << n;
        ASSERT_EQ(r.method, ClMethod::both_agree) << g << "," << n;
      }
    }
}

TEST(Rigidification, Fixtures) {
  const auto fixtures = rigidification_fixtures();
  ASSERT_EQ(fixtures.size(), 2u);
  EXPECT_EQ(fixtures[0].expected_quotient, z2());
  EXPECT_TRUE(fixtures[1].expected_quotient.is_trivial());
  for (const auto &f : fixtures) {
    const auto pres = build_lambda(f.pair);
    std::vector<DivisorClass> gens;
    for (const auto &e : f.generators)
      gens.push_back(parse_class(pres, e));
    EXPECT_EQ(subgroup_quotient(pres, gens), f.expected_quotient);
  }
}
