#include "oracles.hpp"
#include "tautpic/taut_index.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <set>

using namespace tautpic;

namespace {
Mask mask_of(std::initializer_list<int> markings) {
  Mask m = 0;
  for (int i : markings)
    m |= singleton(i);
  return m;
}
} // namespace

TEST(ValidatePair, HyperbolicBoundary) {
  EXPECT_THROW(validate_pair(0, 3, Variant::stable), DomainError);
  EXPECT_NO_THROW(validate_pair(0, 4, Variant::stable));
  EXPECT_THROW(validate_pair(1, 0, Variant::stable), DomainError);
  EXPECT_NO_THROW(validate_pair(1, 1, Variant::rpic));
  EXPECT_NO_THROW(validate_pair(0, 3, Variant::rpic));
  EXPECT_NO_THROW(validate_pair(1, 0, Variant::rpic));
  EXPECT_NO_THROW(validate_pair(0, 0, Variant::rpic));
  EXPECT_THROW(validate_pair(0, -1, Variant::rpic), DomainError);
  EXPECT_THROW(validate_pair(-1, 5, Variant::stable), DomainError);
}

TEST(ValidatePair, MessageNamesTheInequality) {
  try {
    validate_pair(1, 0, Variant::open);
    FAIL();
  } catch (const DomainError &e) {
    EXPECT_NE(std::string(e.what()).find("3g-3+n > 0"), std::string::npos);
  }
  try {
    validate_pair(0, 3, Variant::stable);
    FAIL();
  } catch (const DomainError &e) {
    EXPECT_NE(std::string(e.what()).find("3g-3+n = 0"), std::string::npos);
  }
}

TEST(Canonicalize, Examples) {
  EXPECT_EQ(canonicalize({2, 1}, 1, mask_of({1})), GenId::boundary(1, 0));
  EXPECT_EQ(canonicalize({1, 2}, 1, 0), GenId::boundary(0, mask_of({1, 2})));
  EXPECT_EQ(canonicalize({4, 0}, 2, 0), GenId::boundary(2, 0));
}

TEST(Canonicalize, RejectsExcludedPairs) {
  EXPECT_THROW(canonicalize({2, 2}, 0, 0), DomainError);
  EXPECT_THROW(canonicalize({2, 2}, 2, mask_of({1, 2})), DomainError);
  EXPECT_THROW(canonicalize({2, 2}, 3, 0), DomainError);
}

TEST(Canonicalize, IdempotentAndOrbitInvariant) {
  for (int g = 0; g <= 4; ++g)
    for (int n = 0; n <= 5; ++n) {
      const ModuliPair p{g, n};
      for (int a = 0; a <= g; ++a)
        for (Mask m = 0; m <= p.full_mask(); ++m) {
          if (is_excluded(p, a, m))
            continue;
          const GenId c = canonicalize(p, a, m);
          ASSERT_EQ(canonicalize(p, c.a, c.mask), c);
          ASSERT_EQ(canonicalize(p, g - a, p.full_mask() & ~m), c);
        }
    }
}

TEST(EnumerateGenerators, SmallCases) {
  const auto g11 = enumerate_generators({1, 1});
  ASSERT_EQ(g11.size(), 3u);
  EXPECT_EQ(g11[2], GenId::boundary(0, mask_of({1})));

  const auto g20 = enumerate_generators({2, 0});
  ASSERT_EQ(g20.size(), 3u);
  EXPECT_EQ(g20[2], GenId::boundary(1, 0));

  const auto g31 = enumerate_generators({3, 1});
  ASSERT_EQ(g31.size(), 5u);
  EXPECT_EQ(g31[2], GenId::boundary(0, mask_of({1})));
  EXPECT_EQ(g31[3], GenId::boundary(1, 0));
  EXPECT_EQ(g31[4], GenId::boundary(1, mask_of({1})));
}

TEST(EnumerateGenerators, CountMatchesBruteForceOrbits) {
  for (int g = 0; g <= 6; ++g)
    for (int n = 0; n <= 8; ++n) {
      if (!is_hyperbolic(g, n))
        continue;
      const auto gens = enumerate_generators({g, n});
      const std::size_t orbits = oracle::brute_force_orbits(g, n);
      ASSERT_EQ(gens.size(), 2 + orbits) << g << "," << n;
      ASSERT_EQ(orbit_count({g, n}), orbits);
      ASSERT_EQ(std::set<GenId>(gens.begin(), gens.end()).size(), gens.size());
    }
}

TEST(EnumerateGenerators, GenusZeroOrbits) {
  for (int n = 4; n <= 8; ++n) {
    const ModuliPair p{0, n};
    for (const auto &id : enumerate_generators(p)) {
      if (id.kind != GenKind::delta_boundary)
        continue;
      const int size = std::popcount(id.mask);
      ASSERT_EQ(id.a, 0);
      ASSERT_GE(size, 1);
      ASSERT_LE(size, n - 1);
      ASSERT_LT(id.mask, p.full_mask() & ~id.mask);
    }
  }
}

TEST(GeneratorName, AtomSyntax) {
  EXPECT_EQ(generator_name(GenId::lambda()), "lambda");
  EXPECT_EQ(generator_name(GenId::delta_irr()), "delta_irr");
  EXPECT_EQ(generator_name(GenId::boundary(1, 0)), "delta(1;)");
  EXPECT_EQ(generator_name(GenId::boundary(0, mask_of({1, 3}))), "delta(0;1,3)");
  EXPECT_EQ(generator_name(GenId::section(2)), "sigma_2");
}
