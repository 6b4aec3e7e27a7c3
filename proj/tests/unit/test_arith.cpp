#include "mshimura/arith.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "generators.hpp"

using namespace mshimura;

TEST(Height, Scalars) {
  EXPECT_EQ(height(Rat(3, 4)), 4);
  EXPECT_EQ(height(Rat(0)), 0);
  EXPECT_EQ(height(Rat(-7, 2)), 7);
}

TEST(Height, Vectors) {
  RatVec v(2);
  v << Rat(1, 2), Rat(3);
  EXPECT_EQ(height(v), 3);
  EXPECT_EQ(height(RatVec(RatVec::Zero(3))), 0);
}

TEST(Height, MatchesDefinitionOnRandomFractions) {
  gen::Gen gen;
  for (int i = 0; i < 500; ++i) {
    const long long a = gen.integer(-1000, 1000);
    const long long b = gen.integer(1, 1000);
    const long long g = std::gcd(a, b);
    const long long ra = a / g, rb = b / g;
    const long long expected = a == 0 ? 0 : std::max(std::llabs(ra), rb);
    EXPECT_EQ(height(Rat(a, b)), expected) << a << "/" << b;
  }
}

TEST(Omega, Examples) {
  EXPECT_EQ(omega(12), 2);
  EXPECT_EQ(omega(1), 0);
  EXPECT_EQ(omega(30), 3);
  EXPECT_THROW(omega(0), std::invalid_argument);
}

TEST(EulerProduct, Examples) {
  EXPECT_EQ(euler_product(6), Rat(1, 3));
  EXPECT_EQ(euler_product(1), Rat(1));
  EXPECT_EQ(euler_product(8), Rat(1, 2));
  EXPECT_THROW(euler_product(0), std::invalid_argument);
}

TEST(EulerProduct, TimesArgumentIsPositiveInteger) {
  for (std::uint64_t m = 1; m <= 10000; ++m) {
    const Rat x = euler_product(m) * Rat(Integer(m));
    ASSERT_EQ(denominator(x), 1) << m;
    ASSERT_GT(x, 0) << m;
  }
}

TEST(EulerProduct, AgreesWithTotientCount) {
  for (std::uint64_t m = 1; m <= 300; ++m) {
    std::uint64_t phi = 0;
    for (std::uint64_t k = 1; k <= m; ++k)
      if (std::gcd(k, m) == 1) ++phi;
    EXPECT_EQ(euler_product(m) * Rat(Integer(m)), Rat(Integer(phi))) << m;
  }
}

TEST(Omega, AgreesWithTrialDivision) {
  for (std::uint64_t m = 1; m <= 2000; ++m) {
    int count = 0;
    for (std::uint64_t p = 2; p <= m; ++p) {
      bool prime = true;
      for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) prime = false;
      if (prime && m % p == 0) ++count;
    }
    EXPECT_EQ(omega(m), count) << m;
  }
}

TEST(Valuation, Basics) {
  EXPECT_EQ(valuation(Integer(24), 2), 3);
  EXPECT_EQ(valuation(Rat(9, 8), 2), -3);
  EXPECT_EQ(valuation(Rat(9, 8), 3), 2);
  EXPECT_THROW(valuation(Integer(0), 2), std::invalid_argument);
}

TEST(RatText, RoundTrip) {
  gen::Gen gen;
  for (int i = 0; i < 200; ++i) {
    const Rat x = gen.rat(100000, 1000);
    EXPECT_EQ(parse_rat(format_rat(x)), x);
  }
  EXPECT_EQ(format_rat(Rat(3)), "3/1");
  EXPECT_EQ(parse_rat("-6/4"), Rat(-3, 2));
  EXPECT_THROW(parse_rat("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rat("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_rat(""), std::invalid_argument);
}

TEST(LinearAlgebra, NullspaceAnnihilates) {
  gen::Gen gen;
  for (int i = 0; i < 50; ++i) {
    RatMat a(2, 4);
    for (Eigen::Index r = 0; r < 2; ++r) a.row(r) = gen.rat_vec(4).transpose();
    const RatMat k = nullspace(a);
    EXPECT_EQ(k.rows() + rank(a), 4);
    EXPECT_TRUE(all_zero(RatMat(a * k.transpose())));
  }
}

TEST(LinearAlgebra, InverseIsExact) {
  gen::Gen gen;
  for (int i = 0; i < 50; ++i) {
    RatMat a(3, 3);
    for (Eigen::Index r = 0; r < 3; ++r) a.row(r) = gen.rat_vec(3).transpose();
    const auto inv = inverse<Rat>(a);
    if (rank(a) < 3) {
      EXPECT_FALSE(inv.has_value());
      continue;
    }
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(RatMat(a * *inv), RatMat(RatMat::Identity(3, 3)));
  }
}

TEST(PrimitiveVector, DividesContent) {
  RatVec v(3);
  v << Rat(1, 2), Rat(-3, 4), Rat(0);
  IntVec expected(3);
  expected << 2, -3, 0;
  EXPECT_EQ(primitive_integer_vector(v), expected);
}
