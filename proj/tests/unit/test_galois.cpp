#include "mshimura/galois.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"

using namespace mshimura;

namespace {

RatVec rv(std::initializer_list<Rat> xs) {
  RatVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

// Independent count of [U_m : U'] by listing residues t mod p^K, K = n + m
// + 4, and testing the congruences on the exact rational products.
std::uint64_t index_oracle(std::uint64_t p, int n, int m, const HeisenbergElement<Rat>& w) {
  const int K = n + m + 4;
  const std::uint64_t mod = ipow(p, K), pm = ipow(p, m);
  auto integral_mod_pm = [&](const Rat& x) { return x == 0 || valuation(x, p) >= m; };
  std::uint64_t units = 0, fixing = 0;
  for (std::uint64_t t = 1; t < mod; ++t) {
    if (t % p == 0 || (t - 1) % pm != 0) continue;
    ++units;
    const Rat tt(static_cast<long long>(t));
    bool ok = true;
    const RatVec dv = w.v - tt * w.v;
    for (Eigen::Index k = 0; k < dv.size(); ++k) ok = ok && integral_mod_pm(dv(k));
    const RatVec du = w.u - tt * w.u + w.datum->pair(w.v, dv);
    for (Eigen::Index k = 0; k < du.size(); ++k) ok = ok && integral_mod_pm(du(k));
    if (ok) ++fixing;
  }
  return units / fixing;
}

}  // namespace

TEST(Order, Examples) {
  const auto d = SymplecticDatum::standard(1, 4);
  EXPECT_EQ(order_of_special_point(HeisenbergElement<Rat>::identity(d)), 1);
  EXPECT_EQ(order_of_special_point({d, rv({Rat(1, 2)}), rv({Rat(1, 3), 0})}), 6);
  EXPECT_EQ(order_of_special_point({d, rv({0}), rv({Rat(1, 4), Rat(3, 4)})}), 4);
}

TEST(LocalIndex, MatchesEnumerationOracle) {
  const auto d = SymplecticDatum::standard(1, 4);
  for (std::uint64_t p : {2, 3, 5})
    for (int n = 1; n <= 3; ++n)
      for (int m = 0; m <= 3; ++m) {
        if (ipow(p, n + m + 4) > 200000) continue;
        const HeisenbergElement<Rat> w(d, rv({0}), rv({Rat(1) / Rat(ipow(p, n)), 0}));
        const std::uint64_t brute = local_index_bruteforce({p, n, m}, w);
        EXPECT_EQ(brute, index_oracle(p, n, m, w)) << p << " " << n << " " << m;
        // p^n once the level is divisible by p, the full unit index otherwise.
        EXPECT_EQ(brute, m == 0 ? ipow(p, n - 1) * (p - 1) : ipow(p, n)) << p << " " << n << " " << m;
      }
}

TEST(LocalIndex, OracleOnRandomElements) {
  gen::Gen g;
  const auto d = SymplecticDatum::standard(1, 4);
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t p = g.coin() ? 2 : 3;
    const int n = static_cast<int>(g.integer(1, 2)), m = static_cast<int>(g.integer(0, 2));
    const Rat scale = Rat(1) / Rat(ipow(p, n));
    RatVec v(2);
    v << scale * Rat(g.integer(1, 5) * static_cast<long long>(p) + 1), Rat(g.integer(-4, 4));
    const HeisenbergElement<Rat> w(d, rv({g.rat(3, 1)}), v);
    ASSERT_EQ(local_index_bruteforce({p, n, m}, w), index_oracle(p, n, m, w));
  }
}

TEST(LocalIndex, Formula) {
  EXPECT_EQ(local_index_formula({2, 1, 2}), 1u);
  EXPECT_EQ(local_index_formula({3, 1, 1}), 2u);
  EXPECT_EQ(local_index_formula({5, 2, 1}), 20u);
}

TEST(LocalIndex, Validation) {
  const auto d = SymplecticDatum::standard(1, 4);
  const HeisenbergElement<Rat> w(d, rv({0}), rv({Rat(1, 4), 0}));
  EXPECT_THROW(local_index_bruteforce({4, 2, 0}, w), std::invalid_argument);
  EXPECT_THROW(local_index_bruteforce({2, 1, 0}, w), std::invalid_argument);
  EXPECT_THROW(local_index_bruteforce({2, 0, 0}, w), std::invalid_argument);
}

TEST(IndexBound, Examples) {
  const auto d = SymplecticDatum::standard(1, 4);
  EXPECT_EQ(index_lower_bound({d, rv({0}), rv({Rat(1, 6), 0})}), Rat(2));
  EXPECT_EQ(index_lower_bound(HeisenbergElement<Rat>::identity(d)), Rat(1));
  const HeisenbergElement<Rat> w12(d, rv({0}), rv({Rat(1, 12), 0}));
  EXPECT_EQ(index_lower_bound(w12), Rat(4));
  const auto cases = local_cases(w12);
  ASSERT_EQ(cases.size(), 2u);
  EXPECT_EQ(cases[0].p, 2u);
  EXPECT_EQ(cases[0].n, 2);
  EXPECT_EQ(cases[0].m, 2);
  EXPECT_EQ(cases[1].p, 3u);
  EXPECT_EQ(cases[1].m, 0);
}

TEST(IndexBound, EqualsLocalProductAwayFromTheLevel) {
  // Level 4: the product matches whenever 2 does not divide ord(w).
  gen::Gen g;
  const auto d = SymplecticDatum::standard(1, 4);
  for (int i = 0; i < 50; ++i) {
    std::uint64_t N = 1;
    for (std::uint64_t p : {3, 5, 7}) N *= ipow(p, static_cast<int>(g.integer(0, p == 3 ? 3 : 1)));
    const HeisenbergElement<Rat> w(d, rv({0}), rv({Rat(1) / Rat(N), g.rat(4, 1)}));
    Integer prod = 1;
    for (const auto& c : local_cases(w)) prod *= local_index_bruteforce(c, w);
    ASSERT_EQ(Rat(prod), index_lower_bound(w)) << N;
  }
}

TEST(OrbitBoundTest, Examples) {
  const OrbitBound one = orbit_bound_factor(1, 0.5, 0.5);
  EXPECT_DOUBLE_EQ(one.ell, 1);
  EXPECT_DOUBLE_EQ(one.ratio, 1);
  const OrbitBound six = orbit_bound_factor(6, 0.5, 0.5);
  EXPECT_NEAR(six.ell, 0.5, 1e-12);
  EXPECT_NEAR(six.ratio, 0.5 / std::sqrt(6.0), 1e-12);
  EXPECT_THROW(orbit_bound_factor(0, 0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(orbit_bound_factor(6, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(orbit_bound_factor(6, 0.5, 0.0), std::invalid_argument);
}

TEST(OrbitBoundTest, PrimeValues) {
  for (double B : {0.3, 0.5, 0.8})
    for (std::uint64_t p : {2, 3, 5, 7, 11, 101, 7919}) EXPECT_NEAR(orbit_bound_factor(p, B, 0.3).ell, B * (p - 1), 1e-9 * p);
}

TEST(Sweep, SummaryMatchesRows) {
  std::vector<SweepRow> rows;
  const SweepSummary s = bound_sweep(5000, 0.5, 0.3, &rows);
  ASSERT_EQ(rows.size(), 5000u);
  double best = 1e300;
  std::uint64_t arg = 0;
  for (const auto& r : rows) {
    const OrbitBound direct = orbit_bound_factor(r.N, 0.5, 0.3);
    ASSERT_NEAR(r.ell, direct.ell, 1e-9 * (1 + direct.ell));
    ASSERT_EQ(r.omega, omega(r.N));
    ASSERT_NEAR(r.euler_product, euler_product(r.N).convert_to<double>(), 1e-12);
    if (r.ratio < best) {
      best = r.ratio;
      arg = r.N;
    }
  }
  EXPECT_EQ(s.argmin_ratio, arg);
  EXPECT_DOUBLE_EQ(s.min_ratio, best);
}

TEST(Sweep, MinimaPositiveOnGrid) {
  for (double B : {0.3, 0.5, 0.8})
    for (double eps : {0.1, 0.3, 0.5}) {
      const SweepSummary s = bound_sweep(100000, B, eps);
      EXPECT_GT(s.min_ratio, 0);
      EXPECT_GT(s.min_b_term, 0);
      EXPECT_GT(s.min_euler_term, 0);
    }
}
