#include "mshimura/curve.hpp"
#include "mshimura/poly.hpp"

#include <gtest/gtest.h>

#include "generators.hpp"

using namespace mshimura;

namespace {

Poly2 random_poly(gen::Gen& g, int dx, int dy) {
  Poly2 p(dx, dy);
  for (int a = 0; a <= dx; ++a)
    for (int b = 0; b <= dy; ++b)
      if (g.integer(0, 2) > 0) p.set_coeff(a, b, g.rat(9, 5));
  return p;
}

// Direct evaluation from the coefficient table.
Rat eval_oracle(const Poly2& p, const Rat& x, const Rat& y) {
  Rat out = 0;
  for (int a = 0; a <= p.deg_x(); ++a)
    for (int b = 0; b <= p.deg_y(); ++b) {
      Rat term = p.coeff(a, b);
      for (int i = 0; i < a; ++i) term *= x;
      for (int i = 0; i < b; ++i) term *= y;
      out += term;
    }
  return out;
}

}  // namespace

TEST(Poly2Test, Arithmetic) {
  const Poly2 x = Poly2::x(), y = Poly2::y();
  const Poly2 p = x * x - y * y;
  EXPECT_EQ(p, (x - y) * (x + y));
  EXPECT_EQ(p.total_degree(), 2);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(p.eval(Rat(3), Rat(1, 2)), Rat(35, 4));
  EXPECT_EQ(p.partial_x(), Rat(2) * x);
  EXPECT_EQ(p.partial_y(), Rat(-2) * y);
  EXPECT_EQ(p.shifted(Rat(1), Rat(0)), p + Rat(2) * x + Poly2::constant(1));
}

TEST(Poly2Test, FromDense) {
  const Poly2 p = Poly2::from_dense(1, 1, {Rat(1), Rat(2), Rat(3), Rat(4)});
  EXPECT_EQ(p.coeff(0, 1), Rat(2));
  EXPECT_EQ(p.coeff(1, 0), Rat(3));
  EXPECT_THROW(Poly2::from_dense(1, 1, {Rat(1)}), std::invalid_argument);
}

TEST(Poly2Test, EvalMatchesOracle) {
  gen::Gen g;
  for (int i = 0; i < 200; ++i) {
    const Poly2 p = random_poly(g, static_cast<int>(g.integer(0, 4)), static_cast<int>(g.integer(0, 4)));
    const Rat x = g.rat(), y = g.rat();
    ASSERT_EQ(p.eval(x, y), eval_oracle(p, x, y));
    const Poly2 q = random_poly(g, 2, 2);
    ASSERT_EQ((p * q).eval(x, y), p.eval(x, y) * q.eval(x, y));
    ASSERT_EQ(p.shifted(x, y).eval(Rat(0), Rat(0)), p.eval(x, y));
  }
}

TEST(Poly2Test, FloatErrorBoundHolds) {
  gen::Gen g;
  for (int i = 0; i < 500; ++i) {
    const Poly2 p = random_poly(g, static_cast<int>(g.integer(0, 6)), static_cast<int>(g.integer(0, 6)));
    const double x = g.real(-30, 30), y = g.real(-30, 30);
    double err = 0;
    const double v = p.eval(x, y, &err);
    const double exact = p.eval(Rat(x), Rat(y)).convert_to<double>();
    ASSERT_LE(std::abs(v - exact), err + 1e-300) << i;
  }
}

TEST(Poly2Test, EnclosureContainsSamples) {
  gen::Gen g;
  for (int i = 0; i < 300; ++i) {
    const Poly2 p = random_poly(g, static_cast<int>(g.integer(0, 5)), static_cast<int>(g.integer(0, 5)));
    const double x0 = g.real(-10, 10), y0 = g.real(-10, 10), hx = g.real(0, 2), hy = g.real(0, 2);
    const Interval box = p.enclose(x0, y0, hx, hy);
    ASSERT_LE(box.lo, box.hi);
    for (int k = 0; k < 40; ++k) {
      const double x = x0 + g.real(-hx, hx), y = y0 + g.real(-hy, hy);
      const double exact = p.eval(Rat(x), Rat(y)).convert_to<double>();
      ASSERT_GE(exact, box.lo);
      ASSERT_LE(exact, box.hi);
    }
  }
}

TEST(Poly2Test, GcdAndExactDivision) {
  gen::Gen g;
  for (int i = 0; i < 60; ++i) {
    Poly2 h = random_poly(g, 1, 1);
    if (h.total_degree() < 1) h = h + Poly2::x();
    const Poly2 p = h * random_poly(g, 1, 2), q = h * random_poly(g, 2, 1);
    if (p.is_zero() || q.is_zero()) continue;
    const Poly2 d = gcd(p, q);
    ASSERT_TRUE(divide_exact(p, d).has_value());
    ASSERT_TRUE(divide_exact(q, d).has_value());
    ASSERT_TRUE(divide_exact(d, gcd(h, d)).has_value());
    const auto back = divide_exact(p, h);
    ASSERT_TRUE(back.has_value());
    ASSERT_EQ(*back * h, p);
  }
  const Poly2 x = Poly2::x(), y = Poly2::y();
  EXPECT_FALSE(divide_exact(x * x + y, x).has_value());
  EXPECT_EQ(gcd(x * y, x * x).total_degree(), 1);
}

TEST(GaussPolyTest, ShiftIsTaylorExpansion) {
  gen::Gen g;
  for (int i = 0; i < 100; ++i) {
    GaussPoly p;
    for (int k = 0; k <= g.integer(0, 5); ++k) p.emplace_back(g.rat(), g.rat());
    const GaussRat a(g.rat(), g.rat()), t(g.rat(), g.rat());
    ASSERT_EQ(evaluate(shift(p, a), t), evaluate(p, t + a));
  }
  EXPECT_EQ(degree(GaussPoly{1, 0, 0}), 0);
  EXPECT_EQ(degree(GaussPoly{}), -1);
}

TEST(ParamCurveTest, Validation) {
  EXPECT_THROW(ParamCurve(Ambient::Torus, Parameter::Complex, {}), std::invalid_argument);
  EXPECT_THROW(ParamCurve(Ambient::Torus, Parameter::Complex, {GaussPoly{1}, GaussPoly{2}}), std::invalid_argument);
  const ParamCurve c = ParamCurve::graph(Ambient::Abelian, Parameter::Complex, {GaussPoly{0, 0, 1}});
  EXPECT_TRUE(c.is_graph_form());
  EXPECT_EQ(c.degree(), 2);
  EXPECT_EQ(c.observation_dim(), 4u);
  EXPECT_EQ(ParamCurve::graph(Ambient::Torus, Parameter::Complex, {GaussPoly{0, 0, 1}}).observation_dim(), 2u);
  EXPECT_FALSE(ParamCurve(Ambient::Torus, Parameter::Real, {GaussPoly{0, 2}}).is_graph_form());
}

TEST(ParamCurveTest, PartsMatchEvaluation) {
  gen::Gen g;
  for (int i = 0; i < 100; ++i) {
    std::vector<GaussPoly> comps(2);
    for (auto& p : comps)
      for (int k = 0; k <= g.integer(1, 4); ++k) p.emplace_back(g.rat(5, 3), g.rat(5, 3));
    const ParamCurve c(Ambient::Abelian, Parameter::Complex, comps);
    const double x = g.real(-3, 3), y = g.real(-3, 3);
    const auto z = c.evaluate({x, y});
    const auto obs = c.observation_coordinates();
    for (size_t k = 0; k < 2; ++k) {
      ASSERT_NEAR(c.real_part(k).eval(Rat(x), Rat(y)).convert_to<double>(), z[k].real(), 1e-9 * (1 + std::abs(z[k])));
      ASSERT_NEAR(c.imag_part(k).eval(Rat(x), Rat(y)).convert_to<double>(), z[k].imag(), 1e-9 * (1 + std::abs(z[k])));
      ASSERT_EQ(obs[2 * k], c.real_part(k));
      ASSERT_EQ(obs[2 * k + 1], c.imag_part(k));
    }
  }
}
