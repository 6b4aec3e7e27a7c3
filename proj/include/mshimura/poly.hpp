#pragma once

// Real polynomials in (x, y) with exact rational coefficients and a double
// mirror for rigorous floating-point enclosures.

#include "mshimura/arith.hpp"

#include <optional>
#include <vector>

namespace mshimura {

struct Interval {
  double lo = 0;
  double hi = 0;
  double width() const { return hi - lo; }
};

/// Gaussian rational a + b i.
struct GaussRat {
  Rat re = 0;
  Rat im = 0;

  GaussRat() = default;
  GaussRat(Rat r, Rat i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussRat(long long r) : re(r), im(0) {}

  bool is_zero() const { return re == 0 && im == 0; }
  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
};

/// Coefficients in ascending order of degree.
using GaussPoly = std::vector<GaussRat>;

/// Drops trailing zero coefficients.
GaussPoly trimmed(GaussPoly p);
int degree(const GaussPoly& p);  // -1 for the zero polynomial
GaussRat evaluate(const GaussPoly& p, const GaussRat& t);
/// p(t + a) as a polynomial in t.
GaussPoly shift(const GaussPoly& p, const GaussRat& a);

class Poly2 {
 public:
  /// The zero polynomial.
  Poly2() : Poly2(0, 0) {}
  Poly2(int deg_x, int deg_y);

  static Poly2 constant(const Rat& c);
  static Poly2 x();
  static Poly2 y();
  /// Dense coefficients, entry a * (deg_y + 1) + b holding x^a y^b.
  static Poly2 from_dense(int deg_x, int deg_y, std::vector<Rat> coeffs);

  int deg_x() const { return dx_; }
  int deg_y() const { return dy_; }
  int total_degree() const;
  bool is_zero() const;

  const Rat& coeff(int a, int b) const { return c_[index(a, b)]; }
  void set_coeff(int a, int b, const Rat& value);

  friend Poly2 operator+(const Poly2& p, const Poly2& q);
  friend Poly2 operator-(const Poly2& p, const Poly2& q);
  friend Poly2 operator*(const Poly2& p, const Poly2& q);
  friend Poly2 operator*(const Rat& s, const Poly2& p);
  friend bool operator==(const Poly2& p, const Poly2& q);

  Rat eval(const Rat& x, const Rat& y) const;
  /// Floating-point value together with a bound on its rounding error.
  double eval(double x, double y, double* error) const;
  /// Rigorous enclosure of the range over [x0 +- hx] x [y0 +- hy], from
  /// the Taylor expansion at the center plus a rounding allowance.
  Interval enclose(double x0, double y0, double hx, double hy) const;

  /// Exact Taylor expansion: p(x0 + dx, y0 + dy) as a polynomial in (dx, dy).
  Poly2 shifted(const Rat& x0, const Rat& y0) const;
  Poly2 partial_x() const;
  Poly2 partial_y() const;

  /// Greatest common divisor over Q, normalized by its leading
  /// coefficient in lex order (x before y).
  friend Poly2 gcd(const Poly2& p, const Poly2& q);
  /// p / q if q divides p exactly.
  friend std::optional<Poly2> divide_exact(const Poly2& p, const Poly2& q);

 private:
  size_t index(int a, int b) const { return static_cast<size_t>(a) * static_cast<size_t>(dy_ + 1) + static_cast<size_t>(b); }
  void refresh();

  struct Term {
    int a;
    int b;
    double c;
  };

  int dx_;
  int dy_;
  std::vector<Rat> c_;
  std::vector<Term> terms_;  // nonzero coefficients as doubles
};

}  // namespace mshimura
