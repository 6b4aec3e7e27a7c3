#pragma once

// Exact scalars, dense vectors/matrices over them, heights and the
// elementary arithmetic functions (prime counting, Euler products).

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mshimura {

/// Arbitrary precision integer.
using Integer = boost::multiprecision::mpz_int;
/// Arbitrary precision rational, always in lowest terms with positive denominator.
using Rat = boost::multiprecision::mpq_rational;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RatVec = Vector<Rat>;
using RatMat = Matrix<Rat>;
using IntVec = Vector<Integer>;
using IntMat = Matrix<Integer>;

/// Zero tests and tolerances, per scalar type. Exact types compare exactly.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rat> {
  static constexpr bool exact = true;
  static bool is_zero(const Rat& x, double /*scale*/ = 1.0) { return x == 0; }
  static double to_double(const Rat& x) { return x.convert_to<double>(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr double tolerance = 1e-12;
  static bool is_zero(double x, double scale = 1.0) {
    return std::abs(x) <= tolerance * std::max(1.0, scale);
  }
  static double to_double(double x) { return x; }
};

// ---------------------------------------------------------------------------
// Heights

/// H(a/b) = max(|a|, |b|) for a/b in lowest terms, H(0) = 0.
Integer height(const Rat& x);

/// Max of the entry heights; 0 for an empty or all-zero array.
template <class Derived>
Integer height(const Eigen::MatrixBase<Derived>& x) {
  Integer h = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Integer hi = height(Rat(x(i, j)));
      if (hi > h) h = hi;
    }
  return h;
}

/// Exact all-zero test (Eigen's isZero() is tolerance based).
template <class Derived>
bool all_zero(const Eigen::MatrixBase<Derived>& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (x(i, j) != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Denominators and integrality

template <class Derived>
Integer denominator_lcm(const Eigen::MatrixBase<Derived>& x) {
  Integer l = 1;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      l = boost::multiprecision::lcm(l, Integer(denominator(Rat(x(i, j)))));
  return l;
}

template <class Derived>
bool is_integral(const Eigen::MatrixBase<Derived>& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (denominator(Rat(x(i, j))) != 1) return false;
  return true;
}

/// Entrywise conversion of an integral rational array; throws if an entry
/// has a nontrivial denominator.
IntMat to_integer(const RatMat& x);
IntVec to_integer(const RatVec& x);
RatMat to_rational(const IntMat& x);
RatVec to_rational(const IntVec& x);

/// Scales a rational vector by the lcm of its denominators and divides by
/// the gcd of the result: the primitive integer vector on the same ray.
IntVec primitive_integer_vector(const RatVec& v);

// ---------------------------------------------------------------------------
// Exact linear algebra over Q

/// Reduced row echelon form; returns the pivot columns alongside.
std::pair<RatMat, std::vector<Eigen::Index>> rref(const RatMat& a);
Eigen::Index rank(const RatMat& a);
/// Rows form a basis of {x : a x = 0}.
RatMat nullspace(const RatMat& a);
/// Rows form a basis of the row space of a.
RatMat row_space_basis(const RatMat& a);
/// True iff v lies in the row space of the rows of a.
bool in_row_space(const RatMat& a, const RatVec& v);

/// Gauss-Jordan inverse. Exact for Rat; partial pivoting for double.
/// Returns nullopt for singular input.
template <class Scalar>
std::optional<Matrix<Scalar>> inverse(const Matrix<Scalar>& a) {
  using std::abs;
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse: matrix is not square");
  Matrix<Scalar> m = a;
  Matrix<Scalar> inv = Matrix<Scalar>::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (abs(m(r, c)) > abs(m(p, c))) p = r;
    if (ScalarTraits<Scalar>::is_zero(m(p, c))) return std::nullopt;
    m.row(c).swap(m.row(p));
    inv.row(c).swap(inv.row(p));
    const Scalar pivot = m(c, c);
    m.row(c) /= pivot;
    inv.row(c) /= pivot;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || m(r, c) == Scalar(0)) continue;
      const Scalar f = m(r, c);
      m.row(r) -= f * m.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Elementary arithmetic functions

/// Prime factorization by trial division, primes ascending.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

/// Number of distinct primes dividing m. Throws std::invalid_argument for m = 0.
int omega(std::uint64_t m);

/// prod_{p | m} (1 - 1/p); 1 for m = 1. Throws std::invalid_argument for m = 0.
Rat euler_product(std::uint64_t m);

/// p-adic valuation of a nonzero integer.
int valuation(const Integer& x, std::uint64_t p);
/// p-adic valuation of a nonzero rational (numerator minus denominator).
int valuation(const Rat& x, std::uint64_t p);

std::uint64_t ipow(std::uint64_t base, int exp);

// ---------------------------------------------------------------------------
// Text form "num/den"

/// Parses "a", "a/b" or "-a/b" (whitespace not allowed). Throws
/// std::invalid_argument on malformed input or zero denominator.
Rat parse_rat(std::string_view text);
/// Canonical "num/den" form; the denominator is always written.
std::string format_rat(const Rat& x);

}  // namespace mshimura
