#pragma once

// Integer lattices: Hermite and Smith normal forms, subgroups of Z^n in
// canonical (row Hermite) form, and saturation.

#include "mshimura/arith.hpp"

namespace mshimura {

/// Row-style Hermite normal form of the row module of `m`: pivots positive
/// and strictly increasing in column, entries above a pivot reduced into
/// [0, pivot). Zero rows are dropped, so the result has rank(m) rows.
IntMat hermite_normal_form(const IntMat& m);

/// U * m * V == D with U, V unimodular and D diagonal, d1 | d2 | ..., all
/// diagonal entries non-negative.
struct SmithForm {
  IntMat U;
  IntMat D;
  IntMat V;
};

SmithForm smith_normal_form(const IntMat& m);

/// Determinant by fraction-free elimination (Bareiss).
Integer determinant(const IntMat& m);

/// A subgroup of Z^n, stored as its row Hermite basis.
class Lattice {
 public:
  /// Zero lattice in Z^n.
  explicit Lattice(Eigen::Index ambient_dim = 0);

  /// The subgroup generated by the rows of `generators`.
  static Lattice from_generators(const IntMat& generators);
  static Lattice from_generators(const std::vector<IntVec>& generators, Eigen::Index ambient_dim);
  static Lattice full(Eigen::Index ambient_dim);

  Eigen::Index ambient_dim() const { return ambient_dim_; }
  Eigen::Index rank() const { return basis_.rows(); }
  bool is_zero() const { return basis_.rows() == 0; }

  /// Hermite basis, one generator per row.
  const IntMat& basis() const { return basis_; }

  bool contains(const IntVec& v) const;
  /// Rational vectors belong only if integral and in the lattice.
  bool contains(const RatVec& v) const;
  bool contains(const Lattice& other) const;

  /// Lattice generated by both.
  Lattice operator+(const Lattice& other) const;

  /// [other : *this] when *this is a finite-index sublattice of `other`.
  /// Throws std::invalid_argument otherwise.
  Integer index_in(const Lattice& other) const;

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
  }

 private:
  Lattice(Eigen::Index ambient_dim, IntMat basis);

  Eigen::Index ambient_dim_;
  IntMat basis_;
};

/// Largest sublattice of Z^n with the same rational span as `lattice`.
Lattice saturate(const Lattice& lattice);

/// Saturated lattice Z^n ∩ span_Q(rows of `rational_rows`).
Lattice saturated_span(const RatMat& rational_rows, Eigen::Index ambient_dim);

}  // namespace mshimura
