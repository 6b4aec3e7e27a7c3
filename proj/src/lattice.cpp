#include "mshimura/lattice.hpp"

#include <algorithm>

namespace mshimura {
namespace {

struct Bezout {
  Integer g, s, t;  // s*a + t*b == g >= 0
};

Bezout xgcd(const Integer& a, const Integer& b) {
  Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Integer q = r0 / r1;
    Integer tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 < 0) return {-r0, -s0, -t0};
  return {r0, s0, t0};
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

Eigen::Index pivot_column(const IntMat& basis, Eigen::Index row) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c)
    if (basis(row, c) != 0) return c;
  return basis.cols();
}

}  // namespace

IntMat hermite_normal_form(const IntMat& m) {
  IntMat a = m;
  const Eigen::Index rows = a.rows();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < a.cols() && r < rows; ++c) {
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (a(i, c) == 0) continue;
      const Integer ar = a(r, c);
      const Integer ai = a(i, c);
      const Bezout b = xgcd(ar, ai);
      const Integer fr = ar / b.g;
      const Integer fi = ai / b.g;
      Vector<Integer> row_r = a.row(r).transpose();
      Vector<Integer> row_i = a.row(i).transpose();
      a.row(r) = (b.s * row_r + b.t * row_i).transpose();
      a.row(i) = (fr * row_i - fi * row_r).transpose();
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0) a.row(r) = -a.row(r);
    for (Eigen::Index i = 0; i < r; ++i) {
      const Integer q = floor_div(a(i, c), a(r, c));
      if (q != 0) a.row(i) -= q * a.row(r);
    }
    ++r;
  }
  return a.topRows(r);
}

SmithForm smith_normal_form(const IntMat& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  IntMat D = m;
  IntMat U = IntMat::Identity(rows, rows);
  IntMat V = IntMat::Identity(cols, cols);
  const Eigen::Index diag = std::min(rows, cols);

  for (Eigen::Index k = 0; k < diag; ++k) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      Eigen::Index pi = -1, pj = -1;
      Integer best = 0;
      for (Eigen::Index i = k; i < rows; ++i)
        for (Eigen::Index j = k; j < cols; ++j) {
          if (D(i, j) == 0) continue;
          Integer a = abs(D(i, j));
          if (pi < 0 || a < best) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) return {U, D, V};

      D.row(k).swap(D.row(pi));
      U.row(k).swap(U.row(pi));
      D.col(k).swap(D.col(pj));
      V.col(k).swap(V.col(pj));

      bool clean = true;
      for (Eigen::Index i = k + 1; i < rows; ++i) {
        if (D(i, k) == 0) continue;
        const Integer q = D(i, k) / D(k, k);
        D.row(i) -= q * D.row(k);
        U.row(i) -= q * U.row(k);
        if (D(i, k) != 0) clean = false;
      }
      for (Eigen::Index j = k + 1; j < cols; ++j) {
        if (D(k, j) == 0) continue;
        const Integer q = D(k, j) / D(k, k);
        D.col(j) -= q * D.col(k);
        V.col(j) -= q * V.col(k);
        if (D(k, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into row k and repeat.
      Eigen::Index bad = -1;
      for (Eigen::Index i = k + 1; i < rows && bad < 0; ++i)
        for (Eigen::Index j = k + 1; j < cols; ++j)
          if (D(i, j) % D(k, k) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      D.row(k) += D.row(bad);
      U.row(k) += U.row(bad);
    }
    if (D(k, k) < 0) {
      D.row(k) = -D.row(k);
      U.row(k) = -U.row(k);
    }
  }
  return {U, D, V};
}

Integer determinant(const IntMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix is not square");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  IntMat a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.row(k).swap(a.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------

Lattice::Lattice(Eigen::Index ambient_dim) : ambient_dim_(ambient_dim), basis_(0, ambient_dim) {}

Lattice::Lattice(Eigen::Index ambient_dim, IntMat basis) : ambient_dim_(ambient_dim), basis_(std::move(basis)) {}

Lattice Lattice::from_generators(const IntMat& generators) {
  return Lattice(generators.cols(), hermite_normal_form(generators));
}

Lattice Lattice::from_generators(const std::vector<IntVec>& generators, Eigen::Index ambient_dim) {
  IntMat g(static_cast<Eigen::Index>(generators.size()), ambient_dim);
  for (size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].size() != ambient_dim)
      throw std::invalid_argument("Lattice: generator has wrong dimension");
    g.row(static_cast<Eigen::Index>(i)) = generators[i].transpose();
  }
  return from_generators(g);
}

Lattice Lattice::full(Eigen::Index ambient_dim) {
  return Lattice(ambient_dim, IntMat::Identity(ambient_dim, ambient_dim));
}

bool Lattice::contains(const IntVec& v) const {
  if (v.size() != ambient_dim_) return false;
  IntVec w = v;
  for (Eigen::Index i = 0; i < basis_.rows(); ++i) {
    const Eigen::Index c = pivot_column(basis_, i);
    if (w(c) == 0) continue;
    if (w(c) % basis_(i, c) != 0) return false;
    const Integer q = w(c) / basis_(i, c);
    w -= q * basis_.row(i).transpose();
  }
  return all_zero(w);
}

bool Lattice::contains(const RatVec& v) const {
  if (!is_integral(v)) return false;
  return contains(to_integer(v));
}

bool Lattice::contains(const Lattice& other) const {
  if (other.ambient_dim_ != ambient_dim_) return false;
  for (Eigen::Index i = 0; i < other.basis_.rows(); ++i)
    if (!contains(IntVec(other.basis_.row(i).transpose()))) return false;
  return true;
}

Lattice Lattice::operator+(const Lattice& other) const {
  if (other.ambient_dim_ != ambient_dim_) throw std::invalid_argument("Lattice: dimension mismatch");
  IntMat g(basis_.rows() + other.basis_.rows(), ambient_dim_);
  g << basis_, other.basis_;
  return from_generators(g);
}

Integer Lattice::index_in(const Lattice& other) const {
  if (!other.contains(*this) || other.rank() != rank())
    throw std::invalid_argument("index_in: not a finite-index sublattice");
  // Coordinates of our basis in the other's Hermite basis.
  const Eigen::Index k = rank();
  IntMat coords = IntMat::Zero(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    IntVec w = basis_.row(r).transpose();
    for (Eigen::Index i = 0; i < k; ++i) {
      const Eigen::Index c = pivot_column(other.basis_, i);
      const Integer q = w(c) / other.basis_(i, c);
      coords(r, i) = q;
      w -= q * other.basis_.row(i).transpose();
    }
  }
  return abs(determinant(coords));
}

Lattice saturate(const Lattice& lattice) {
  if (lattice.is_zero()) return lattice;
  const SmithForm snf = smith_normal_form(lattice.basis());
  const auto v_inv = inverse<Rat>(to_rational(snf.V));
  const IntMat rows = to_integer(RatMat(v_inv->topRows(lattice.rank())));
  return Lattice::from_generators(rows);
}

Lattice saturated_span(const RatMat& rational_rows, Eigen::Index ambient_dim) {
  std::vector<IntVec> gens;
  for (Eigen::Index i = 0; i < rational_rows.rows(); ++i) {
    RatVec row = rational_rows.row(i).transpose();
    if (all_zero(row)) continue;
    gens.push_back(primitive_integer_vector(row));
  }
  return saturate(Lattice::from_generators(gens, ambient_dim));
}

}  // namespace mshimura
