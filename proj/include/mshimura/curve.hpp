#pragma once

// Parametrized algebraic curves t -> (p_1(t), ..., p_k(t)) with Gaussian
// rational coefficients, in a torus C^m or an abelian variety R^{2n}.

#include "mshimura/poly.hpp"

#include <complex>
#include <string>
#include <vector>

namespace mshimura {

/// torus: C^m, the lattice Z^m acts on real parts.
/// abelian: C^n = R^{2n} in coordinates (Re z_1, Im z_1, Re z_2, ...), the
/// lattice Z^{2n} acts by translation and the complex structure is
/// multiplication by i.
/// fiber: U(C) x V(R); kept as a data model, not counted.
enum class Ambient { Torus, Abelian, Fiber };

/// Complex parameter for holomorphic curves, real parameter for arcs.
enum class Parameter { Complex, Real };

std::string to_string(Ambient a);
std::string to_string(Parameter p);

class ParamCurve {
 public:
  /// Throws std::invalid_argument if there are no components or every
  /// component is constant.
  ParamCurve(Ambient ambient, Parameter parameter, std::vector<GaussPoly> components);

  /// (t, p_2(t), ..., p_k(t)).
  static ParamCurve graph(Ambient ambient, Parameter parameter, std::vector<GaussPoly> tail);

  Ambient ambient() const { return ambient_; }
  Parameter parameter() const { return parameter_; }
  const std::vector<GaussPoly>& components() const { return components_; }
  size_t dimension() const { return components_.size(); }
  /// Max component degree.
  int degree() const;
  /// True iff p_1(t) = t exactly.
  bool is_graph_form() const;

  std::vector<std::complex<double>> evaluate(std::complex<double> t) const;
  std::vector<std::complex<double>> derivative(std::complex<double> t) const;

  /// Re p_i and Im p_i as polynomials in (x, y) with t = x + i y; for a
  /// real parameter y does not occur.
  Poly2 real_part(size_t i) const;
  Poly2 imag_part(size_t i) const;

  /// The real coordinates the lattice acts on: all real and imaginary
  /// parts (abelian) or the real parts (torus).
  std::vector<Poly2> observation_coordinates() const;
  size_t observation_dim() const;

 private:
  Ambient ambient_;
  Parameter parameter_;
  std::vector<GaussPoly> components_;
  std::vector<Poly2> re_;
  std::vector<Poly2> im_;
};

}  // namespace mshimura
