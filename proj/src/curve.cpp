#include "mshimura/curve.hpp"

#include <stdexcept>

namespace mshimura {

std::string to_string(Ambient a) {
  switch (a) {
    case Ambient::Torus:
      return "torus";
    case Ambient::Abelian:
      return "abelian";
    case Ambient::Fiber:
      return "fiber";
  }
  return "?";
}

std::string to_string(Parameter p) { return p == Parameter::Complex ? "complex" : "real"; }

ParamCurve::ParamCurve(Ambient ambient, Parameter parameter, std::vector<GaussPoly> components)
    : ambient_(ambient), parameter_(parameter) {
  if (components.empty()) throw std::invalid_argument("ParamCurve: no components");
  bool constant = true;
  for (auto& p : components) {
    p = trimmed(std::move(p));
    if (mshimura::degree(p) >= 1) constant = false;
  }
  if (constant) throw std::invalid_argument("ParamCurve: degenerate curve (all components constant)");
  components_ = std::move(components);

  // Real and imaginary parts of t^m, built up by multiplying with x + i y.
  const Poly2 x = Poly2::x();
  const Poly2 y = parameter_ == Parameter::Complex ? Poly2::y() : Poly2();
  for (const auto& p : components_) {
    Poly2 re, im;
    Poly2 pow_re = Poly2::constant(1), pow_im;
    for (size_t m = 0; m < p.size(); ++m) {
      re = re + p[m].re * pow_re - p[m].im * pow_im;
      im = im + p[m].re * pow_im + p[m].im * pow_re;
      Poly2 next_re = pow_re * x - pow_im * y;
      pow_im = pow_re * y + pow_im * x;
      pow_re = std::move(next_re);
    }
    re_.push_back(std::move(re));
    im_.push_back(std::move(im));
  }
}

ParamCurve ParamCurve::graph(Ambient ambient, Parameter parameter, std::vector<GaussPoly> tail) {
  tail.insert(tail.begin(), GaussPoly{GaussRat(0), GaussRat(1)});
  return ParamCurve(ambient, parameter, std::move(tail));
}

int ParamCurve::degree() const {
  int d = 0;
  for (const auto& p : components_) d = std::max(d, mshimura::degree(p));
  return d;
}

bool ParamCurve::is_graph_form() const {
  const GaussPoly& p = components_.front();
  return p.size() == 2 && p[0].is_zero() && p[1] == GaussRat(1);
}

std::vector<std::complex<double>> ParamCurve::evaluate(std::complex<double> t) const {
  std::vector<std::complex<double>> out;
  for (const auto& p : components_) {
    std::complex<double> v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
      v = v * t + std::complex<double>(it->re.convert_to<double>(), it->im.convert_to<double>());
    out.push_back(v);
  }
  return out;
}

std::vector<std::complex<double>> ParamCurve::derivative(std::complex<double> t) const {
  std::vector<std::complex<double>> out;
  for (const auto& p : components_) {
    std::complex<double> v = 0;
    for (size_t m = p.size(); m-- > 1;)
      v = v * t + static_cast<double>(m) * std::complex<double>(p[m].re.convert_to<double>(), p[m].im.convert_to<double>());
    out.push_back(v);
  }
  return out;
}

Poly2 ParamCurve::real_part(size_t i) const { return re_.at(i); }
Poly2 ParamCurve::imag_part(size_t i) const { return im_.at(i); }

std::vector<Poly2> ParamCurve::observation_coordinates() const {
  std::vector<Poly2> out;
  switch (ambient_) {
    case Ambient::Abelian:
      for (size_t i = 0; i < components_.size(); ++i) {
        out.push_back(re_[i]);
        out.push_back(im_[i]);
      }
      return out;
    case Ambient::Torus:
      return re_;
    case Ambient::Fiber:
      break;
  }
  throw std::invalid_argument("ParamCurve: fiber curves have no lattice coordinates here");
}

size_t ParamCurve::observation_dim() const {
  return ambient_ == Ambient::Abelian ? 2 * components_.size() : components_.size();
}

}  // namespace mshimura
