#include "mshimura/volume.hpp"

#include "mshimura/theta.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <queue>
#include <stdexcept>

namespace mshimura {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Cell {
  double x0, y0, h;  // center and half side
  double bound;      // max |error| of the current estimate on this cell
  double estimate;
  friend bool operator<(const Cell& a, const Cell& b) { return a.bound < b.bound; }
};

enum class Where { Inside, Outside, Boundary };

class Integrator {
 public:
  Integrator(std::vector<Poly2> region, Poly2 density) : region_(std::move(region)), density_(std::move(density)) {}

  Where classify(const Cell& c) const {
    bool inside = true;
    for (const auto& g : region_) {
      const Interval e = g.enclose(c.x0, c.y0, c.h, c.h);
      if (e.hi < 0) return Where::Outside;
      if (!(e.lo >= 0)) inside = false;
    }
    return inside ? Where::Inside : Where::Boundary;
  }

  // Tensor Gauss-Legendre; with `masked` the density is replaced by zero
  // outside the region at each node.
  double integrate(const Cell& c, bool masked) const {
    return Gauss::integrate(
        [&](double x) {
          return Gauss::integrate(
              [&](double y) {
                if (masked)
                  for (const auto& g : region_)
                    if (g.eval(x, y, nullptr) < 0) return 0.0;
                return density_.eval(x, y, nullptr);
              },
              c.y0 - c.h, c.y0 + c.h);
        },
        c.x0 - c.h, c.x0 + c.h);
  }

  double sup_density(const Cell& c) const { return std::max(0.0, density_.enclose(c.x0, c.y0, c.h, c.h).hi); }

 private:
  std::vector<Poly2> region_;
  Poly2 density_;
};

}  // namespace

VolumeResult curve_volume(const ParamCurve& curve, double M, bool truncate_to_F, double rel_tol, long max_cells) {
  if (curve.parameter() != Parameter::Complex) throw std::invalid_argument("curve_volume: holomorphic curve required");
  if (curve.ambient() != Ambient::Torus && curve.ambient() != Ambient::Abelian)
    throw std::invalid_argument("curve_volume: ambient must be torus or abelian");
  if (!(M > 0) || !std::isfinite(M)) throw std::invalid_argument("curve_volume: M must be positive");
  if (!(rel_tol > 0)) throw std::invalid_argument("curve_volume: tolerance must be positive");

  std::vector<Poly2> region = norm_constraints(curve, Rat(M));
  if (truncate_to_F)
    for (const auto& r : curve.observation_coordinates()) {
      region.push_back(Poly2::constant(1) - r);
      region.push_back(Poly2::constant(1) + r);
    }
  // |p'|^2 = (d Re p / dx)^2 + (d Im p / dx)^2 by Cauchy-Riemann.
  Poly2 density;
  for (size_t i = 0; i < curve.dimension(); ++i) {
    const Poly2 a = curve.real_part(i).partial_x(), b = curve.imag_part(i).partial_x();
    density = density + a * a + b * b;
  }
  const Integrator integrator(std::move(region), std::move(density));

  const double T = parameter_bound(curve, M);
  double settled = 0;  // inside cells, integrated exactly
  double pending_estimate = 0, pending_bound = 0;
  std::priority_queue<Cell> queue;
  auto push = [&](Cell c) {
    switch (integrator.classify(c)) {
      case Where::Outside:
        return;
      case Where::Inside:
        settled += integrator.integrate(c, false);
        return;
      case Where::Boundary:
        c.estimate = integrator.integrate(c, true);
        c.bound = integrator.sup_density(c) * 4 * c.h * c.h;
        pending_estimate += c.estimate;
        pending_bound += c.bound;
        queue.push(c);
    }
  };
  constexpr int kGrid = 16;
  const double h0 = T / kGrid;
  for (int i = 0; i < kGrid * 2; ++i)
    for (int j = 0; j < kGrid * 2; ++j) push({-T + (2 * i + 1) * h0, -T + (2 * j + 1) * h0, h0, 0, 0});

  long examined = 0;
  auto total = [&] { return settled + pending_estimate; };
  while (!queue.empty() && pending_bound > rel_tol * total() && examined < max_cells) {
    const Cell c = queue.top();
    queue.pop();
    pending_estimate -= c.estimate;
    pending_bound -= c.bound;
    const double h = c.h / 2;
    for (int dx : {-1, 1})
      for (int dy : {-1, 1}) push({c.x0 + dx * h, c.y0 + dy * h, h, 0, 0});
    examined += 4;
  }
  // Recompute the sums to shed accumulated cancellation.
  pending_estimate = pending_bound = 0;
  for (auto q = queue; !q.empty(); q.pop()) {
    pending_estimate += q.top().estimate;
    pending_bound += q.top().bound;
  }
  VolumeResult out;
  out.value = total();
  out.achieved_tolerance = out.value > 0 ? pending_bound / out.value : (pending_bound > 0 ? INFINITY : 0.0);
  out.converged = out.achieved_tolerance <= rel_tol;
  return out;
}

}  // namespace mshimura
