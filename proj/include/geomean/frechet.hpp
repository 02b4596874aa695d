#pragma once

#include "geomean/manifold.hpp"

#include <vector>

namespace geomean {

/// Exponent p of the L^p objective; 2 <= p < infinity.
class PExponent {
public:
  explicit PExponent(double p);
  double value() const { return p_; }

private:
  double p_;
};

/// Data points with weights and a ball B(center, radius) that contains them.
struct WeightedDataset {
  Manifold space;
  std::vector<Vector> points;
  std::vector<double> weights;
  Vector center;
  double radius = 0.0;
  /// radius <= r_cx, so the minimizer is unique.
  bool uniqueness_certified = false;

  std::size_t size() const { return points.size(); }
};

/// Validates and builds a dataset. Weights must lie in [0, 1]; a sum within
/// 1e-9 of one is renormalized, anything else is rejected. Every point must
/// satisfy d(center, x_i) < radius.
WeightedDataset make_dataset(const Manifold &space, std::vector<Vector> points,
                             std::vector<double> weights, Vector center,
                             double radius);

/// Equal weights 1/N.
std::vector<double> uniform_weights(std::size_t n);

/// (1/p) sum_i w_i d(x, x_i)^p.
double cost(const WeightedDataset &ds, PExponent p, const Vector &x);

/// -sum_i w_i d(x, x_i)^{p-2} log_x(x_i). Throws CutLocusError carrying the
/// index of the offending data point.
Vector gradient(const WeightedDataset &ds, PExponent p, const Vector &x);

struct HessianBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Eigenvalue bounds of the Hessian of x -> d^2(x, y)/2 at distance d:
/// [b_Delta(d), c_delta(d)].
HessianBounds hessian_radial_bounds(const Manifold &space, double d);

/// Same for x -> d^p(x, y)/p:
/// d^{p-2} [min{p-1, b_Delta(d)}, max{p-1, c_delta(d)}].
HessianBounds hessian_radial_bounds(const Manifold &space, double d, PExponent p);

/// H_{B(o,rho),p} = (2 rho)^{p-2} max{p-1, c_delta(2 rho)}; requires rho <= r_cx.
double uniform_hessian_bound(const Manifold &space, double rho, PExponent p);

/// Upper Hessian bound of f_p over B(c, r) when the data lie in B(o, rho):
/// every data point is within r + rho of any x in the ball.
double hessian_bound_in_ball(const Manifold &space, double r, double rho, PExponent p);

/// Weighted bounds of the Hessian of f_p over B(c, r) obtained from the
/// radial bounds of each term, using r + d(c, x_i) as the worst distance.
HessianBounds ball_hessian_bounds(const WeightedDataset &ds, PExponent p,
                                  const Vector &c, double r);

/// Central second difference of f_p along the geodesic through x with unit
/// velocity u. h <= 0 selects 1e-4 min{1, inj}.
double fd_hessian_quadratic_form(const WeightedDataset &ds, PExponent p,
                                 const Vector &x, const Vector &u, double h = 0.0);

} // namespace geomean
