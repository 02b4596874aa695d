#include "geomean/frechet.hpp"

#include "geomean/errors.hpp"
#include "geomean/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace geomean {

namespace {

constexpr double kWeightSumTol = 1e-9;

double power(double d, double e) {
  if (e == 0.0) {
    return 1.0;
  }
  return std::pow(d, e);
}

} // namespace

PExponent::PExponent(double p) : p_(p) {
  if (!std::isfinite(p) || p < 2.0) {
    throw PreconditionError("p must satisfy 2 <= p < infinity, got " +
                            std::to_string(p));
  }
}

std::vector<double> uniform_weights(std::size_t n) {
  return std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
}

WeightedDataset make_dataset(const Manifold &space, std::vector<Vector> points,
                             std::vector<double> weights, Vector center,
                             double radius) {
  if (points.empty()) {
    throw PreconditionError("dataset needs at least one point");
  }
  if (weights.size() != points.size()) {
    throw PreconditionError("dataset has " + std::to_string(points.size()) +
                            " points but " + std::to_string(weights.size()) +
                            " weights");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
      throw PreconditionError("weights must lie in [0, 1]");
    }
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw PreconditionError("weights sum to " + std::to_string(sum) +
                            ", expected 1");
  }
  for (double &w : weights) {
    w /= sum;
  }
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw PreconditionError("ball radius must be positive and finite");
  }
  space.validate_point(center);
  for (std::size_t i = 0; i < points.size(); ++i) {
    space.validate_point(points[i]);
    const double d = space.distance(center, points[i]);
    if (!(d < radius)) {
      throw PreconditionError("point " + std::to_string(i) + " lies at distance " +
                              std::to_string(d) + " >= ball radius " +
                              std::to_string(radius));
    }
  }
  WeightedDataset ds{space, std::move(points), std::move(weights), std::move(center),
                     radius, false};
  ds.uniqueness_certified = radius <= space.constants().r_cx;
  return ds;
}

double cost(const WeightedDataset &ds, PExponent p, const Vector &x) {
  const double pv = p.value();
  double f = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    f += ds.weights[i] * std::pow(ds.space.distance(x, ds.points[i]), pv);
  }
  return f / pv;
}

Vector gradient(const WeightedDataset &ds, PExponent p, const Vector &x) {
  const double e = p.value() - 2.0;
  Vector g = Vector::Zero(x.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.weights[i] == 0.0) {
      continue;
    }
    Vector v;
    try {
      v = ds.space.log_map(x, ds.points[i]);
    } catch (const CutLocusError &err) {
      throw CutLocusError(std::string("gradient undefined: data point ") +
                              std::to_string(i) + " is in the cut locus of x (" +
                              err.what() + ")",
                          i);
    }
    const double d = ds.space.norm(x, v);
    g -= ds.weights[i] * power(d, e) * v;
  }
  return g;
}

HessianBounds hessian_radial_bounds(const Manifold &space, double d) {
  const SpaceConstants k = space.constants();
  const double limit =
      std::min(k.inj, k.Delta > 0.0 ? std::numbers::pi / std::sqrt(k.Delta)
                                    : std::numeric_limits<double>::infinity());
  if (!(d >= 0.0) || !(d < limit)) {
    throw DomainError("Hessian bounds need 0 <= d < min{inj, pi/sqrt(Delta)} = " +
                      std::to_string(limit) + ", got d = " + std::to_string(d));
  }
  return {b_lower(Curvature(k.Delta), d), c_upper(Curvature(k.delta), d)};
}

HessianBounds hessian_radial_bounds(const Manifold &space, double d, PExponent p) {
  const HessianBounds base = hessian_radial_bounds(space, d);
  const double pm1 = p.value() - 1.0;
  const double scale = power(d, p.value() - 2.0);
  return {scale * std::min(pm1, base.lower), scale * std::max(pm1, base.upper)};
}

double hessian_bound_in_ball(const Manifold &space, double r, double rho, PExponent p) {
  const double reach = r + rho;
  const double c = c_upper(Curvature(space.constants().delta), reach);
  return power(reach, p.value() - 2.0) * std::max(p.value() - 1.0, c);
}

double uniform_hessian_bound(const Manifold &space, double rho, PExponent p) {
  const double r_cx = space.constants().r_cx;
  if (!(rho > 0.0) || rho > r_cx) {
    throw PreconditionError("uniform Hessian bound needs 0 < rho <= r_cx = " +
                            std::to_string(r_cx) + ", got rho = " +
                            std::to_string(rho));
  }
  return hessian_bound_in_ball(space, rho, rho, p);
}

HessianBounds ball_hessian_bounds(const WeightedDataset &ds, PExponent p,
                                  const Vector &c, double r) {
  const SpaceConstants k = ds.space.constants();
  const double e = p.value() - 2.0;
  const double pm1 = p.value() - 1.0;
  HessianBounds out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double di = ds.space.distance(c, ds.points[i]);
    const double near = std::max(0.0, di - r);
    const double far = di + r;
    // b_Delta decreases and c_delta increases, so both extremes sit at `far`.
    const double b = b_lower(Curvature(k.Delta), far);
    const double cu = c_upper(Curvature(k.delta), far);
    const double m = std::min(pm1, b);
    out.lower += ds.weights[i] * (m >= 0.0 ? power(near, e) : power(far, e)) * m;
    out.upper += ds.weights[i] * power(far, e) * std::max(pm1, cu);
  }
  return out;
}

double fd_hessian_quadratic_form(const WeightedDataset &ds, PExponent p,
                                 const Vector &x, const Vector &u, double h) {
  const Manifold &m = ds.space;
  if (h <= 0.0) {
    h = 1e-4 * std::min(1.0, m.constants().inj);
  }
  const double f0 = cost(ds, p, x);
  const double fp = cost(ds, p, m.exp_map(x, h * u));
  const double fm = cost(ds, p, m.exp_map(x, -h * u));
  return (fp - 2.0 * f0 + fm) / (h * h);
}

} // namespace geomean
