#include "geomean/manifold.hpp"

#include "geomean/errors.hpp"
#include "geomean/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace geomean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCutRelTol = 1e-9;

void require(bool ok, const std::string &msg) {
  if (!ok) {
    throw InvalidPoint(msg);
  }
}

} // namespace

double convexity_radius(double inj, double Delta) {
  const double conj = Delta > 0.0 ? std::numbers::pi / std::sqrt(Delta) : kInf;
  return 0.5 * std::min(inj, conj);
}

double minkowski(const Vector &u, const Vector &v) {
  return -u(0) * v(0) + u.tail(u.size() - 1).dot(v.tail(v.size() - 1));
}

Manifold::Manifold(SpaceKind kind, int dim, double kappa)
    : kind_(kind), dim_(dim), kappa_(kappa) {
  if (dim < 1) {
    throw PreconditionError("manifold dimension must be >= 1");
  }
  if (!std::isfinite(kappa)) {
    throw PreconditionError("curvature must be finite");
  }
}

Manifold Manifold::euclidean(int n) { return {SpaceKind::Euclidean, n, 0.0}; }

Manifold Manifold::sphere(int n, double kappa) {
  if (!(kappa > 0.0)) {
    throw PreconditionError("sphere requires kappa > 0");
  }
  return {SpaceKind::Sphere, n, kappa};
}

Manifold Manifold::hyperbolic(int n, double kappa) {
  if (!(kappa < 0.0)) {
    throw PreconditionError("hyperbolic space requires kappa < 0");
  }
  return {SpaceKind::Hyperbolic, n, kappa};
}

Manifold Manifold::circle(double kappa) {
  if (!(kappa > 0.0)) {
    throw PreconditionError("circle requires kappa > 0");
  }
  return {SpaceKind::Circle, 1, kappa};
}

Manifold Manifold::so3() { return {SpaceKind::SO3, 3, 0.25}; }

Manifold Manifold::real_projective(int n, double kappa) {
  if (!(kappa > 0.0)) {
    throw PreconditionError("real projective space requires kappa > 0");
  }
  return {SpaceKind::RealProjective, n, kappa};
}

int Manifold::ambient_dim() const {
  return kind_ == SpaceKind::Euclidean ? dim_ : dim_ + 1;
}

std::string Manifold::name() const {
  switch (kind_) {
  case SpaceKind::Euclidean:
    return "euclidean";
  case SpaceKind::Sphere:
    return "sphere";
  case SpaceKind::Hyperbolic:
    return "hyperbolic";
  case SpaceKind::Circle:
    return "circle";
  case SpaceKind::SO3:
    return "so3";
  case SpaceKind::RealProjective:
    return "real_projective";
  }
  return "unknown";
}

double Manifold::radius() const {
  return kappa_ == 0.0 ? kInf : 1.0 / std::sqrt(std::abs(kappa_));
}

SpaceConstants Manifold::constants() const {
  SpaceConstants c;
  switch (kind_) {
  case SpaceKind::Euclidean:
    c.inj = kInf;
    c.delta = c.Delta = 0.0;
    break;
  case SpaceKind::Hyperbolic:
    c.inj = kInf;
    c.delta = c.Delta = kappa_;
    break;
  case SpaceKind::Sphere:
    c.inj = std::numbers::pi * radius();
    c.delta = c.Delta = kappa_;
    break;
  case SpaceKind::Circle:
    // One-dimensional: no sectional curvature, only topology.
    c.inj = std::numbers::pi * radius();
    c.delta = c.Delta = 0.0;
    break;
  case SpaceKind::SO3:
  case SpaceKind::RealProjective:
    c.inj = 0.5 * std::numbers::pi * radius();
    c.delta = c.Delta = kappa_;
    break;
  }
  c.r_cx = convexity_radius(c.inj, c.Delta);
  return c;
}

double Manifold::cut_tolerance() const {
  const double inj = constants().inj;
  return std::isfinite(inj) ? kCutRelTol * inj : 0.0;
}

double Manifold::inner(const Vector &, const Vector &u, const Vector &v) const {
  if (kind_ == SpaceKind::Hyperbolic) {
    return minkowski(u, v);
  }
  return u.dot(v);
}

double Manifold::norm(const Vector &x, const Vector &v) const {
  return std::sqrt(std::max(0.0, inner(x, v, v)));
}

bool Manifold::is_valid_point(const Vector &x, double tol) const {
  if (x.size() != ambient_dim() || !x.allFinite()) {
    return false;
  }
  switch (kind_) {
  case SpaceKind::Euclidean:
    return true;
  case SpaceKind::Hyperbolic: {
    const double r2 = radius() * radius();
    const double scale = std::max(r2, x.squaredNorm());
    return x(0) > 0.0 && std::abs(minkowski(x, x) + r2) <= tol * scale;
  }
  default:
    return std::abs(x.squaredNorm() - 1.0) <= tol;
  }
}

void Manifold::validate_point(const Vector &x) const {
  require(x.size() == ambient_dim(),
          name() + ": point has " + std::to_string(x.size()) +
              " coordinates, expected " + std::to_string(ambient_dim()));
  require(x.allFinite(), name() + ": point has non-finite coordinates");
  require(is_valid_point(x), name() + ": point violates its representation constraint");
}

void Manifold::validate_tangent(const Vector &x, const Vector &v) const {
  require(v.size() == ambient_dim(), name() + ": tangent vector has wrong size");
  require(v.allFinite(), name() + ": tangent vector has non-finite coordinates");
  if (kind_ == SpaceKind::Euclidean) {
    return;
  }
  const double scale = 1.0 + v.norm() * x.norm();
  require(std::abs(inner(x, x, v)) <= 1e-10 * scale,
          name() + ": vector is not tangent at the base point");
}

Vector Manifold::project_point(const Vector &x) const {
  switch (kind_) {
  case SpaceKind::Euclidean:
    return x;
  case SpaceKind::Hyperbolic: {
    Vector y = x;
    const double r = radius();
    y(0) = std::sqrt(r * r + y.tail(y.size() - 1).squaredNorm());
    return y;
  }
  default: {
    const double n = x.norm();
    require(n > 0.0, name() + ": cannot project the zero vector");
    Vector y = x / n;
    if (is_quotient()) {
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 0.0) {
          if (y(i) < 0.0) {
            y = -y;
          }
          break;
        }
      }
    }
    return y;
  }
  }
}

Vector Manifold::project_tangent(const Vector &x, const Vector &v) const {
  switch (kind_) {
  case SpaceKind::Euclidean:
    return v;
  case SpaceKind::Hyperbolic: {
    const double r2 = radius() * radius();
    return v + (minkowski(x, v) / r2) * x;
  }
  default:
    return v - x.dot(v) * x;
  }
}

Vector Manifold::nearest_lift(const Vector &x, const Vector &y) const {
  if (is_quotient() && x.dot(y) < 0.0) {
    return -y;
  }
  return y;
}

double Manifold::distance(const Vector &x, const Vector &y) const {
  validate_point(x);
  validate_point(y);
  switch (kind_) {
  case SpaceKind::Euclidean:
    return (x - y).norm();
  case SpaceKind::Hyperbolic: {
    const Vector w = x - y;
    const double chord = std::sqrt(std::max(0.0, minkowski(w, w)));
    const double r = radius();
    return 2.0 * r * std::asinh(chord / (2.0 * r));
  }
  default: {
    const Vector ys = nearest_lift(x, y);
    return radius() * 2.0 * std::atan2((x - ys).norm(), (x + ys).norm());
  }
  }
}

Vector Manifold::exp_map(const Vector &x, const Vector &v) const {
  validate_point(x);
  validate_tangent(x, v);
  if (kind_ == SpaceKind::Euclidean) {
    return x + v;
  }
  const Vector u = project_tangent(x, v);
  const double nv = norm(x, u);
  if (nv == 0.0) {
    return project_point(x);
  }
  const double r = radius();
  const double theta = nv / r;
  if (kind_ == SpaceKind::Hyperbolic) {
    return project_point(std::cosh(theta) * x + (r * std::sinh(theta) / nv) * u);
  }
  return project_point(std::cos(theta) * x + (std::sin(theta) / theta) * (u / r));
}

Vector Manifold::log_map(const Vector &x, const Vector &y) const {
  const double d = distance(x, y);
  if (kind_ == SpaceKind::Euclidean) {
    return y - x;
  }
  const double inj = constants().inj;
  if (std::isfinite(inj) && d >= inj - cut_tolerance()) {
    throw CutLocusError(name() + ": log_map target lies on the cut locus (d = " +
                        std::to_string(d) + ")");
  }
  if (d == 0.0) {
    return Vector::Zero(x.size());
  }
  const Vector diff = nearest_lift(x, y) - x;
  const Vector u = project_tangent(x, diff);
  const double nu = norm(x, u);
  if (nu == 0.0) {
    return Vector::Zero(x.size());
  }
  return (d / nu) * u;
}

Vector Manifold::geodesic(const Vector &x, const Vector &v, double t) const {
  return exp_map(x, t * v);
}

Vector Manifold::base_point() const {
  Vector x = Vector::Zero(ambient_dim());
  if (kind_ == SpaceKind::Euclidean) {
    return x;
  }
  x(0) = kind_ == SpaceKind::Hyperbolic ? radius() : 1.0;
  return x;
}

Vector Manifold::random_unit_tangent(const Vector &x, Rng &rng) const {
  std::normal_distribution<double> normal;
  for (;;) {
    Vector g(ambient_dim());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      g(i) = normal(rng);
    }
    const Vector u = project_tangent(x, g);
    const double nu = norm(x, u);
    if (nu > 1e-8) {
      return u / nu;
    }
  }
}

Vector Manifold::random_point_in_ball(const Vector &center, double radius_ball,
                                      Rng &rng) const {
  validate_point(center);
  if (!(radius_ball >= 0.0)) {
    throw PreconditionError("ball radius must be nonnegative");
  }
  if (radius_ball >= constants().inj) {
    throw PreconditionError(name() + ": ball radius must stay below inj");
  }
  const int n = dim_;
  const Curvature model(kind_ == SpaceKind::Euclidean ? 0.0 : kappa_);
  // Rejection sampling against the Euclidean radial law r^{n-1}.
  double r = 0.0;
  for (;;) {
    r = radius_ball * std::pow(uniform(rng), 1.0 / n);
    if (n == 1 || model.kappa == 0.0 || r == 0.0) {
      break;
    }
    double ratio = std::pow(sn(model, r) / r, n - 1);
    if (model.kappa < 0.0) {
      ratio /= std::pow(sn(model, radius_ball) / radius_ball, n - 1);
    }
    if (uniform(rng) < ratio) {
      break;
    }
  }
  const Vector u = random_unit_tangent(center, rng);
  return exp_map(center, r * u);
}

Vector Manifold::random_point(Rng &rng) const {
  if (kind_ == SpaceKind::Euclidean || kind_ == SpaceKind::Hyperbolic) {
    return random_point_in_ball(base_point(), 2.0, rng);
  }
  std::normal_distribution<double> normal;
  Vector g(ambient_dim());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    g(i) = normal(rng);
  }
  return project_point(g);
}

Vector Manifold::circle_point(double theta) const {
  if (kind_ != SpaceKind::Circle && !(kind_ == SpaceKind::Sphere && dim_ == 1)) {
    throw PreconditionError("circle_point requires a one-dimensional sphere");
  }
  Vector x(2);
  x << std::cos(theta), std::sin(theta);
  return x;
}

double Manifold::circle_angle(const Vector &x) const {
  validate_point(x);
  return std::atan2(x(1), x(0));
}

} // namespace geomean
