#pragma once

#include "geomean/random.hpp"

#include <Eigen/Dense>

#include <string>

namespace geomean {

/// Points and tangent vectors are stored in ambient coordinates:
///  - Euclidean(n): plain vectors in R^n.
///  - Sphere(n), Circle, RealProjective(n): unit vectors in R^{n+1}.
///  - SO3: unit quaternions (w, x, y, z), i.e. RealProjective(3) with the
///    rotation-angle metric (curvature 1/4).
///  - Hyperbolic(n): the upper sheet of <x, x>_L = -1/|kappa| in R^{n+1}.
///
/// Tangent vectors at x are ambient vectors orthogonal to x (Minkowski
/// orthogonal for Hyperbolic) whose ambient norm equals the Riemannian
/// length. For the unit-vector models this means the unit-sphere velocity is
/// scaled by 1/sqrt(kappa).
using Vector = Eigen::VectorXd;

enum class SpaceKind { Euclidean, Sphere, Hyperbolic, Circle, SO3, RealProjective };

struct SpaceConstants {
  double inj = 0.0;   ///< injectivity radius (infinity when unbounded)
  double r_cx = 0.0;  ///< convexity radius 1/2 min{inj, pi/sqrt(Delta)}
  double delta = 0.0; ///< lower sectional-curvature bound
  double Delta = 0.0; ///< upper sectional-curvature bound
};

/// Convexity radius for an injectivity radius and curvature upper bound.
double convexity_radius(double inj, double Delta);

/// Constant-curvature model space. Immutable; all operations are const and
/// safe to share across threads.
class Manifold {
public:
  static Manifold euclidean(int n);
  static Manifold sphere(int n, double kappa = 1.0);
  static Manifold hyperbolic(int n, double kappa = -1.0);
  static Manifold circle(double kappa = 1.0);
  static Manifold so3();
  static Manifold real_projective(int n, double kappa = 1.0);

  SpaceKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int ambient_dim() const;
  /// Curvature of the metric model (the circle reports its embedding
  /// curvature here; its Hessian bounds in constants() are flat).
  double kappa() const { return kappa_; }
  std::string name() const;

  SpaceConstants constants() const;
  /// Absolute band below inj inside which log_map reports a cut-locus hit.
  double cut_tolerance() const;

  double inner(const Vector &x, const Vector &u, const Vector &v) const;
  double norm(const Vector &x, const Vector &v) const;

  double distance(const Vector &x, const Vector &y) const;
  Vector exp_map(const Vector &x, const Vector &v) const;
  /// Throws CutLocusError when d(x, y) >= inj - cut_tolerance().
  Vector log_map(const Vector &x, const Vector &y) const;
  Vector geodesic(const Vector &x, const Vector &v, double t) const;

  /// Re-projects onto the representation constraint and canonicalizes the
  /// representative of quotient spaces (first nonzero coordinate positive).
  Vector project_point(const Vector &x) const;
  Vector project_tangent(const Vector &x, const Vector &v) const;

  bool is_valid_point(const Vector &x, double tol = 1e-12) const;
  void validate_point(const Vector &x) const;
  void validate_tangent(const Vector &x, const Vector &v) const;

  /// Distinguished base point: e_0, the hyperboloid apex, the identity
  /// quaternion, or the origin.
  Vector base_point() const;

  /// Uniform sample in the geodesic ball B(center, radius) (density
  /// proportional to sn_kappa(r)^{n-1} in polar coordinates). Requires
  /// radius < inj.
  Vector random_point_in_ball(const Vector &center, double radius, Rng &rng) const;
  /// Uniform sample on compact spaces; a point in B(base, 2) otherwise.
  Vector random_point(Rng &rng) const;
  Vector random_unit_tangent(const Vector &x, Rng &rng) const;

  /// Circle helpers: the point at angle theta and the angle of a point.
  Vector circle_point(double theta) const;
  double circle_angle(const Vector &x) const;

  bool is_quotient() const {
    return kind_ == SpaceKind::RealProjective || kind_ == SpaceKind::SO3;
  }
  bool is_spherical_family() const {
    return kind_ == SpaceKind::Sphere || kind_ == SpaceKind::Circle ||
           kind_ == SpaceKind::RealProjective || kind_ == SpaceKind::SO3;
  }

private:
  Manifold(SpaceKind kind, int dim, double kappa);

  double radius() const; // 1/sqrt(|kappa|) for curved models

  Vector nearest_lift(const Vector &x, const Vector &y) const;

  SpaceKind kind_;
  int dim_;
  double kappa_;
};

/// Minkowski pairing -u0 v0 + sum_i ui vi.
double minkowski(const Vector &u, const Vector &v);

} // namespace geomean
