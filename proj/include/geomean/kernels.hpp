#pragma once

// Scalar curvature kernels used by the Hessian estimates of the squared
// distance function and by the secant comparison formulas.
//
// Every function is total: out-of-domain arguments raise DomainError instead
// of producing NaN or infinities.

namespace geomean {

/// Sectional curvature value (units 1/length^2).
struct Curvature {
  double kappa = 0.0;

  constexpr Curvature() = default;
  constexpr explicit Curvature(double k) : kappa(k) {}
};

/// Generalized sine sn_kappa(l): sin(sqrt(k) l)/sqrt(k), l, sinh(sqrt(-k) l)/sqrt(-k).
///
/// Note on kappa = 0: the branch returns l, the Jacobi-field sine. A literal
/// reading of the 1/l printed in some references is inconsistent with the
/// kappa -> 0 limit of the other two branches and with the ratio
/// sn(r - rho)/sn(r + rho) it feeds, which must vanish at r = rho.
double sn(Curvature kappa, double l);

/// Generalized cotangent ct_kappa(l); requires l > 0 and, for kappa > 0,
/// sqrt(kappa) l < pi.
double ct(Curvature kappa, double l);

/// Lower Hessian factor b_kappa(l) = sqrt(k) l cot(sqrt(k) l) for k >= 0 and 1
/// for k < 0. Equals 1 at l = 0.
double b_lower(Curvature kappa, double l);

/// Upper Hessian factor c_kappa(l) = 1 for k >= 0 and
/// sqrt(-k) l coth(sqrt(-k) l) for k < 0. Equals 1 at l = 0.
double c_upper(Curvature kappa, double l);

/// Triangle data for the secant through vertex x: sides b = |x y1|,
/// c = |x y2|, and the split alpha1 + alpha2 of the angle at x.
struct SecantProblem {
  double b = 0.0;
  double c = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

/// Length of the geodesic secant from x to side y1y2 on the sphere of
/// curvature kappa > 0.
double secant_sphere(const SecantProblem &prob, Curvature kappa);

/// Length of the corresponding secant in the Euclidean comparison triangle.
double secant_euclid(const SecantProblem &prob);

} // namespace geomean
