#include "geomean/kernels.hpp"

#include "geomean/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace geomean {

namespace {

constexpr double kSeriesThreshold = 1e-4;

void require_finite(double v, const char *what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

void require_nonnegative_length(double l, const char *what) {
  require_finite(l, what);
  if (l < 0.0) {
    throw DomainError(std::string(what) + ": negative length " +
                      std::to_string(l));
  }
}

// x cot x, continuous at 0.
double x_cot_x(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x * std::cos(x) / std::sin(x);
}

// x coth x, continuous at 0.
double x_coth_x(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x / std::tanh(x);
}

} // namespace

double sn(Curvature kappa, double l) {
  require_finite(kappa.kappa, "sn");
  require_nonnegative_length(l, "sn");
  if (kappa.kappa > 0.0) {
    const double s = std::sqrt(kappa.kappa);
    return std::sin(s * l) / s;
  }
  if (kappa.kappa < 0.0) {
    const double s = std::sqrt(-kappa.kappa);
    return std::sinh(s * l) / s;
  }
  return l;
}

double ct(Curvature kappa, double l) {
  require_finite(kappa.kappa, "ct");
  require_finite(l, "ct");
  if (l <= 0.0) {
    throw DomainError("ct: length must be positive, got " + std::to_string(l));
  }
  if (kappa.kappa > 0.0) {
    const double s = std::sqrt(kappa.kappa);
    if (s * l >= std::numbers::pi) {
      throw DomainError("ct: sqrt(kappa)*l reaches the first conjugate point");
    }
    return s * std::cos(s * l) / std::sin(s * l);
  }
  if (kappa.kappa < 0.0) {
    const double s = std::sqrt(-kappa.kappa);
    return s / std::tanh(s * l);
  }
  return 1.0 / l;
}

double b_lower(Curvature kappa, double l) {
  require_finite(kappa.kappa, "b_lower");
  require_nonnegative_length(l, "b_lower");
  if (kappa.kappa < 0.0) {
    return 1.0;
  }
  const double x = std::sqrt(kappa.kappa) * l;
  if (x >= std::numbers::pi) {
    throw DomainError("b_lower: sqrt(kappa)*l must stay below pi");
  }
  return x_cot_x(x);
}

double c_upper(Curvature kappa, double l) {
  require_finite(kappa.kappa, "c_upper");
  require_nonnegative_length(l, "c_upper");
  if (kappa.kappa >= 0.0) {
    return 1.0;
  }
  return x_coth_x(std::sqrt(-kappa.kappa) * l);
}

namespace {

void validate_angles(const SecantProblem &prob) {
  require_finite(prob.alpha1, "secant");
  require_finite(prob.alpha2, "secant");
  if (prob.alpha1 < 0.0 || prob.alpha2 < 0.0) {
    throw DomainError("secant: angles must be nonnegative");
  }
  const double alpha = prob.alpha1 + prob.alpha2;
  if (alpha > std::numbers::pi * (1.0 + 1e-15)) {
    throw DomainError("secant: alpha1 + alpha2 exceeds pi");
  }
  if (alpha == 0.0) {
    throw DegenerateSecantError("secant: alpha1 + alpha2 = 0");
  }
}

} // namespace

double secant_sphere(const SecantProblem &prob, Curvature kappa) {
  if (!(kappa.kappa > 0.0) || !std::isfinite(kappa.kappa)) {
    throw DomainError("secant_sphere: requires kappa > 0");
  }
  validate_angles(prob);
  require_nonnegative_length(prob.b, "secant_sphere");
  require_nonnegative_length(prob.c, "secant_sphere");

  // Unit-sphere gauge.
  const double s = std::sqrt(kappa.kappa);
  const double b = prob.b * s;
  const double c = prob.c * s;
  if (b >= std::numbers::pi || c >= std::numbers::pi) {
    throw DomainError("secant_sphere: side length reaches pi/sqrt(kappa)");
  }

  // cot z = (cot b sin a2 + cot c sin a1) / sin(a1 + a2), multiplied through
  // by sin b sin c so that b = 0 or c = 0 stay finite.
  const double alpha = prob.alpha1 + prob.alpha2;
  const double num = std::sin(b) * std::sin(c) * std::sin(alpha);
  const double den = std::cos(b) * std::sin(c) * std::sin(prob.alpha2) +
                     std::cos(c) * std::sin(b) * std::sin(prob.alpha1);
  if (num == 0.0 && den == 0.0) {
    if (b == 0.0 || c == 0.0) {
      return 0.0;
    }
    throw DegenerateSecantError("secant_sphere: degenerate configuration");
  }
  return std::atan2(num, den) / s;
}

double secant_euclid(const SecantProblem &prob) {
  validate_angles(prob);
  require_nonnegative_length(prob.b, "secant_euclid");
  require_nonnegative_length(prob.c, "secant_euclid");

  const double num = prob.b * prob.c * std::sin(prob.alpha1 + prob.alpha2);
  const double den =
      prob.b * std::sin(prob.alpha1) + prob.c * std::sin(prob.alpha2);
  if (den == 0.0) {
    if (num == 0.0 && (prob.b == 0.0 || prob.c == 0.0)) {
      return 0.0;
    }
    throw DegenerateSecantError("secant_euclid: zero denominator");
  }
  return num / den;
}

} // namespace geomean
