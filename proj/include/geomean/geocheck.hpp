#pragma once

#include "geomean/manifold.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace geomean {

/// Triangle x y1 y2 with a secant leaving x at angle alpha1 off side x y1.
struct TriangleInstance {
  Manifold space;
  Vector x;
  Vector y1;
  Vector y2;
  double alpha1 = 0.0;
};

/// Angle at x between the minimal geodesics to y1 and y2.
double angle_at(const Manifold &space, const Vector &x, const Vector &y1, const Vector &y2);

/// Length of the secant from x to side y1 y2, found by bisection along y1 y2
/// on the side of the launched geodesic. Independent of the closed forms.
double secant_by_intersection(const TriangleInstance &tri);

struct ComparisonReport {
  int trials = 0;
  int skipped = 0;
  int violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  /// max |secant_by_intersection - closed form| over the first oracle_trials.
  int oracle_checked = 0;
  double max_oracle_error = 0.0;
  bool exploratory = false;
};

/// Samples triangles in random balls of radius <= r_cx and compares the
/// secant z with its Euclidean comparison value. For kappa > 0 z comes from
/// secant_sphere; otherwise from the intersection oracle (exploratory).
ComparisonReport comparison_check(const Manifold &space, int n_trials, std::uint64_t seed,
                                  int oracle_trials = 0);

/// exp_x(t sum_i w_i log_x x_i).
Vector convex_combination(const Manifold &space, const Vector &x,
                          const std::vector<Vector> &points,
                          const std::vector<double> &weights, double t);

/// Chart centered at c that maps geodesics to straight lines: gnomonic for
/// kappa > 0, Klein for kappa < 0, identity for kappa = 0.
Vector geodesic_chart(const Manifold &space, const Vector &c, const Vector &y);

/// Distance from the origin to conv(points) and the minimizing weights
/// (Wolfe's minimum-norm-point algorithm).
struct MinNormPoint {
  Vector point;
  std::vector<double> weights;
  double norm = 0.0;
};
MinNormPoint min_norm_point(const std::vector<Vector> &points, double tol = 1e-12);

struct HullQuery {
  Manifold space;
  std::vector<Vector> vertices;
  Vector query;
  /// Chart center; defaults to the minimal-ball center of vertices and query.
  std::optional<Vector> center;
};

inline constexpr double kHullTol = 1e-9;

bool hull_membership(const HullQuery &q, double tol = kHullTol);

struct TetheringReport {
  int trials = 0;
  int violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  bool exploratory = false;
};

/// For random balls B(o, rho), data, weights and x in the ball, checks that
/// the segment t -> exp_x(-t grad f_2(x)) up to each t in t_grid stays in the
/// ball. An empty t_grid draws t uniformly from (0, 1] per trial.
TetheringReport tethering_check(const Manifold &space, int n_trials,
                                const std::vector<double> &t_grid, std::uint64_t seed,
                                int substeps = 16);

struct HullTrapReport {
  int trials = 0;
  /// Trials in which some iterate entered the hull.
  int entered = 0;
  /// Trials in which an iterate left the hull after entering it.
  int violations = 0;
};

/// Runs short descents with random t in (0, 1] from random starts in B(o, rho)
/// and checks that the hull of the data is absorbing.
HullTrapReport hull_trap_check(const Manifold &space, int n_trials, std::uint64_t seed,
                               int iterations = 25);

/// Random ball radius in (0, r_cx] (capped at 2 for unbounded r_cx).
double random_ball_radius(const Manifold &space, Rng &rng);

} // namespace geomean
