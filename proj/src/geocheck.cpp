#include "geomean/geocheck.hpp"

#include "geomean/errors.hpp"
#include "geomean/frechet.hpp"
#include "geomean/kernels.hpp"
#include "geomean/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geomean {

namespace {

constexpr double kBallSlack = 1e-12;
constexpr int kMaxPoints = 8;

std::vector<double> random_weights(std::size_t n, Rng &rng) {
  std::vector<double> w(n);
  std::exponential_distribution<double> e(1.0);
  double sum = 0.0;
  for (double &wi : w) {
    wi = e(rng);
    sum += wi;
  }
  for (double &wi : w) {
    wi /= sum;
  }
  return w;
}

std::vector<Vector> random_points(const Manifold &m, const Vector &c, double r,
                                  std::size_t n, Rng &rng) {
  std::vector<Vector> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(m.random_point_in_ball(c, r, rng));
  }
  return pts;
}

} // namespace

double random_ball_radius(const Manifold &space, Rng &rng) {
  const double r_cx = std::min(space.constants().r_cx, 2.0);
  double r = 0.0;
  while (r == 0.0) {
    r = r_cx * (1.0 - uniform(rng));
  }
  return r;
}

double angle_at(const Manifold &space, const Vector &x, const Vector &y1,
                const Vector &y2) {
  const Vector v1 = space.log_map(x, y1);
  const Vector v2 = space.log_map(x, y2);
  const double n1 = space.norm(x, v1);
  const double n2 = space.norm(x, v2);
  if (n1 == 0.0 || n2 == 0.0) {
    throw DegenerateSecantError("angle undefined at a repeated vertex");
  }
  // atan2 form stays accurate for angles near 0 and pi.
  const Vector u1 = v1 / n1;
  const Vector u2 = v2 / n2;
  const Vector diff = u1 - u2;
  const Vector sum = u1 + u2;
  return 2.0 * std::atan2(space.norm(x, diff), space.norm(x, sum));
}

double secant_by_intersection(const TriangleInstance &tri) {
  const Manifold &m = tri.space;
  const Vector v1 = m.log_map(tri.x, tri.y1);
  const Vector v2 = m.log_map(tri.x, tri.y2);
  const double b = m.norm(tri.x, v1);
  if (tri.alpha1 == 0.0) {
    return b;
  }
  if (b == 0.0) {
    return 0.0;
  }
  const Vector e1 = v1 / b;
  Vector w = v2 - m.inner(tri.x, v2, e1) * e1;
  const double wn = m.norm(tri.x, w);
  if (wn <= 1e-14 * std::max(1.0, m.norm(tri.x, v2))) {
    throw DegenerateSecantError("secant_by_intersection: collinear triangle");
  }
  const Vector e2 = w / wn;
  const double alpha = angle_at(m, tri.x, tri.y1, tri.y2);
  if (tri.alpha1 < 0.0 || tri.alpha1 > alpha) {
    throw DomainError("secant_by_intersection: alpha1 outside [0, angle at x]");
  }
  const Vector n = -std::sin(tri.alpha1) * e1 + std::cos(tri.alpha1) * e2;

  // Side of the launched geodesic for the point at arc length s on y1 y2.
  const Vector side = m.log_map(tri.y1, tri.y2);
  const double L = m.norm(tri.y1, side);
  auto signed_side = [&](double s) {
    const Vector p = m.exp_map(tri.y1, (s / L) * side);
    return m.inner(tri.x, m.log_map(tri.x, p), n);
  };
  double lo = 0.0;
  double hi = L;
  double f_lo = signed_side(lo);
  if (f_lo >= 0.0) {
    return b;
  }
  if (signed_side(hi) < 0.0) {
    throw DegenerateSecantError("secant_by_intersection: no intersection with y1 y2");
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (signed_side(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double s = 0.5 * (lo + hi);
  return m.distance(tri.x, m.exp_map(tri.y1, (s / L) * side));
}

ComparisonReport comparison_check(const Manifold &space, int n_trials, std::uint64_t seed,
                                  int oracle_trials) {
  ComparisonReport rep;
  const double kappa = space.kind() == SpaceKind::Euclidean ? 0.0 : space.kappa();
  rep.exploratory = !(kappa > 0.0);
  for (int i = 0; i < n_trials; ++i) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(i));
    const Vector c = space.random_point(rng);
    const double r = random_ball_radius(space, rng);
    TriangleInstance tri{space, space.random_point_in_ball(c, r, rng),
                         space.random_point_in_ball(c, r, rng),
                         space.random_point_in_ball(c, r, rng), 0.0};
    ++rep.trials;
    double alpha = 0.0;
    try {
      alpha = angle_at(space, tri.x, tri.y1, tri.y2);
    } catch (const DegenerateSecantError &) {
      ++rep.skipped;
      continue;
    }
    if (!(alpha > 0.0)) {
      ++rep.skipped;
      continue;
    }
    tri.alpha1 = alpha * uniform(rng);
    const SecantProblem prob{space.distance(tri.x, tri.y1), space.distance(tri.x, tri.y2),
                             tri.alpha1, alpha - tri.alpha1};
    double z = 0.0;
    double z_tilde = 0.0;
    try {
      z_tilde = secant_euclid(prob);
      z = kappa > 0.0 ? secant_sphere(prob, Curvature(kappa)) : secant_by_intersection(tri);
    } catch (const DegenerateSecantError &) {
      ++rep.skipped;
      continue;
    }
    const double margin = z - z_tilde;
    rep.min_margin = std::min(rep.min_margin, margin);
    if (z < z_tilde - 1e-12) {
      ++rep.violations;
    }
    if (rep.oracle_checked < oracle_trials && kappa > 0.0) {
      try {
        const double zi = secant_by_intersection(tri);
        rep.max_oracle_error = std::max(rep.max_oracle_error, std::abs(zi - z));
        ++rep.oracle_checked;
      } catch (const DegenerateSecantError &) {
      }
    }
  }
  return rep;
}

Vector convex_combination(const Manifold &space, const Vector &x,
                          const std::vector<Vector> &points,
                          const std::vector<double> &weights, double t) {
  if (points.size() != weights.size() || points.empty()) {
    throw PreconditionError("convex_combination needs one weight per point");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw PreconditionError("convex_combination needs t in [0, 1]");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw PreconditionError("weights must lie in [0, 1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw PreconditionError("weights must sum to 1");
  }
  Vector v = Vector::Zero(x.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    v += (weights[i] / sum) * space.log_map(x, points[i]);
  }
  return space.exp_map(x, t * v);
}

Vector geodesic_chart(const Manifold &space, const Vector &c, const Vector &y) {
  space.validate_point(c);
  space.validate_point(y);
  switch (space.kind()) {
  case SpaceKind::Euclidean:
    return y;
  case SpaceKind::Hyperbolic: {
    const double r2 = -minkowski(c, c);
    return (r2 / -minkowski(c, y)) * y - c;
  }
  default: {
    double h = c.dot(y);
    Vector ys = y;
    if (space.is_quotient() && h < 0.0) {
      ys = -y;
      h = -h;
    }
    if (!(h > 1e-12)) {
      throw DomainError("geodesic chart: point outside the open hemisphere at c");
    }
    return ys / h - c;
  }
  }
}

MinNormPoint min_norm_point(const std::vector<Vector> &points, double tol) {
  if (points.empty()) {
    throw PreconditionError("min_norm_point of an empty set");
  }
  const std::size_t n = points.size();
  double scale = 0.0;
  for (const Vector &p : points) {
    scale = std::max(scale, p.squaredNorm());
  }
  scale = std::max(scale, 1e-300);

  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (points[i].squaredNorm() < points[start].squaredNorm()) {
      start = i;
    }
  }
  std::vector<std::size_t> S{start};
  std::vector<double> lambda{1.0};
  Vector x = points[start];

  auto combine = [&](const std::vector<double> &coef) {
    Vector out = Vector::Zero(x.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
      out += coef[i] * points[S[i]];
    }
    return out;
  };

  for (int outer = 0; outer < 1000; ++outer) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = x.dot(points[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= tol * scale ||
        std::find(S.begin(), S.end(), j) != S.end()) {
      break;
    }
    S.push_back(j);
    lambda.push_back(0.0);

    for (int inner = 0; inner < 1000; ++inner) {
      const Eigen::Index k = static_cast<Eigen::Index>(S.size());
      Eigen::MatrixXd A(k + 1, k + 1);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
          A(a, b) = points[S[a]].dot(points[S[b]]);
        }
        A(a, k) = 1.0;
        A(k, a) = 1.0;
      }
      A(k, k) = 0.0;
      rhs(k) = 1.0;
      const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
      std::vector<double> mu(sol.data(), sol.data() + k);

      if (std::all_of(mu.begin(), mu.end(), [](double v) { return v > 1e-15; })) {
        lambda = mu;
        x = combine(lambda);
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < S.size(); ++i) {
        if (mu[i] <= 1e-15) {
          const double denom = lambda[i] - mu[i];
          if (denom > 0.0) {
            theta = std::min(theta, lambda[i] / denom);
          }
        }
      }
      for (std::size_t i = 0; i < S.size(); ++i) {
        lambda[i] = lambda[i] + theta * (mu[i] - lambda[i]);
      }
      std::vector<std::size_t> S2;
      std::vector<double> l2;
      for (std::size_t i = 0; i < S.size(); ++i) {
        if (lambda[i] > 1e-15) {
          S2.push_back(S[i]);
          l2.push_back(lambda[i]);
        }
      }
      if (S2.empty()) {
        S2.push_back(S.back());
        l2.push_back(1.0);
      }
      const double total = std::accumulate(l2.begin(), l2.end(), 0.0);
      for (double &v : l2) {
        v /= total;
      }
      S = std::move(S2);
      lambda = std::move(l2);
      x = combine(lambda);
    }
  }

  MinNormPoint out;
  out.point = x;
  out.norm = x.norm();
  out.weights.assign(n, 0.0);
  for (std::size_t i = 0; i < S.size(); ++i) {
    out.weights[S[i]] = lambda[i];
  }
  return out;
}

bool hull_membership(const HullQuery &q, double tol) {
  if (q.vertices.empty()) {
    throw PreconditionError("hull of an empty vertex set");
  }
  Vector c;
  if (q.center) {
    c = *q.center;
  } else {
    std::vector<Vector> all = q.vertices;
    all.push_back(q.query);
    c = minimal_ball_estimate(q.space, all).center;
  }
  const Vector qc = geodesic_chart(q.space, c, q.query);
  std::vector<Vector> shifted;
  shifted.reserve(q.vertices.size());
  for (const Vector &v : q.vertices) {
    shifted.push_back(geodesic_chart(q.space, c, v) - qc);
  }
  return min_norm_point(shifted).norm <= tol;
}

TetheringReport tethering_check(const Manifold &space, int n_trials,
                                const std::vector<double> &t_grid, std::uint64_t seed,
                                int substeps) {
  TetheringReport rep;
  rep.exploratory = space.kind() == SpaceKind::Hyperbolic;
  const PExponent p2(2.0);
  for (int i = 0; i < n_trials; ++i) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(i));
    const Vector o = space.random_point(rng);
    const double rho = random_ball_radius(space, rng);
    const std::size_t n = 1 + static_cast<std::size_t>(uniform(rng) * kMaxPoints);
    std::vector<Vector> pts = random_points(space, o, rho, n, rng);
    const WeightedDataset ds =
        make_dataset(space, pts, random_weights(n, rng), o, rho);
    const Vector x = space.random_point_in_ball(o, rho, rng);
    const Vector v = -gradient(ds, p2, x);

    std::vector<double> ts = t_grid;
    if (ts.empty()) {
      ts.push_back(1.0 - uniform(rng));
    }
    for (double t : ts) {
      ++rep.trials;
      double worst = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= substeps + 1; ++j) {
        const double s = t * j / (substeps + 1);
        worst = std::min(worst, rho - space.distance(o, space.geodesic(x, v, s)));
      }
      rep.min_margin = std::min(rep.min_margin, worst);
      if (worst <= -kBallSlack) {
        ++rep.violations;
      }
    }
  }
  return rep;
}

HullTrapReport hull_trap_check(const Manifold &space, int n_trials, std::uint64_t seed,
                               int iterations) {
  HullTrapReport rep;
  const PExponent p2(2.0);
  for (int i = 0; i < n_trials; ++i) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(i));
    const Vector o = space.random_point(rng);
    const double rho = random_ball_radius(space, rng);
    const std::size_t n = 2 + static_cast<std::size_t>(uniform(rng) * (kMaxPoints - 1));
    std::vector<Vector> pts = random_points(space, o, rho, n, rng);
    const WeightedDataset ds = make_dataset(space, pts, random_weights(n, rng), o, rho);
    const double t = 1.0 - uniform(rng);
    Vector x = space.random_point_in_ball(o, rho, rng);
    ++rep.trials;
    bool inside = false;
    bool broke = false;
    for (int k = 0; k <= iterations; ++k) {
      const bool now = hull_membership({space, pts, x, o});
      if (inside && !now) {
        broke = true;
      }
      inside = inside || now;
      if (k < iterations) {
        x = one_step(ds, p2, x, t);
      }
    }
    rep.entered += inside ? 1 : 0;
    rep.violations += broke ? 1 : 0;
  }
  return rep;
}

} // namespace geomean
