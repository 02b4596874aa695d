#include "geomean/solver.hpp"

#include "geomean/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace geomean {

namespace {

constexpr double kMonotoneSlack = 1e-12;
constexpr double kBallSlack = 1e-12;
constexpr int kMinimalBallIters = 200;
constexpr int kMeanSeedIters = 50;

bool inside(const Manifold &m, const Ball &b, const Vector &x) {
  return m.distance(b.center, x) < b.radius + kBallSlack;
}

} // namespace

std::string status_name(Status s) {
  switch (s) {
  case Status::Converged:
    return "converged";
  case Status::CutLocusAbort:
    return "cut_locus_abort";
  case Status::MaxIters:
    return "max_iters";
  }
  return "unknown";
}

Vector one_step(const WeightedDataset &ds, PExponent p, const Vector &x, double t) {
  const Vector g = gradient(ds, p, x);
  if (g.isZero(0.0)) {
    return x;
  }
  return ds.space.exp_map(x, -t * g);
}

Trace descend(const WeightedDataset &ds, const SolverConfig &cfg) {
  const Manifold &m = ds.space;
  const PExponent p(cfg.p);
  if (!(cfg.grad_tol > 0.0)) {
    throw PreconditionError("grad_tol must be positive");
  }
  if (cfg.max_iters < 1) {
    throw PreconditionError("max_iters must be >= 1");
  }
  if (cfg.record_substeps < 0) {
    throw PreconditionError("record_substeps must be >= 0");
  }

  Trace tr;
  tr.step = resolve(cfg.policy, m, ds.radius, p);
  tr.uniqueness_certified = ds.uniqueness_certified;
  if (cfg.monitor_ball) {
    tr.monitor = *cfg.monitor_ball;
  } else {
    tr.monitor = {ds.center,
                  tr.step.stay_ball_radius > 0.0 ? tr.step.stay_ball_radius : ds.radius};
  }
  m.validate_point(tr.monitor.center);

  if (cfg.hessian_bound) {
    tr.hessian_bound = *cfg.hessian_bound;
  } else {
    const double offset = m.distance(tr.monitor.center, ds.center);
    const double reach = tr.monitor.radius + offset + ds.radius;
    if (reach <= m.constants().inj) {
      tr.hessian_bound = hessian_bound_in_ball(m, tr.monitor.radius + offset, ds.radius, p);
    }
  }

  const double t = tr.step.t;
  const bool descent_applies =
      tr.hessian_bound > 0.0 && t < 2.0 / tr.hessian_bound;

  Vector x = cfg.x0 ? *cfg.x0 : ds.center;
  m.validate_point(x);
  double fx = cost(ds, p, x);

  for (int k = 0;; ++k) {
    Iterate it;
    it.k = k;
    it.point = x;
    it.cost = fx;
    it.dist_to_o = m.distance(ds.center, x);
    if (!inside(m, tr.monitor, x)) {
      tr.verdicts.stayed_in_ball = false;
      tr.verdicts.continuously_stayed = false;
    }

    Vector g;
    try {
      g = gradient(ds, p, x);
    } catch (const CutLocusError &err) {
      it.grad_norm = std::numeric_limits<double>::quiet_NaN();
      tr.iterates.push_back(it);
      tr.status = Status::CutLocusAbort;
      tr.cut = CutLocusReport{k, x, err.index(), err.what()};
      break;
    }
    const double gn = m.norm(x, g);
    it.grad_norm = gn;
    if (gn <= cfg.grad_tol) {
      tr.iterates.push_back(it);
      tr.status = Status::Converged;
      tr.verdicts.converged = true;
      break;
    }
    if (k == cfg.max_iters) {
      tr.iterates.push_back(it);
      tr.status = Status::MaxIters;
      break;
    }
    it.step_used = t;
    tr.iterates.push_back(it);

    const Vector v = -g;
    bool segment_inside = inside(m, tr.monitor, x);
    for (int j = 1; j <= cfg.record_substeps; ++j) {
      const double s = t * j / (cfg.record_substeps + 1);
      if (!inside(m, tr.monitor, m.geodesic(x, v, s))) {
        segment_inside = false;
        break;
      }
    }
    const Vector next = m.exp_map(x, t * v);
    segment_inside = segment_inside && inside(m, tr.monitor, next);
    if (!segment_inside) {
      tr.verdicts.continuously_stayed = false;
    }

    const double fnext = cost(ds, p, next);
    if (fnext > fx + kMonotoneSlack) {
      tr.verdicts.monotone_cost = false;
    }
    if (descent_applies && segment_inside) {
      const double predicted = fx - gn * gn * t * (1.0 - tr.hessian_bound * t / 2.0);
      const double excess = fnext - predicted;
      ++tr.descent_checks;
      tr.max_descent_excess = std::max(tr.max_descent_excess, excess);
      if (excess > kDescentSlack) {
        ++tr.descent_violations;
      }
    }
    x = next;
    fx = fnext;
  }
  tr.final_point = tr.iterates.back().point;
  return tr;
}

MultistartResult multistart_uniqueness(const WeightedDataset &ds, const SolverConfig &cfg,
                                       int n_starts, std::uint64_t seed) {
  if (n_starts < 1) {
    throw PreconditionError("multistart needs at least one start");
  }
  if (!ds.uniqueness_certified) {
    throw PreconditionError("multistart uniqueness needs rho <= r_cx");
  }
  std::vector<std::future<Vector>> jobs;
  jobs.reserve(n_starts);
  for (int i = 0; i < n_starts; ++i) {
    jobs.push_back(std::async(std::launch::async, [&ds, cfg, seed, i]() {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(i));
      SolverConfig local = cfg;
      local.x0 = ds.space.random_point_in_ball(ds.center, ds.radius, rng);
      return descend(ds, local).final_point;
    }));
  }
  MultistartResult out;
  for (auto &job : jobs) {
    out.finals.push_back(job.get());
  }
  for (std::size_t i = 0; i < out.finals.size(); ++i) {
    for (std::size_t j = i + 1; j < out.finals.size(); ++j) {
      out.spread = std::max(out.spread, ds.space.distance(out.finals[i], out.finals[j]));
    }
  }
  out.all_agree = out.spread <= 10.0 * cfg.grad_tol;
  return out;
}

Ball minimal_ball_estimate(const Manifold &space, const std::vector<Vector> &points) {
  if (points.empty()) {
    throw PreconditionError("minimal ball of an empty set");
  }
  for (const Vector &x : points) {
    space.validate_point(x);
  }
  const double r_cx = space.constants().r_cx;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = space.distance(points[i], points[j]);
      if (!(d < 2.0 * r_cx)) {
        throw PreconditionError("points spread too far for a convex ball: pairwise "
                                "distance " + std::to_string(d) + " >= 2 r_cx");
      }
    }
  }

  auto farthest = [&](const Vector &c) {
    std::size_t idx = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = space.distance(c, points[i]);
      if (d > best) {
        best = d;
        idx = i;
      }
    }
    return std::pair{idx, best};
  };

  Vector c = points.front();
  for (int it = 0; it < kMeanSeedIters; ++it) {
    Vector mean = Vector::Zero(c.size());
    for (const Vector &x : points) {
      mean += space.log_map(c, x);
    }
    c = space.exp_map(c, mean / static_cast<double>(points.size()));
  }

  Ball best{c, farthest(c).second};
  for (int k = 1; k <= kMinimalBallIters; ++k) {
    const auto [idx, r] = farthest(c);
    if (r < best.radius) {
      best = {c, r};
    }
    const double eta = 1.0 / (k + 1);
    c = space.exp_map(c, eta * space.log_map(c, points[idx]));
  }
  const double r = farthest(c).second;
  if (r < best.radius) {
    best = {c, r};
  }
  return best;
}

RateCheck check_rate_bound(const WeightedDataset &ds, PExponent p, const Trace &trace,
                           const Vector &xbar, double resolution) {
  const Manifold &m = ds.space;
  const auto &its = trace.iterates;
  const double t = trace.step.t;
  const double r_cx = m.constants().r_cx;
  RateCheck out;
  if (its.empty()) {
    return out;
  }
  std::vector<double> dist(its.size());
  for (std::size_t k = 0; k < its.size(); ++k) {
    dist[k] = m.distance(its[k].point, xbar);
  }
  std::vector<double> tail(its.size());
  double running = 0.0;
  for (std::size_t k = its.size(); k-- > 0;) {
    running = std::max(running, dist[k]);
    tail[k] = running;
  }

  for (std::size_t k = 0; k < its.size(); ++k) {
    if (!(tail[k] < r_cx)) {
      continue;
    }
    HessianBounds hb;
    try {
      hb = ball_hessian_bounds(ds, p, xbar, tail[k]);
    } catch (const DomainError &) {
      continue;
    }
    if (hb.lower > 0.0 && t < 2.0 / hb.upper) {
      const double gap = std::max(0.0, its[k].cost - cost(ds, p, xbar));
      out.applicable = true;
      out.k_prime = static_cast<int>(k);
      out.estimate = rate_estimate(hb.lower, hb.upper, t, gap);
      break;
    }
  }
  if (!out.applicable) {
    return out;
  }
  const RateEstimate &e = out.estimate;
  for (std::size_t k = out.k_prime; k < its.size(); ++k) {
    if (dist[k] <= resolution) {
      continue;
    }
    const double half = 0.5 * static_cast<double>(k - out.k_prime);
    const double bound = e.K * std::pow(e.q, half);
    ++out.checked;
    const double ratio = bound > 0.0 ? dist[k] / bound : std::numeric_limits<double>::infinity();
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (dist[k] > bound * (1.0 + 1e-9)) {
      ++out.violations;
    }
  }
  return out;
}

} // namespace geomean
