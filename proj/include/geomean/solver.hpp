#pragma once

#include "geomean/frechet.hpp"
#include "geomean/stepsize.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace geomean {

struct Ball {
  Vector center;
  double radius = 0.0;
};

struct SolverConfig {
  double p = 2.0;
  StepPolicy policy = UserConstant{1.0};
  double grad_tol = 1e-10;
  int max_iters = 10000;
  /// Ball the verdicts are checked against. Defaults to B(o, stay radius of
  /// the policy), or B(o, rho) when the policy gives none.
  std::optional<Ball> monitor_ball;
  /// Interior geodesic samples per step for the continuous-stay check.
  int record_substeps = 16;
  /// Defaults to the dataset's ball center.
  std::optional<Vector> x0;
  /// Hessian upper bound for the descent-inequality monitor. Defaults to the
  /// bound over the monitor ball.
  std::optional<double> hessian_bound;
};

struct Iterate {
  int k = 0;
  Vector point;
  double cost = 0.0;
  /// NaN when the gradient is undefined (cut-locus abort).
  double grad_norm = 0.0;
  double dist_to_o = 0.0;
  /// Step-size applied to reach the next iterate; 0 for the last one.
  double step_used = 0.0;
};

struct Verdicts {
  bool monotone_cost = true;
  bool stayed_in_ball = true;
  bool continuously_stayed = true;
  bool converged = false;
};

enum class Status { Converged, CutLocusAbort, MaxIters };

std::string status_name(Status s);

struct CutLocusReport {
  int k = 0;
  Vector point;
  std::size_t data_index = 0;
  std::string message;
};

struct Trace {
  std::vector<Iterate> iterates;
  Verdicts verdicts;
  Status status = Status::MaxIters;
  Vector final_point;
  ResolvedStep step;
  Ball monitor;
  bool uniqueness_certified = false;
  double hessian_bound = 0.0;
  /// Steps where the descent inequality applied, and how many broke it.
  int descent_checks = 0;
  int descent_violations = 0;
  /// Largest f(x^{k+1}) - [f(x^k) - t |g|^2 (1 - H t / 2)] over checked steps.
  double max_descent_excess = -std::numeric_limits<double>::infinity();
  std::optional<CutLocusReport> cut;
};

/// Slack used by the descent-inequality monitor.
inline constexpr double kDescentSlack = 1e-10;

/// x^{k+1} = exp_{x^k}(-t grad f_p(x^k)).
Vector one_step(const WeightedDataset &ds, PExponent p, const Vector &x, double t);

/// Constant step-size gradient descent with runtime monitors.
Trace descend(const WeightedDataset &ds, const SolverConfig &cfg);

struct MultistartResult {
  bool all_agree = false;
  double spread = 0.0;
  std::vector<Vector> finals;
};

/// Runs descend from n_starts uniform starts in B(o, rho); requires rho <= r_cx.
MultistartResult multistart_uniqueness(const WeightedDataset &ds, const SolverConfig &cfg,
                                       int n_starts, std::uint64_t seed);

/// Approximate minimal enclosing geodesic ball of `points`.
Ball minimal_ball_estimate(const Manifold &space, const std::vector<Vector> &points);

/// Checks d(x^k, xbar) <= K q^{(k-k')/2} along a trace. For each k the region
/// S is the ball around xbar holding the remaining tail; k' is the first index
/// where S is strongly convex with h_S > 0 and t < 2/H_S.
struct RateCheck {
  bool applicable = false;
  int k_prime = -1;
  RateEstimate estimate;
  int checked = 0;
  int violations = 0;
  /// max d(x^k, xbar) / (K q^{(k-k')/2}) over checked k.
  double worst_ratio = 0.0;
};

/// Iterates closer than `resolution` to xbar are below the accuracy of xbar
/// itself and are not checked.
RateCheck check_rate_bound(const WeightedDataset &ds, PExponent p, const Trace &trace,
                           const Vector &xbar, double resolution = 1e-12);

} // namespace geomean
