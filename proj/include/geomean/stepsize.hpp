#pragma once

#include "geomean/frechet.hpp"
#include "geomean/manifold.hpp"

#include <limits>
#include <string>
#include <variant>

namespace geomean {

/// Curvature and topology data consumed by the step-size rules. Decoupled
/// from Manifold so the rules can be evaluated for arbitrary (delta, Delta).
struct CurvatureBounds {
  double delta = 0.0;
  double Delta = 0.0;
  double inj = std::numeric_limits<double>::infinity();

  double r_cx() const { return convexity_radius(inj, Delta); }
  static CurvatureBounds of(const Manifold &space);
};

struct UserConstant {
  double t = 1.0;
};
/// t = 1/H_{B(o,rho),p}.
struct ConjectureOptimal {};
/// t = 1/((p-1)(2 rho)^{p-2}) on spaces of constant curvature >= 0.
struct ConstantCurvatureOptimal {};
/// t = 1/H with H taken over B(o, 4 rho) (B(o, 3 rho) when starting at o).
struct SpreadCompromise {
  bool start_at_o = false;
};
/// t* = min{t_exit, 1/c_delta(rho' + rho)}; p = 2 only.
struct ExitTimeCompromise {
  double rho_prime = 0.0;
};

using StepPolicy = std::variant<UserConstant, ConjectureOptimal, ConstantCurvatureOptimal,
                                SpreadCompromise, ExitTimeCompromise>;

std::string policy_name(const StepPolicy &policy);

/// A resolved policy: the step-size plus the guarantees that come with it.
struct ResolvedStep {
  double t = 0.0;
  /// Admissible step-sizes are (0, t_max_exclusive).
  double t_max_exclusive = 0.0;
  /// Ball around o that the iterates are guaranteed to stay in.
  double stay_ball_radius = 0.0;
  /// Hessian upper bound the step is derived from (0 when not applicable).
  double hessian_bound = 0.0;
  std::string preconditions;
};

/// Resolves `policy` for data in B(o, rho). Throws PreconditionError naming
/// the violated bound.
ResolvedStep resolve(const StepPolicy &policy, const CurvatureBounds &k, double rho,
                     PExponent p);
ResolvedStep resolve(const StepPolicy &policy, const Manifold &space, double rho,
                     PExponent p);

double resolve_conjecture(const CurvatureBounds &k, double rho, PExponent p);
double resolve_constant_curvature(const CurvatureBounds &k, double rho, PExponent p);

struct SpreadStep {
  double t = 0.0;
  double t_max_exclusive = 0.0;
  double stay_ball_radius = 0.0;
};
SpreadStep resolve_spread_compromise(const CurvatureBounds &k, double rho, PExponent p,
                                     bool start_at_o);

/// Pieces of the exit-time construction.
double t_in(double rho, double rho_prime);
double t_out1(const CurvatureBounds &k, double rho, double rho_prime, double r);
double t_out2(double rho, double rho_prime, double r);

/// min{t_in, inf_{r in [rho, rho')} max{t_out1(r), t_out2(r)}}.
double exit_time(const CurvatureBounds &k, double rho, double rho_prime);

/// min{exit_time, 1/c_delta(rho' + rho)}.
double resolve_exit_compromise(const CurvatureBounds &k, double rho, double rho_prime);

struct RateEstimate {
  double h_S = 0.0;
  double H_S = 0.0;
  double alpha = 0.0;
  double q = 0.0;
  double K = 0.0;
};

/// Contraction data d(x^k, xbar) <= K q^{(k-k')/2}.
RateEstimate rate_estimate(double h_S, double H_S, double t, double f_gap);

/// Largest x in [lo, hi] with pred(x) true, assuming pred is true at lo and
/// switches once. Bisection to tol.
template <class Pred>
double largest_true(Pred pred, double lo, double hi, double tol = 1e-12) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

} // namespace geomean
