#pragma once

#include "geomean/frechet.hpp"
#include "geomean/io.hpp"
#include "geomean/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace geomean {

// ---------------------------------------------------------------- circle

/// Two points at angles +-2 pi/5 on the unit circle, ball B((1,0), pi/2).
WeightedDataset circle_dataset(double w1, double w2);

struct CircleScenario {
  std::string name;
  double w1 = 0.0;
  double w2 = 0.0;
  double t = 0.0;
  double expected_theta = 0.0;
  Status expected_status = Status::Converged;
  Trace trace;
  double final_theta = 0.0;
  bool pass = false;
};

struct CircleReport {
  std::vector<CircleScenario> scenarios;
  bool pass = false;
  json to_json() const;
};

/// Runs the four scripted circle scenarios from x0 = x1. With out_dir, writes
/// one CSV per scenario, the cost curves as SVG and a JSON report.
CircleReport run_circle_example(const std::optional<std::string> &out_dir = std::nullopt);

// ---------------------------------------------------------------- sphere

/// Four points on the boundary of B(o, rho) in S^2 along two perpendicular
/// geodesics through o, equal weights. The dataset ball has radius rho + 1e-9.
WeightedDataset cross_configuration(double rho);
/// Two antipodal boundary pairs collapsed onto one geodesic (x3 = x1, x4 = x2).
WeightedDataset pair_configuration(double rho);

struct ConfigRun {
  std::string config;
  double rho = 0.0;
  int iterations_to_tol = -1; ///< first k with d(x^k, o) < 1e-6
  std::vector<double> distances;
  /// Hessian quadratic forms at o along the first data direction and
  /// perpendicular to it: predicted and finite-difference values.
  double predicted_radial = 0.0;
  double predicted_perpendicular = 0.0;
  double fd_radial = 0.0;
  double fd_perpendicular = 0.0;
  int descent_violations = 0;
};

struct SphereConfigReport {
  std::vector<ConfigRun> runs;
  json to_json() const;
};

inline constexpr double kConfigDistanceTol = 1e-6;

/// Runs both configurations for every rho with step t from a seeded start
/// uniform in B(o, rho).
SphereConfigReport run_sphere_configs(const std::vector<double> &rhos, double t,
                                      std::uint64_t seed,
                                      const std::optional<std::string> &out_dir = std::nullopt);

// ---------------------------------------------------------------- table

struct TableRow {
  std::string name;
  std::string inputs;
  double value = 0.0;
  double reference_value = 0.0;
  double tolerance = 0.0;
  double abs_error = 0.0;
  bool pass = false;
};

struct StepsizeTable {
  std::vector<TableRow> rows;
  json to_json() const;
  std::string to_csv() const;
};

/// The exit-time and spread-rule numbers for the unit sphere quarter ball and
/// the curvature -1 plane.
StepsizeTable run_stepsize_table();

/// Largest rho in (0, rho') with resolve_exit_compromise >= 1 on the unit
/// sphere with rho' = pi/2, as a fraction of r_cx.
double boundary_radius_sphere();
/// Largest rho in (0, rho') with t_exit >= 1/c_delta(rho + rho') for
/// delta = -1, Delta = 0, rho' = pi/2, as a fraction of rho'.
double boundary_radius_hyperbolic();

// ---------------------------------------------------------------- mean

struct MeanOptions {
  std::string dataset_path;
  std::string policy = "conjecture";
  std::optional<double> t;
  double p = 2.0;
  std::optional<double> rho_prime;
  double grad_tol = 1e-10;
  int max_iters = 10000;
  std::optional<std::string> out_dir;
};

enum ExitCode : int {
  kExitConverged = 0,
  kExitParse = 1,
  kExitCutLocus = 2,
  kExitNoConvergence = 3,
  kExitPrecondition = 4,
};

struct MeanResult {
  int exit_code = kExitParse;
  std::string message;
  json summary;
};

StepPolicy parse_policy(const std::string &name, std::optional<double> t,
                        std::optional<double> rho_prime);

MeanResult mean_command(const MeanOptions &opts);

} // namespace geomean
