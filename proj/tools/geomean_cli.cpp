// geomean: command-line front end for the L^p center-of-mass library.

#include "geomean/errors.hpp"
#include "geomean/experiments.hpp"
#include "geomean/geocheck.hpp"
#include "geomean/io.hpp"
#include "geomean/stepsize.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

using namespace geomean;

namespace {

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char *env = std::getenv("GEOMEAN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception &) {
      std::cerr << "warning: ignoring malformed GEOMEAN_SEED='" << env << "'\n";
    }
  }
  return flag_seed;
}

void emit(const json &doc, const std::optional<std::string> &out_dir,
          const std::string &file) {
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_text_file((std::filesystem::path(*out_dir) / file).string(), text);
  }
}

struct SpaceFlags {
  std::string kind = "sphere";
  int dim = 2;
  std::optional<double> kappa;

  void add(CLI::App *cmd) {
    cmd->add_option("--space", kind,
                    "euclidean | sphere | hyperbolic | circle | so3 | real_projective")
        ->capture_default_str();
    cmd->add_option("--dim", dim, "manifold dimension")->capture_default_str();
    cmd->add_option("--kappa", kappa, "sectional curvature");
  }
  Manifold make() const { return make_space(kind, dim, kappa); }
};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Riemannian L^p center of mass by constant step-size gradient descent"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::optional<std::string> out_dir;

  // mean
  MeanOptions mean_opts;
  std::optional<std::string> mean_out;
  auto *mean = app.add_subcommand("mean", "compute the center of mass of a dataset");
  mean->add_option("dataset", mean_opts.dataset_path, "dataset JSON file")->required();
  mean->add_option("--policy", mean_opts.policy,
                   "constant | conjecture | constant-curvature | spread | spread-at-o | "
                   "exit-time")
      ->capture_default_str();
  mean->add_option("--t", mean_opts.t, "step-size for --policy constant");
  mean->add_option("--p", mean_opts.p, "exponent p >= 2")->capture_default_str();
  mean->add_option("--rho-prime", mean_opts.rho_prime, "outer radius for exit-time");
  mean->add_option("--grad-tol", mean_opts.grad_tol)->capture_default_str();
  mean->add_option("--max-iters", mean_opts.max_iters)->capture_default_str();
  mean->add_option("--out", mean_out, "output directory for trace.csv and summary.json");

  // stepsize
  SpaceFlags step_space;
  double step_rho = 0.5;
  double step_p = 2.0;
  std::optional<double> step_rho_prime;
  bool step_table = false;
  bool step_csv = false;
  auto *step = app.add_subcommand("stepsize", "resolve the step-size policies");
  step_space.add(step);
  step->add_option("--rho", step_rho, "data ball radius")->capture_default_str();
  step->add_option("--p", step_p)->capture_default_str();
  step->add_option("--rho-prime", step_rho_prime, "outer radius for exit-time");
  step->add_flag("--table", step_table, "reproduce the reference step-size table");
  step->add_flag("--csv", step_csv, "CSV instead of JSON");
  step->add_option("--out", out_dir);

  // circle-example
  auto *circle = app.add_subcommand("circle-example", "run the four circle scenarios");
  circle->add_option("--out", out_dir);

  // sphere-configs
  std::vector<double> cfg_rhos{0.35 * std::numbers::pi, 0.47 * std::numbers::pi};
  double cfg_t = 1.0;
  auto *configs = app.add_subcommand("sphere-configs", "cross and pair configurations on S^2");
  configs->add_option("--rho", cfg_rhos, "ball radii");
  configs->add_option("--t", cfg_t)->capture_default_str();
  configs->add_option("--seed", seed)->capture_default_str();
  configs->add_option("--out", out_dir);

  // check
  SpaceFlags check_space;
  int trials = 1000;
  std::vector<double> t_grid;
  auto *check = app.add_subcommand("check", "Monte Carlo geometry checks");
  check->require_subcommand(1);
  auto *comparison = check->add_subcommand("comparison", "secant comparison theorem");
  auto *tethering = check->add_subcommand("tethering", "gradient map stays in the ball");
  auto *hull = check->add_subcommand("hull", "convex hull is absorbing for descent");
  for (auto *sub : {comparison, tethering, hull}) {
    check_space.add(sub);
    sub->add_option("--trials", trials)->capture_default_str();
    sub->add_option("--seed", seed)->capture_default_str();
    sub->add_option("--out", out_dir);
  }
  tethering->add_option("--t", t_grid, "step-sizes in [0, 1]; random when omitted");

  CLI11_PARSE(app, argc, argv);
  seed = effective_seed(seed);

  try {
    if (*mean) {
      mean_opts.out_dir = mean_out;
      const MeanResult r = mean_command(mean_opts);
      if (!r.summary.is_null()) {
        std::cout << r.summary.dump(2) << "\n";
      }
      if (r.exit_code != kExitConverged) {
        std::cerr << "geomean mean: " << r.message << "\n";
      }
      return r.exit_code;
    }

    if (*step) {
      if (step_table) {
        const StepsizeTable table = run_stepsize_table();
        if (step_csv) {
          std::cout << table.to_csv();
          if (out_dir) {
            std::filesystem::create_directories(*out_dir);
            write_text_file((std::filesystem::path(*out_dir) / "stepsize_table.csv").string(),
                            table.to_csv());
          }
        } else {
          emit(table.to_json(), out_dir, "stepsize_table.json");
        }
        return 0;
      }
      const Manifold m = step_space.make();
      const PExponent p(step_p);
      std::vector<std::pair<std::string, StepPolicy>> policies{
          {"conjecture", ConjectureOptimal{}},
          {"constant-curvature", ConstantCurvatureOptimal{}},
          {"spread", SpreadCompromise{false}},
          {"spread-at-o", SpreadCompromise{true}}};
      if (step_rho_prime) {
        policies.emplace_back("exit-time", ExitTimeCompromise{*step_rho_prime});
      }
      json rows = json::array();
      std::string csv = "policy,preconditions,resolved_t,t_max_exclusive,stay_ball\n";
      for (const auto &[name, policy] : policies) {
        json row{{"policy", name}};
        try {
          const ResolvedStep r = resolve(policy, m, step_rho, p);
          row["preconditions"] = r.preconditions;
          row["resolved_t"] = r.t;
          row["t_max_exclusive"] = r.t_max_exclusive;
          row["stay_ball"] = r.stay_ball_radius;
          csv += name + ",\"" + r.preconditions + "\"," + format_double(r.t) + "," +
                 format_double(r.t_max_exclusive) + "," + format_double(r.stay_ball_radius) +
                 "\n";
        } catch (const PreconditionError &e) {
          row["error"] = e.what();
          csv += name + ",\"" + std::string(e.what()) + "\",,,\n";
        }
        rows.push_back(row);
      }
      if (step_csv) {
        std::cout << csv;
      } else {
        emit({{"space", space_to_json(m)}, {"rho", step_rho}, {"p", step_p}, {"policies", rows}},
             out_dir, "stepsize.json");
      }
      return 0;
    }

    if (*circle) {
      const CircleReport rep = run_circle_example(out_dir);
      std::cout << rep.to_json().dump(2) << "\n";
      return rep.pass ? 0 : 3;
    }

    if (*configs) {
      const SphereConfigReport rep = run_sphere_configs(cfg_rhos, cfg_t, seed, out_dir);
      std::cout << rep.to_json().dump(2) << "\n";
      return 0;
    }

    if (*check) {
      const Manifold m = check_space.make();
      json doc{{"trials", trials}, {"seed", seed}, {"space", space_to_json(m)}};
      if (*comparison) {
        const ComparisonReport r = comparison_check(m, trials, seed, std::min(trials, 1000));
        doc["suite"] = "comparison";
        doc["trials"] = r.trials;
        doc["skipped"] = r.skipped;
        doc["violations"] = r.violations;
        doc["min_margin"] = r.min_margin;
        doc["oracle_checked"] = r.oracle_checked;
        doc["max_oracle_error"] = r.max_oracle_error;
        doc["exploratory"] = r.exploratory;
      } else if (*tethering) {
        const TetheringReport r = tethering_check(m, trials, t_grid, seed);
        doc["suite"] = "tethering";
        doc["trials"] = r.trials;
        doc["violations"] = r.violations;
        doc["min_margin"] = r.min_margin;
        doc["exploratory"] = r.exploratory;
      } else {
        const HullTrapReport r = hull_trap_check(m, trials, seed);
        doc["suite"] = "hull";
        doc["trials"] = r.trials;
        doc["entered"] = r.entered;
        doc["violations"] = r.violations;
      }
      emit(doc, out_dir, "check_" + doc["suite"].get<std::string>() + ".json");
      return 0;
    }
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const PreconditionError &e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const CutLocusError &e) {
    std::cerr << "cut locus: " << e.what() << "\n";
    return kExitCutLocus;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
