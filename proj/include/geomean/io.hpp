#pragma once

#include "geomean/errors.hpp"
#include "geomean/manifold.hpp"
#include "geomean/solver.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace geomean {

using json = nlohmann::json;

/// Malformed input file or document.
class ParseError : public Error {
public:
  using Error::Error;
};

/// {"kind": ..., "dim": ..., "kappa": ...}; kind is one of euclidean, sphere,
/// hyperbolic, circle, so3, real_projective.
Manifold space_from_json(const json &j);
json space_to_json(const Manifold &m);
Manifold make_space(const std::string &kind, int dim, std::optional<double> kappa);

Vector vector_from_json(const json &j);
json vector_to_json(const Vector &v);

struct DatasetFile {
  Manifold space;
  std::vector<Vector> points;
  std::vector<double> weights;
  std::optional<Ball> ball;
};

/// {"space": ..., "points": [...], "weights": [...], "ball": {"center", "radius"}}.
/// Weights default to uniform, the ball is optional.
DatasetFile dataset_from_json(const json &j);
DatasetFile load_dataset(const std::string &path);
json dataset_to_json(const WeightedDataset &ds);

/// 17 significant digits, '.' decimal point.
std::string format_double(double v);

/// k, x0..x{m-1}, cost, grad_norm, dist_to_o, dist_to_final, step_used.
void write_trace_csv(std::ostream &os, const Manifold &space, const Trace &trace);

json verdicts_to_json(const Verdicts &v);

/// Throws if the trace contradicts its own verdicts.
void validate_trace(const Trace &trace);

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

/// Line chart in a fixed 800x600 viewBox. With y_log, values <= 0 are
/// clamped to the smallest positive value of the chart.
std::string render_svg(const std::vector<PlotSeries> &series, const std::string &title,
                       const std::string &x_label, const std::string &y_label,
                       bool y_log);

void write_text_file(const std::string &path, const std::string &content);

} // namespace geomean
