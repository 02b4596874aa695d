#include "geomean/io.hpp"

#include "geomean/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace geomean {

namespace {

const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string svg_escape(const std::string &s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += ch;
    }
  }
  return out;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

} // namespace

Manifold make_space(const std::string &kind, int dim, std::optional<double> kappa) {
  if (kind == "euclidean") {
    return Manifold::euclidean(dim);
  }
  if (kind == "sphere") {
    return Manifold::sphere(dim, kappa.value_or(1.0));
  }
  if (kind == "hyperbolic") {
    return Manifold::hyperbolic(dim, kappa.value_or(-1.0));
  }
  if (kind == "circle") {
    return Manifold::circle(kappa.value_or(1.0));
  }
  if (kind == "so3") {
    return Manifold::so3();
  }
  if (kind == "real_projective") {
    return Manifold::real_projective(dim, kappa.value_or(1.0));
  }
  throw ParseError("unknown space kind '" + kind + "'");
}

Manifold space_from_json(const json &j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError("space descriptor needs a string field 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  int dim = 1;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer()) {
      throw ParseError("space 'dim' must be an integer");
    }
    dim = j["dim"].get<int>();
  } else if (kind != "circle" && kind != "so3") {
    throw ParseError("space descriptor for '" + kind + "' needs 'dim'");
  }
  std::optional<double> kappa;
  if (j.contains("kappa") && !j["kappa"].is_null()) {
    if (!j["kappa"].is_number()) {
      throw ParseError("space 'kappa' must be a number");
    }
    kappa = j["kappa"].get<double>();
  }
  return make_space(kind, dim, kappa);
}

json space_to_json(const Manifold &m) {
  return {{"kind", m.name()}, {"dim", m.dim()}, {"kappa", m.kappa()}};
}

Vector vector_from_json(const json &j) {
  if (!j.is_array()) {
    throw ParseError("expected an array of coordinates");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ParseError("coordinates must be numbers");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vector &v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(v(i));
  }
  return arr;
}

DatasetFile dataset_from_json(const json &j) {
  if (!j.is_object()) {
    throw ParseError("dataset must be a JSON object");
  }
  if (!j.contains("space") || !j.contains("points")) {
    throw ParseError("dataset needs 'space' and 'points'");
  }
  DatasetFile out{space_from_json(j["space"]), {}, {}, std::nullopt};
  if (!j["points"].is_array() || j["points"].empty()) {
    throw ParseError("'points' must be a nonempty array");
  }
  for (const json &p : j["points"]) {
    out.points.push_back(vector_from_json(p));
  }
  if (j.contains("weights")) {
    if (!j["weights"].is_array()) {
      throw ParseError("'weights' must be an array");
    }
    for (const json &w : j["weights"]) {
      if (!w.is_number()) {
        throw ParseError("weights must be numbers");
      }
      out.weights.push_back(w.get<double>());
    }
  } else {
    out.weights.assign(out.points.size(), 1.0 / static_cast<double>(out.points.size()));
  }
  if (j.contains("ball") && !j["ball"].is_null()) {
    const json &b = j["ball"];
    if (!b.is_object() || !b.contains("center") || !b.contains("radius") ||
        !b["radius"].is_number()) {
      throw ParseError("'ball' needs 'center' and numeric 'radius'");
    }
    out.ball = Ball{vector_from_json(b["center"]), b["radius"].get<double>()};
  }
  return out;
}

DatasetFile load_dataset(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open dataset file '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return dataset_from_json(j);
}

json dataset_to_json(const WeightedDataset &ds) {
  json pts = json::array();
  for (const Vector &p : ds.points) {
    pts.push_back(vector_to_json(p));
  }
  return {{"space", space_to_json(ds.space)},
          {"points", pts},
          {"weights", ds.weights},
          {"ball", {{"center", vector_to_json(ds.center)}, {"radius", ds.radius}}}};
}

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream &os, const Manifold &space, const Trace &trace) {
  const Eigen::Index m = space.ambient_dim();
  os << "k";
  for (Eigen::Index i = 0; i < m; ++i) {
    os << ",x" << i;
  }
  os << ",cost,grad_norm,dist_to_o,dist_to_final,step_used\n";
  for (const Iterate &it : trace.iterates) {
    os << it.k;
    for (Eigen::Index i = 0; i < m; ++i) {
      os << ',' << format_double(it.point(i));
    }
    os << ',' << format_double(it.cost) << ',' << format_double(it.grad_norm) << ','
       << format_double(it.dist_to_o) << ','
       << format_double(space.distance(it.point, trace.final_point)) << ','
       << format_double(it.step_used) << '\n';
  }
}

json verdicts_to_json(const Verdicts &v) {
  return {{"monotone_cost", v.monotone_cost},
          {"stayed_in_ball", v.stayed_in_ball},
          {"continuously_stayed", v.continuously_stayed},
          {"converged", v.converged}};
}

void validate_trace(const Trace &trace) {
  const auto &its = trace.iterates;
  if (its.empty()) {
    throw Error("trace has no iterates");
  }
  for (std::size_t k = 1; k < its.size(); ++k) {
    if (its[k].k <= its[k - 1].k) {
      throw Error("trace iteration index is not strictly increasing");
    }
    if (trace.verdicts.monotone_cost && its[k].cost > its[k - 1].cost + 1e-12) {
      throw Error("trace claims monotone cost but cost increases at k = " +
                  std::to_string(its[k].k));
    }
  }
  if (trace.verdicts.continuously_stayed && !trace.verdicts.stayed_in_ball) {
    throw Error("trace claims continuous stay without staying in the ball");
  }
  if (trace.verdicts.converged != (trace.status == Status::Converged)) {
    throw Error("trace convergence verdict disagrees with its status");
  }
}

std::string render_svg(const std::vector<PlotSeries> &series, const std::string &title,
                       const std::string &x_label, const std::string &y_label,
                       bool y_log) {
  constexpr double W = 800.0;
  constexpr double H = 600.0;
  constexpr double left = 80.0;
  constexpr double right = 160.0;
  constexpr double top = 50.0;
  constexpr double bottom = 60.0;

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  double min_pos = x_lo;
  for (const PlotSeries &s : series) {
    if (s.xs.size() != s.ys.size()) {
      throw PreconditionError("plot series '" + s.label + "' has mismatched lengths");
    }
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) {
        throw PreconditionError("plot series '" + s.label + "' has non-finite values");
      }
      x_lo = std::min(x_lo, s.xs[i]);
      x_hi = std::max(x_hi, s.xs[i]);
      if (s.ys[i] > 0.0) {
        min_pos = std::min(min_pos, s.ys[i]);
      }
    }
  }
  if (!std::isfinite(min_pos)) {
    min_pos = 1.0;
  }
  auto ty = [&](double y) { return y_log ? std::log10(std::max(y, min_pos)) : y; };
  for (const PlotSeries &s : series) {
    for (double y : s.ys) {
      y_lo = std::min(y_lo, ty(y));
      y_hi = std::max(y_hi, ty(y));
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi == x_lo) {
    x_hi = x_lo + 1.0;
  }
  if (y_hi == y_lo) {
    y_hi = y_lo + 1.0;
  }
  const double pw = W - left - right;
  const double ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - y_lo) / (y_hi - y_lo)) * ph; };
  auto py_raw = [&](double v) { return top + (1.0 - (v - y_lo) / (y_hi - y_lo)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
        "width=\"800\" height=\"600\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"" << coord(left + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" "
     << "font-size=\"16\">" << svg_escape(title) << "</text>\n";
  os << "<rect x=\"" << coord(left) << "\" y=\"" << coord(top) << "\" width=\""
     << coord(pw) << "\" height=\"" << coord(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / kTicks;
    const double X = px(xv);
    os << "<line x1=\"" << coord(X) << "\" y1=\"" << coord(top + ph) << "\" x2=\""
       << coord(X) << "\" y2=\"" << coord(top + ph + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << coord(X) << "\" y=\"" << coord(top + ph + 20)
       << "\" text-anchor=\"middle\">" << short_num(xv) << "</text>\n";
    const double yv = y_lo + (y_hi - y_lo) * i / kTicks;
    const double Y = py_raw(yv);
    os << "<line x1=\"" << coord(left - 5) << "\" y1=\"" << coord(Y) << "\" x2=\""
       << coord(left) << "\" y2=\"" << coord(Y) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << coord(left - 8) << "\" y=\"" << coord(Y + 4)
       << "\" text-anchor=\"end\">" << (y_log ? "1e" + short_num(yv) : short_num(yv))
       << "</text>\n";
  }
  os << "<text x=\"" << coord(left + pw / 2) << "\" y=\"" << coord(H - 15)
     << "\" text-anchor=\"middle\">" << svg_escape(x_label) << "</text>\n";
  os << "<text x=\"20\" y=\"" << coord(top + ph / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << coord(top + ph / 2)
     << ")\">" << svg_escape(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char *color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].xs.size(); ++i) {
      os << (i ? " " : "") << coord(px(series[s].xs[i])) << ','
         << coord(py(series[s].ys[i]));
    }
    os << "\"/>\n";
    const double ly = top + 15 + 20.0 * static_cast<double>(s);
    os << "<line x1=\"" << coord(left + pw + 10) << "\" y1=\"" << coord(ly) << "\" x2=\""
       << coord(left + pw + 30) << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << coord(left + pw + 35) << "\" y=\"" << coord(ly + 4) << "\">"
       << svg_escape(series[s].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write '" + path + "'");
  }
  out << content;
  if (!out) {
    throw Error("write failed for '" + path + "'");
  }
}

} // namespace geomean
