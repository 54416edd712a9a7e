#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "zs/bounds.hpp"
#include "zs/hill.hpp"
#include "zs/potential.hpp"
#include "zs/spectra.hpp"

namespace zs::io {

// Keys are kept sorted, so serialization order never depends on insertion order.
using Json = nlohmann::json;

inline constexpr const char* kSchema = "zs-spectra/1";

Json to_json(const PeriodicPotential& p);
// Points as {"re", "im", "nu", "residual", "engine"} in cloud order.
Json to_json(const SpectrumCloud& cloud);
Json to_json(const Band& b);
Json to_json(const std::vector<Band>& bands);
Json to_json(const BandClassification& c);
Json to_json(const BoundReport& r);
Json to_json(const CountingReport& r);
Json to_json(const SweepResult& r, Observable o);
Json to_json(const std::vector<Root>& roots);
Json complex_pair(cd z);

// Top-level document {"schema": "zs-spectra/1", "config": config, ...sections}.
Json document(const Json& config);
// Two-space indented JSON with a trailing newline. Non-finite numbers become null.
std::string dump(const Json& j);

// %.17g, which round-trips every double.
std::string format_g17(double v);
// Header re_z,im_z,nu,residual,engine and one row per point in cloud order.
std::string cloud_csv(const SpectrumCloud& cloud);

// Writes atomically enough for artifacts: the whole string or an Error.
void write_file(const std::string& path, const std::string& content);

using Polyline = std::vector<std::pair<double, double>>;

enum class MarkerShape { Circle, Triangle };

// A static plot in data coordinates. Bands are solid paths, markers share one
// group, dashed paths carry bound curves and fits.
struct SvgFigure {
  std::string title;
  std::string x_label = "Re z";
  std::string y_label = "Im z";
  double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
  std::vector<Polyline> bands;
  std::vector<std::pair<double, double>> markers;
  MarkerShape marker_shape = MarkerShape::Circle;
  std::vector<Polyline> dashed;
};

std::string render_svg(const SvgFigure& fig);

// |Im z| = min(|q|, eps |q'| / (2 |Re z|)) as the two dashed branches above and
// below R over [x_min, x_max]; only the strip lines when |q'| is unbounded.
std::vector<Polyline> bound_curve(double sup_norm, const std::optional<double>& deriv_sup_norm, double eps,
                                  double x_min, double x_max, int samples = 400);

}  // namespace zs::io
