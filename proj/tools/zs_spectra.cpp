// Command-line front end: config parsing, engine orchestration and artifact export.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zs/analytic.hpp"
#include "zs/bounds.hpp"
#include "zs/errors.hpp"
#include "zs/hill.hpp"
#include "zs/io.hpp"
#include "zs/monodromy.hpp"
#include "zs/parallel.hpp"
#include "zs/potential.hpp"
#include "zs/spectra.hpp"

namespace {

using zs::cd;
using zs::io::Json;

constexpr double kPi = std::numbers::pi;

// Exit status per error class.
enum Exit : int {
  kOk = 0,
  kOther = 1,
  kConfig = 2,
  kDomain = 3,
  kIntegration = 4,
  kEigensolver = 5,
  kRootFinding = 6,
  kTracing = 7,
  kUnbounded = 8,
  kPotential = 9,
  kCheckFailed = 10,
};

// ---------------------------------------------------------------------------
// Configuration

// Flag values that override the JSON config when given.
struct Flags {
  std::string config_path;
  std::optional<std::string> kind, shape, eps, engine, window, out, formats;
  std::optional<double> A, V, m, L, S, residual_tol;
  std::optional<int> nu_points, n_modes;
};

struct RunConfig {
  Json raw;  // merged config, echoed into the output document
  zs::PeriodicPotential potential = zs::PeriodicPotential::zero(1.0);
  std::vector<double> eps;
  std::string engine = "hill";
  zs::Window window;
  int nu_points = 64;
  std::optional<int> n_modes;
  double residual_tol = 1e-6;
  std::string out;  // artifact prefix; empty means JSON on stdout
  std::vector<std::string> formats{"json"};
};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream f(path);
  if (!f) throw zs::ConfigError("config", "cannot read '" + path + "'");
  try {
    Json j = Json::parse(f);
    if (!j.is_object()) throw zs::ConfigError("config", "top level must be an object");
    return j;
  } catch (const Json::parse_error& e) {
    throw zs::ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_number(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw zs::ConfigError(key, "'" + s + "' is not a number");
  }
}

void apply_flags(Json& j, const Flags& f) {
  Json& pot = j["potential"];
  if (!pot.is_object()) pot = Json::object();
  if (f.kind) pot["kind"] = *f.kind;
  if (f.shape) pot["shape"] = *f.shape;
  if (f.A) pot["A"] = *f.A;
  if (f.V) pot["V"] = *f.V;
  if (f.m) pot["m"] = *f.m;
  if (f.L) pot["L"] = *f.L;
  if (f.S) pot["S"] = *f.S;
  if (f.eps) {
    const auto parts = split(*f.eps, ',');
    if (parts.size() == 1) {
      j["eps"] = parse_number("eps", parts[0]);
    } else {
      Json a = Json::array();
      for (const auto& p : parts) a.push_back(parse_number("eps", p));
      j["eps"] = a;
    }
  }
  if (f.engine) j["engine"] = *f.engine;
  if (f.window) {
    const auto parts = split(*f.window, ',');
    if (parts.size() != 4) throw zs::ConfigError("window", "expected re_min,re_max,im_min,im_max");
    j["window"] = {{"re_min", parse_number("window.re_min", parts[0])},
                   {"re_max", parse_number("window.re_max", parts[1])},
                   {"im_min", parse_number("window.im_min", parts[2])},
                   {"im_max", parse_number("window.im_max", parts[3])}};
  }
  if (f.nu_points) j["nu_points"] = *f.nu_points;
  if (f.n_modes) j["n_modes"] = *f.n_modes;
  if (f.residual_tol) j["residual_tol"] = *f.residual_tol;
  if (f.out) j["out"] = *f.out;
  if (f.formats) j["outputs"] = split(*f.formats, ',');
}

double get_number(const Json& obj, const std::string& key, const std::string& path, std::optional<double> def) {
  if (!obj.contains(key)) {
    if (def) return *def;
    throw zs::ConfigError(path, "is required");
  }
  const Json& v = obj.at(key);
  if (!v.is_number()) throw zs::ConfigError(path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw zs::ConfigError(path, "must be finite");
  return d;
}

zs::PeriodicPotential build_potential(const Json& pot) {
  if (!pot.is_object()) throw zs::ConfigError("potential", "must be an object");
  if (!pot.contains("kind") || !pot.at("kind").is_string()) throw zs::ConfigError("potential.kind", "is required");
  const std::string kind = pot.at("kind").get<std::string>();
  auto num = [&](const char* key, std::optional<double> def) {
    return get_number(pot, key, std::string("potential.") + key, def);
  };
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0)) throw zs::ConfigError(std::string("potential.") + key, "must be positive");
    return v;
  };
  try {
    if (kind == "zero") return zs::PeriodicPotential::zero(positive("L", num("L", 2.0 * kPi)));
    if (kind == "constant") return zs::PeriodicPotential::constant(num("A", 1.0), positive("L", num("L", 2.0 * kPi)));
    if (kind == "plane_wave") {
      const double V = num("V", 1.0);
      std::optional<double> L;
      if (pot.contains("L")) L = positive("L", num("L", std::nullopt));
      if (V == 0.0 && !L) throw zs::ConfigError("potential.L", "is required when V = 0");
      return zs::PeriodicPotential::plane_wave(num("A", 1.0), V, L);
    }
    if (kind == "signum") return zs::PeriodicPotential::signum(num("A", 1.0), positive("L", num("L", 2.0)));
    if (kind == "exp_sin_sq") return zs::PeriodicPotential::exp_sin_sq(num("A", 1.0), positive("L", num("L", kPi)));
    if (kind == "jacobi_dn") {
      const double m = num("m", 0.6);
      if (!(m >= 0.0 && m < 1.0)) throw zs::ConfigError("potential.m", "must lie in [0, 1)");
      auto p = zs::PeriodicPotential::jacobi_dn(m, num("A", 1.0));
      if (pot.contains("L") && std::abs(num("L", std::nullopt) - p.period()) > 1e-9 * p.period())
        throw zs::ConfigError("potential.L", "is fixed at 2K(m) for jacobi_dn");
      return p;
    }
    if (kind == "rapid_phase") {
      const std::string shape = pot.contains("shape") ? pot.at("shape").get<std::string>() : "cos";
      if (shape == "cos")
        return zs::PeriodicPotential::rapid_phase_cos(num("A", 1.0), num("S", 1.0), positive("L", num("L", kPi)));
      if (shape == "dn") {
        const double m = num("m", 0.88);
        if (!(m >= 0.0 && m < 1.0)) throw zs::ConfigError("potential.m", "must lie in [0, 1)");
        return zs::PeriodicPotential::rapid_phase_dn(m, num("S", 2.0), num("A", 1.0));
      }
      throw zs::ConfigError("potential.shape", "must be 'cos' or 'dn'");
    }
    if (kind == "sampled") {
      if (!pot.contains("samples") || !pot.at("samples").is_array())
        throw zs::ConfigError("potential.samples", "array of [re, im] pairs is required");
      std::vector<cd> s;
      for (const Json& e : pot.at("samples")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw zs::ConfigError("potential.samples", "entries must be [re, im] pairs");
        s.emplace_back(e[0].get<double>(), e[1].get<double>());
      }
      return zs::PeriodicPotential::sampled(std::move(s), positive("L", num("L", std::nullopt)));
    }
  } catch (const zs::DomainError& e) {
    throw zs::ConfigError("potential", e.what());
  }
  throw zs::ConfigError("potential.kind", "unknown kind '" + kind + "'");
}

zs::Window default_window(const zs::PeriodicPotential& p, double eps) {
  const double s = p.norms(eps).sup_norm;
  const double h = 1.25 * s + 0.25;
  return {-3.0, 3.0, -h, h};
}

RunConfig parse_config_json(Json raw, bool eps_list) {
  RunConfig rc;
  rc.raw = std::move(raw);
  const Json& j = rc.raw;
  rc.potential = build_potential(j.contains("potential") ? j.at("potential") : Json());

  if (!j.contains("eps")) {
    rc.eps = {1.0};
  } else if (j.at("eps").is_number()) {
    rc.eps = {j.at("eps").get<double>()};
  } else if (j.at("eps").is_array()) {
    for (const Json& e : j.at("eps")) {
      if (!e.is_number()) throw zs::ConfigError("eps", "list entries must be numbers");
      rc.eps.push_back(e.get<double>());
    }
  } else {
    throw zs::ConfigError("eps", "must be a number or a list of numbers");
  }
  if (rc.eps.empty()) throw zs::ConfigError("eps", "must not be empty");
  for (double e : rc.eps)
    if (!(e > 0.0 && e <= 1.0)) throw zs::ConfigError("eps", "values must lie in (0, 1]");
  if (!eps_list && rc.eps.size() != 1) throw zs::ConfigError("eps", "this subcommand takes a single value");

  if (j.contains("engine")) {
    if (!j.at("engine").is_string()) throw zs::ConfigError("engine", "must be a string");
    rc.engine = j.at("engine").get<std::string>();
    if (rc.engine != "hill" && rc.engine != "monodromy" && rc.engine != "both")
      throw zs::ConfigError("engine", "must be hill, monodromy or both");
  }
  if (j.contains("window")) {
    const Json& w = j.at("window");
    if (!w.is_object()) throw zs::ConfigError("window", "must be an object");
    rc.window = {get_number(w, "re_min", "window.re_min", std::nullopt),
                 get_number(w, "re_max", "window.re_max", std::nullopt),
                 get_number(w, "im_min", "window.im_min", std::nullopt),
                 get_number(w, "im_max", "window.im_max", std::nullopt)};
    if (!rc.window.valid()) throw zs::ConfigError("window", "must be nonempty (re_min < re_max, im_min < im_max)");
  } else {
    rc.window = default_window(rc.potential, rc.eps.front());
  }
  if (j.contains("nu_points")) {
    if (!j.at("nu_points").is_number_integer() || j.at("nu_points").get<int>() < 1)
      throw zs::ConfigError("nu_points", "must be an integer >= 1");
    rc.nu_points = j.at("nu_points").get<int>();
  }
  if (j.contains("n_modes")) {
    if (!j.at("n_modes").is_number_integer() || j.at("n_modes").get<int>() < 8)
      throw zs::ConfigError("n_modes", "must be an integer >= 8");
    rc.n_modes = j.at("n_modes").get<int>();
  }
  if (j.contains("residual_tol")) {
    rc.residual_tol = get_number(j, "residual_tol", "residual_tol", std::nullopt);
    if (!(rc.residual_tol > 0.0)) throw zs::ConfigError("residual_tol", "must be positive");
  }
  if (j.contains("out")) {
    if (!j.at("out").is_string()) throw zs::ConfigError("out", "must be a string");
    rc.out = j.at("out").get<std::string>();
  }
  if (j.contains("outputs")) {
    if (!j.at("outputs").is_array()) throw zs::ConfigError("outputs", "must be a list");
    rc.formats.clear();
    for (const Json& o : j.at("outputs")) {
      if (!o.is_string()) throw zs::ConfigError("outputs", "entries must be strings");
      const std::string s = o.get<std::string>();
      if (s != "json" && s != "csv" && s != "svg") throw zs::ConfigError("outputs", "unknown format '" + s + "'");
      rc.formats.push_back(s);
    }
  }
  return rc;
}

RunConfig parse_config(const Flags& flags, bool eps_list) {
  Json raw = load_config(flags.config_path);
  apply_flags(raw, flags);
  return parse_config_json(std::move(raw), eps_list);
}

bool wants(const RunConfig& rc, const std::string& fmt) {
  return std::find(rc.formats.begin(), rc.formats.end(), fmt) != rc.formats.end();
}

// JSON goes to PREFIX.json, or to stdout when no prefix is set.
void emit(const RunConfig& rc, const Json& doc, const zs::SpectrumCloud* cloud, const zs::io::SvgFigure* fig) {
  if (rc.out.empty()) {
    std::cout << zs::io::dump(doc);
    return;
  }
  if (wants(rc, "json")) zs::io::write_file(rc.out + ".json", zs::io::dump(doc));
  if (wants(rc, "csv") && cloud) zs::io::write_file(rc.out + ".csv", zs::io::cloud_csv(*cloud));
  if (wants(rc, "svg") && fig) zs::io::write_file(rc.out + ".svg", zs::io::render_svg(*fig));
}

// ---------------------------------------------------------------------------
// Engines

zs::HillConfig hill_config(const RunConfig& rc, double eps) {
  zs::HillConfig cfg = zs::default_hill_config(rc.potential, eps, rc.nu_points);
  if (rc.n_modes) cfg.n_modes = *rc.n_modes;
  cfg.residual_tol = rc.residual_tol;
  return cfg;
}

zs::SpectrumCloud monodromy_cloud(const RunConfig& rc, double eps) {
  const double L = rc.potential.period();
  const auto grid = zs::uniform_nu_grid(L, rc.nu_points);
  std::vector<std::vector<zs::CloudPoint>> per(grid.size());
  zs::parallel_for(grid.size(), [&](std::size_t i) {
    const double target = std::cos(grid[i] * L);
    for (const zs::Root& r : zs::floquet_roots(rc.potential, eps, grid[i], rc.window))
      per[i].push_back({r.z, grid[i], std::abs(zs::discriminant(rc.potential, {r.z, eps}, 1e-12) - target),
                        zs::Engine::Monodromy});
  });
  zs::SpectrumCloud cloud;
  for (auto& v : per) cloud.points.insert(cloud.points.end(), v.begin(), v.end());
  cloud.canonicalize();
  return cloud;
}

zs::SpectrumCloud in_window(const zs::SpectrumCloud& c, const zs::Window& w) {
  zs::SpectrumCloud out;
  for (const auto& pt : c.points)
    if (w.contains(pt.z)) out.points.push_back(pt);
  return out;
}

zs::SpectrumCloud compute_cloud(const RunConfig& rc, double eps) {
  zs::SpectrumCloud cloud;
  if (rc.engine == "hill" || rc.engine == "both")
    cloud = in_window(zs::lax_spectrum_hill(rc.potential, hill_config(rc, eps)), rc.window);
  if (rc.engine == "monodromy" || rc.engine == "both") {
    const auto m = monodromy_cloud(rc, eps);
    cloud.points.insert(cloud.points.end(), m.points.begin(), m.points.end());
  }
  cloud.canonicalize();
  return cloud;
}

std::vector<zs::io::Polyline> band_paths(const std::vector<zs::Band>& bands) {
  std::vector<zs::io::Polyline> out;
  for (const auto& b : bands) {
    zs::io::Polyline pl;
    for (const cd z : b.polyline) pl.emplace_back(z.real(), z.imag());
    out.push_back(std::move(pl));
  }
  return out;
}

zs::io::SvgFigure spectrum_figure(const std::string& title, const zs::PeriodicPotential& p, double eps,
                                  const zs::Window& view, const zs::SpectrumCloud& cloud,
                                  const std::vector<zs::Band>& bands) {
  zs::io::SvgFigure fig;
  fig.title = title;
  fig.x_min = view.re_min;
  fig.x_max = view.re_max;
  fig.y_min = view.im_min;
  fig.y_max = view.im_max;
  for (const auto& pt : cloud.points) fig.markers.emplace_back(pt.z.real(), pt.z.imag());
  fig.bands = band_paths(bands);
  const zs::PotentialNorms n = p.norms(eps);
  fig.dashed = zs::io::bound_curve(n.sup_norm, n.deriv_sup_norm, eps, view.re_min, view.re_max);
  return fig;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_spectrum(const Flags& flags, bool trace) {
  const RunConfig rc = parse_config(flags, false);
  const double eps = rc.eps.front();
  const zs::SpectrumCloud cloud = compute_cloud(rc, eps);
  Json doc = zs::io::document(rc.raw);
  doc["potential"] = zs::io::to_json(rc.potential);
  doc["cloud"] = zs::io::to_json(cloud);
  std::vector<zs::Band> bands;
  if (trace) {
    bands = zs::trace_gamma_contours(rc.potential, eps, rc.window);
    doc["classification"] = zs::io::to_json(zs::classify_bands(bands, eps, rc.potential.period()));
  }
  doc["bands"] = zs::io::to_json(bands);
  const auto fig = spectrum_figure("Lax spectrum, " + rc.potential.describe(), rc.potential, eps, rc.window, cloud,
                                   bands);
  emit(rc, doc, &cloud, &fig);
  return kOk;
}

int cmd_discriminant(const Flags& flags, const std::string& grid) {
  const RunConfig rc = parse_config(flags, false);
  const double eps = rc.eps.front();
  const auto parts = split(grid, ',');
  if (parts.size() != 2) throw zs::ConfigError("grid", "expected nx,ny");
  const int nx = static_cast<int>(parse_number("grid", parts[0])), ny = static_cast<int>(parse_number("grid", parts[1]));
  if (nx < 2 || ny < 2) throw zs::ConfigError("grid", "needs at least 2 points per direction");
  const zs::Window& w = rc.window;
  std::vector<cd> values(static_cast<std::size_t>(nx) * ny);
  zs::parallel_for(values.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
    const cd z(w.re_min + w.width() * i / (nx - 1), w.im_min + w.height() * j / (ny - 1));
    values[k] = zs::discriminant(rc.potential, {z, eps});
  });
  Json pts = Json::array();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
    pts.push_back({{"re", w.re_min + w.width() * i / (nx - 1)},
                   {"im", w.im_min + w.height() * j / (ny - 1)},
                   {"delta", zs::io::complex_pair(values[k])}});
  }
  Json doc = zs::io::document(rc.raw);
  doc["potential"] = zs::io::to_json(rc.potential);
  doc["grid"] = {{"nx", nx}, {"ny", ny}, {"points", pts}};
  emit(rc, doc, nullptr, nullptr);
  return kOk;
}

int cmd_dirichlet(const Flags& flags, const std::string& variant) {
  const RunConfig rc = parse_config(flags, false);
  zs::DirichletVariant v;
  if (variant == "Sum") v = zs::DirichletVariant::Sum;
  else if (variant == "Difference") v = zs::DirichletVariant::Difference;
  else throw zs::ConfigError("variant", "must be Sum or Difference");
  const auto roots = zs::dirichlet_spectrum(rc.potential, rc.eps.front(), rc.window, v);
  Json doc = zs::io::document(rc.raw);
  doc["potential"] = zs::io::to_json(rc.potential);
  doc["variant"] = variant;
  doc["dirichlet"] = zs::io::to_json(roots);
  emit(rc, doc, nullptr, nullptr);
  return kOk;
}

int cmd_bounds_audit(const Flags& flags, const std::string& regions, double delta, int N, int count_max_n) {
  const RunConfig rc = parse_config(flags, false);
  const double eps = rc.eps.front();
  std::vector<zs::BoundRegion> rs;
  for (const auto& name : split(regions, ',')) {
    zs::RegionKind k;
    try {
      k = zs::region_kind_from_string(name);
    } catch (const zs::DomainError&) {
      throw zs::ConfigError("regions", "unknown region '" + name + "'");
    }
    rs.push_back(zs::BoundRegion::from_potential(k, rc.potential, eps, delta, N));
  }
  const zs::SpectrumCloud cloud = compute_cloud(rc, eps);
  const zs::BoundReport rep = zs::audit_cloud(cloud, rs);
  Json doc = zs::io::document(rc.raw);
  doc["potential"] = zs::io::to_json(rc.potential);
  doc["cloud"] = zs::io::to_json(cloud);
  doc["bound_report"] = zs::io::to_json(rep);
  if (count_max_n > 0) doc["counting"] = zs::io::to_json(zs::best_count_in_regions(rc.potential, eps, count_max_n));
  const auto fig = spectrum_figure("Bound audit, " + rc.potential.describe(), rc.potential, eps, rc.window, cloud, {});
  emit(rc, doc, &cloud, &fig);
  return rep.total_violations() == 0 ? kOk : kCheckFailed;
}

// Log-log markers for positive observables and the dashed fitted line.
void sweep_figure(zs::io::SvgFigure& fig, const zs::SweepResult& r) {
  double lo = 1e300, hi = -1e300, ylo = 1e300, yhi = -1e300;
  for (std::size_t k = 0; k < r.eps_values.size(); ++k) {
    if (!(r.observable[k] > 0.0)) continue;
    const double x = std::log10(r.eps_values[k]), y = std::log10(r.observable[k]);
    fig.markers.emplace_back(x, y);
    lo = std::min(lo, x), hi = std::max(hi, x), ylo = std::min(ylo, y), yhi = std::max(yhi, y);
  }
  if (fig.markers.empty()) return;
  const double px = std::max(0.05, 0.1 * (hi - lo)), py = std::max(0.05, 0.1 * (yhi - ylo));
  fig.x_min = lo - px, fig.x_max = hi + px, fig.y_min = ylo - py, fig.y_max = yhi + py;
  if (std::isfinite(r.fitted_exponent)) {
    // Natural-log fit: log10 obs = alpha log10 eps + c / ln 10.
    auto line = [&](double x) { return r.fitted_exponent * x + r.intercept / std::log(10.0); };
    fig.dashed.push_back({{fig.x_min, line(fig.x_min)}, {fig.x_max, line(fig.x_max)}});
  }
}

int cmd_sweep(const Flags& flags, const std::string& observable, bool positive_re, bool real_part,
              bool real_emanating) {
  const RunConfig rc = parse_config(flags, true);
  zs::SweepOptions so;
  try {
    so.observable = zs::observable_from_string(observable);
  } catch (const zs::DomainError&) {
    throw zs::ConfigError("observable", "unknown observable '" + observable + "'");
  }
  so.nu_points = rc.nu_points;
  so.residual_tol = rc.residual_tol;
  so.positive_re_only = positive_re;
  so.measure_real_part = real_part;
  so.real_emanating_only = real_emanating;
  so.band_re_max = rc.window.re_max;
  if (rc.eps.size() < 3) throw zs::ConfigError("eps", "a sweep needs at least three values");
  for (std::size_t k = 1; k < rc.eps.size(); ++k)
    if (!(rc.eps[k] < rc.eps[k - 1])) throw zs::ConfigError("eps", "sweep values must be strictly decreasing");
  const zs::SweepResult r = zs::epsilon_sweep(rc.potential, rc.eps, so);
  Json doc = zs::io::document(rc.raw);
  doc["potential"] = zs::io::to_json(rc.potential);
  doc["sweep"] = zs::io::to_json(r, so.observable);
  zs::io::SvgFigure fig;
  fig.title = std::string(zs::to_string(so.observable)) + " against eps";
  fig.x_label = "log10 eps";
  fig.y_label = "log10 observable";
  fig.marker_shape = zs::io::MarkerShape::Triangle;
  sweep_figure(fig, r);
  emit(rc, doc, nullptr, &fig);
  return kOk;
}

// Halton points in [-a, a] x [-b, b]; deterministic without RNG state.
std::vector<cd> halton_points(int n, double a, double b) {
  auto radical = [](int i, int base) {
    double f = 1.0, r = 0.0;
    for (; i > 0; i /= base) {
      f /= base;
      r += f * (i % base);
    }
    return r;
  };
  std::vector<cd> out;
  for (int k = 1; k <= n; ++k) out.emplace_back(a * (2.0 * radical(k, 2) - 1.0), b * (2.0 * radical(k, 3) - 1.0));
  return out;
}

std::optional<std::function<cd(cd)>> closed_form(const zs::PeriodicPotential& p, double eps) {
  const auto& pp = p.params();
  const double L = p.period();
  switch (p.kind()) {
    case zs::PotentialKind::Constant:
      return [=](cd z) { return zs::constant_discriminant(pp.A, L, eps, z); };
    case zs::PotentialKind::PlaneWave:
      return [=](cd z) { return zs::plane_wave_discriminant(pp.A, pp.V, L, eps, z); };
    case zs::PotentialKind::Signum:
      return [=](cd z) { return zs::signum_discriminant(pp.A, L, eps, z); };
    default:
      return std::nullopt;
  }
}

int cmd_validate(const Flags& flags, int n_points, double tol) {
  const RunConfig rc = parse_config(flags, false);
  const double eps = rc.eps.front();
  if (n_points < 1) throw zs::ConfigError("points", "must be positive");
  if (!(tol > 0.0)) throw zs::ConfigError("tol", "must be positive");
  const auto pts = halton_points(n_points, 3.0, 2.0);
  zs::MonodromyOptions mo;
  mo.tol = 1e-12;
  mo.integrator = zs::Integrator::Magnus6;
  std::vector<zs::SymmetryReport> reps(pts.size());
  std::vector<double> oracle(pts.size(), 0.0);
  const auto cf = closed_form(rc.potential, eps);
  zs::parallel_for(pts.size(), [&](std::size_t k) {
    reps[k] = zs::check_symmetries(rc.potential, {pts[k], eps}, mo);
    if (cf) {
      const cd d = zs::propagate_monodromy(rc.potential, {pts[k], eps}, mo).delta();
      oracle[k] = std::abs(d - (*cf)(pts[k]));
    }
  });
  double schwarz = 0, det = 0, oracle_max = 0;
  std::optional<double> real, refl, pt;
  auto upd = [](std::optional<double>& acc, const std::optional<double>& v) {
    if (v) acc = std::max(acc.value_or(0.0), *v);
  };
  for (std::size_t k = 0; k < pts.size(); ++k) {
    schwarz = std::max(schwarz, reps[k].schwarz);
    det = std::max(det, reps[k].det_defect);
    upd(real, reps[k].real);
    upd(refl, reps[k].reflection);
    upd(pt, reps[k].pt);
    oracle_max = std::max(oracle_max, oracle[k]);
  }
  auto opt_json = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  bool pass = schwarz <= tol && det <= tol && real.value_or(0.0) <= tol && refl.value_or(0.0) <= tol &&
              pt.value_or(0.0) <= tol;
  Json doc = zs::io::document(rc.raw);
  doc["potential"] = zs::io::to_json(rc.potential);
  doc["symmetry"] = {{"points", n_points},     {"schwarz", schwarz},     {"real", opt_json(real)},
                     {"reflection", opt_json(refl)}, {"pt", opt_json(pt)}, {"det_defect", det}};
  if (cf) {
    doc["oracle"] = {{"max_abs_delta_error", oracle_max}};
    pass = pass && oracle_max <= tol;
  } else {
    doc["oracle"] = nullptr;
  }
  doc["tolerance"] = tol;
  doc["pass"] = pass;
  emit(rc, doc, nullptr, nullptr);
  return pass ? kOk : kCheckFailed;
}

struct FigurePreset {
  std::string kind;
  Json potential;
  double eps;
  double re_half;  // view is [-re_half, re_half] x [-1.25|q| - 0.25, ...]
};

const std::map<std::string, FigurePreset>& presets() {
  static const std::map<std::string, FigurePreset> m = {
      {"fig4-left", {"cloud", {{"kind", "plane_wave"}, {"A", 1.0}, {"V", 1.0}}, 1.0, 3.0}},
      {"fig4-right", {"cloud", {{"kind", "plane_wave"}, {"A", 1.0}, {"V", 1.0}}, 0.2, 3.0}},
      {"fig5-left", {"cloud", {{"kind", "signum"}, {"A", 1.0}, {"L", 2.0}}, 0.019, 3.0}},
      {"fig5-right", {"sweep", {{"kind", "signum"}, {"A", 1.0}, {"L", 2.0}}, 0.0, 0.0}},
      {"fig6-left", {"cloud", {{"kind", "exp_sin_sq"}, {"A", 1.0}, {"L", kPi}}, 1.0, 3.0}},
      {"fig6-right", {"cloud", {{"kind", "exp_sin_sq"}, {"A", 1.0}, {"L", kPi}}, 0.079, 3.0}},
      {"fig7-left", {"cloud", {{"kind", "jacobi_dn"}, {"m", 0.6}}, 0.5, 3.0}},
      {"fig7-right", {"cloud", {{"kind", "jacobi_dn"}, {"m", 0.6}}, 0.1, 3.0}},
      {"fig8-left", {"cloud", {{"kind", "rapid_phase"}, {"shape", "cos"}, {"A", 1.0}, {"S", 1.0}, {"L", kPi}}, 0.22, 3.0}},
      {"fig8-right", {"cloud", {{"kind", "rapid_phase"}, {"shape", "cos"}, {"A", 1.0}, {"S", 1.0}, {"L", kPi}}, 0.019, 3.0}},
      {"fig9-left", {"cloud", {{"kind", "rapid_phase"}, {"shape", "dn"}, {"m", 0.88}, {"S", 2.0}}, 0.2, 3.0}},
      {"fig9-right", {"cloud", {{"kind", "rapid_phase"}, {"shape", "dn"}, {"m", 0.88}, {"S", 2.0}}, 0.03, 3.0}},
  };
  return m;
}

int cmd_figure(const Flags& flags, const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw zs::ConfigError("name", "unknown figure '" + name + "'");
  const FigurePreset& fp = it->second;
  Json raw = load_config(flags.config_path);
  apply_flags(raw, flags);
  // The preset fixes the potential; everything else may still be overridden.
  raw["potential"] = fp.potential;
  raw["figure"] = name;
  if (!raw.contains("outputs")) raw["outputs"] = {"svg", "json"};
  if (!raw.contains("out")) raw["out"] = name;
  const bool sweep = fp.kind == "sweep";
  if (!raw.contains("eps")) {
    if (sweep) raw["eps"] = {0.15, 0.1, 0.07, 0.05, 0.035, 0.025, 0.019};
    else raw["eps"] = fp.eps;
  }
  if (!sweep && !raw.contains("window")) {
    const auto p = build_potential(raw["potential"]);
    const double eps = raw["eps"].is_number() ? raw["eps"].get<double>() : fp.eps;
    const auto cfg = zs::default_hill_config(p, eps);
    const double trust = cfg.trust_fraction * eps * 2.0 * kPi * cfg.n_modes / p.period();
    const double re = std::min(fp.re_half, trust), im = 1.5 * p.norms(eps).sup_norm;
    raw["window"] = {{"re_min", -re}, {"re_max", re}, {"im_min", -im}, {"im_max", im}};
  }
  const RunConfig rc = parse_config_json(std::move(raw), sweep);
  if (sweep) {
    zs::SweepOptions so;
    so.observable = zs::Observable::MaxImOffReal;
    so.positive_re_only = true;
    so.real_emanating_only = true;
    so.band_re_max = rc.window.re_max;
    so.nu_points = rc.nu_points;
    so.residual_tol = rc.residual_tol;
    const zs::SweepResult r = zs::epsilon_sweep(rc.potential, rc.eps, so);
    Json doc = zs::io::document(rc.raw);
    doc["potential"] = zs::io::to_json(rc.potential);
    doc["sweep"] = zs::io::to_json(r, so.observable);
    zs::io::SvgFigure fig;
    fig.title = "max Im z off R against eps, " + rc.potential.describe();
    fig.x_label = "log10 eps";
    fig.y_label = "log10 max |Im z|";
    fig.marker_shape = zs::io::MarkerShape::Triangle;
    sweep_figure(fig, r);
    emit(rc, doc, nullptr, &fig);
    return kOk;
  }
  const double eps = rc.eps.front();
  const zs::SpectrumCloud cloud = compute_cloud(rc, eps);
  Json doc = zs::io::document(rc.raw);
  doc["potential"] = zs::io::to_json(rc.potential);
  doc["cloud"] = zs::io::to_json(cloud);
  std::ostringstream title;
  title << rc.potential.describe() << ", eps = " << eps;
  const auto fig = spectrum_figure(title.str(), rc.potential, eps, rc.window, cloud, {});
  emit(rc, doc, &cloud, &fig);
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Semiclassical Zakharov-Shabat spectra of periodic potentials"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON run configuration");
    sub->add_option("--kind", flags.kind, "potential kind");
    sub->add_option("--shape", flags.shape, "rapid_phase shape: cos or dn");
    sub->add_option("--A", flags.A, "amplitude");
    sub->add_option("--V", flags.V, "plane-wave wavenumber");
    sub->add_option("--m", flags.m, "elliptic parameter");
    sub->add_option("--L", flags.L, "period");
    sub->add_option("--S", flags.S, "rapid-phase scale");
    sub->add_option("--eps", flags.eps, "semiclassical parameter, or a comma list for sweeps");
    sub->add_option("--engine", flags.engine, "hill, monodromy or both");
    sub->add_option("--window", flags.window, "re_min,re_max,im_min,im_max");
    sub->add_option("--nu-points", flags.nu_points, "Floquet grid size");
    sub->add_option("--n-modes", flags.n_modes, "Hill truncation N");
    sub->add_option("--residual-tol", flags.residual_tol, "monodromy residual filter");
    sub->add_option("--out", flags.out, "artifact prefix; JSON goes to stdout when absent");
    sub->add_option("--outputs", flags.formats, "comma list of json, csv, svg");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Lax spectrum cloud");
  common(spectrum);
  bool trace = false;
  spectrum->add_flag("--bands", trace, "trace Im Delta = 0 bands in the window and classify them");

  auto* disc = app.add_subcommand("discriminant", "Delta on a grid over the window");
  common(disc);
  std::string grid = "41,41";
  disc->add_option("--grid", grid, "nx,ny");

  auto* dir = app.add_subcommand("dirichlet", "Dirichlet eigenvalues in the window");
  common(dir);
  std::string variant = "Sum";
  dir->add_option("--variant", variant, "Sum or Difference");

  auto* audit = app.add_subcommand("bounds-audit", "check the cloud against confinement regions");
  common(audit);
  std::string regions = "Strip,Lambda,LambdaTilde,SigmaInftyNbhd";
  double delta = 0.1;
  int N = 1, count_n = 0;
  audit->add_option("--regions", regions, "comma list of region kinds");
  audit->add_option("--delta", delta, "SigmaInftyNbhd radius");
  audit->add_option("--N", N, "counting index for Pi and Xi");
  audit->add_option("--count-max-N", count_n, "also count eigenvalues in Pi and Xi for N = 1..value");

  auto* sweep = app.add_subcommand("sweep", "observable against eps with a power-law fit");
  common(sweep);
  std::string observable = "MaxImOffReal";
  bool positive_re = false, real_part = false, real_emanating = false;
  sweep->add_option("--observable", observable, "MaxImOffReal, BandCountImagAxis or HausdorffToSigmaInfty");
  sweep->add_flag("--positive-re-only", positive_re, "MaxImOffReal over Re z > 0 only");
  sweep->add_flag("--measure-real-part", real_part, "MaxImOffReal reports max |Re z| instead");
  sweep->add_flag("--real-emanating", real_emanating,
                  "MaxImOffReal over bands crossing R at Re z > 0, up to the window's re_max");

  auto* validate = app.add_subcommand("validate", "closed-form agreement and monodromy symmetries");
  common(validate);
  int points = 50;
  double tol = 1e-9;
  validate->add_option("--points", points, "sample points in |Re z| <= 3, |Im z| <= 2");
  validate->add_option("--tol", tol, "pass threshold");

  auto* figure = app.add_subcommand("figure", "reproduce a preset figure");
  common(figure);
  std::string name;
  figure->add_option("--name", name, "fig4-left ... fig9-right, fig5-right is the sweep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  if (*spectrum) return cmd_spectrum(flags, trace);
  if (*disc) return cmd_discriminant(flags, grid);
  if (*dir) return cmd_dirichlet(flags, variant);
  if (*audit) return cmd_bounds_audit(flags, regions, delta, N, count_n);
  if (*sweep) return cmd_sweep(flags, observable, positive_re, real_part, real_emanating);
  if (*validate) return cmd_validate(flags, points, tol);
  if (*figure) return cmd_figure(flags, name);
  return kOther;
}

int report(const char* what, const std::exception& e, int code) {
  std::cerr << "zs_spectra: " << what << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const zs::ConfigError& e) {
    return report("configuration error", e, kConfig);
  } catch (const zs::DomainError& e) {
    return report("domain error", e, kDomain);
  } catch (const zs::StepFailure& e) {
    return report("integration failed", e, kIntegration);
  } catch (const zs::ToleranceNotMet& e) {
    return report("tolerance not met", e, kIntegration);
  } catch (const zs::EigensolverFailure& e) {
    return report("eigensolver failed", e, kEigensolver);
  } catch (const zs::CountMismatch& e) {
    return report("root count mismatch", e, kRootFinding);
  } catch (const zs::BoundaryTooClose& e) {
    return report("zero too close to a contour", e, kRootFinding);
  } catch (const zs::ClosedCurveDetected& e) {
    return report("closed curve", e, kTracing);
  } catch (const zs::SeedExhausted& e) {
    return report("no seeds", e, kTracing);
  } catch (const zs::UnboundedParameter& e) {
    return report("unbounded parameter", e, kUnbounded);
  } catch (const zs::DiscontinuityError& e) {
    return report("discontinuity", e, kPotential);
  } catch (const zs::NotRealPotential& e) {
    return report("potential not real", e, kPotential);
  } catch (const std::exception& e) {
    return report("error", e, kOther);
  }
}
