#include "zs/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zs/errors.hpp"

namespace zs::io {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  // "-0.00" and "0.00" are the same pixel.
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick spacing giving roughly `target` intervals over [lo, hi].
double tick_step(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

std::string tick_label(double v, double step) {
  char buf[64];
  const int digits = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
  std::snprintf(buf, sizeof buf, "%.*f", digits, std::abs(v) < 1e-12 * step ? 0.0 : v);
  return buf;
}

}  // namespace

Json complex_pair(cd z) { return Json::array({number(z.real()), number(z.imag())}); }

Json to_json(const PeriodicPotential& p) {
  const PotentialParams& pp = p.params();
  Json j;
  j["kind"] = to_string(p.kind());
  j["L"] = number(p.period());
  j["A"] = number(pp.A);
  j["V"] = number(pp.V);
  j["m"] = number(pp.m);
  j["S"] = number(pp.S);
  j["epsilon_coupled"] = p.epsilon_coupled();
  return j;
}

Json to_json(const SpectrumCloud& cloud) {
  Json a = Json::array();
  for (const auto& pt : cloud.points) {
    Json j;
    j["re"] = number(pt.z.real());
    j["im"] = number(pt.z.imag());
    j["nu"] = number(pt.nu);
    j["residual"] = number(pt.residual);
    j["engine"] = to_string(pt.engine);
    a.push_back(std::move(j));
  }
  return a;
}

Json to_json(const Band& b) {
  Json j;
  Json poly = Json::array();
  for (const cd z : b.polyline) poly.push_back(complex_pair(z));
  j["polyline"] = std::move(poly);
  Json edges = Json::array();
  for (const BandEnd& e : {b.first, b.last}) {
    Json je;
    je["z"] = complex_pair(e.z);
    je["type"] = to_string(e.kind);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  j["on_real_axis"] = b.on_real_axis;
  j["is_spine"] = b.is_spine;
  j["crosses_real_at"] = b.crosses_real_at ? complex_pair(*b.crosses_real_at) : Json(nullptr);
  j["crossing_angle_deg"] = number(b.crossing_angle_deg);
  Json sad = Json::array();
  for (const cd s : b.saddles) sad.push_back(complex_pair(s));
  j["saddles"] = std::move(sad);
  return j;
}

Json to_json(const std::vector<Band>& bands) {
  Json a = Json::array();
  for (const Band& b : bands) a.push_back(to_json(b));
  return a;
}

Json to_json(const BandClassification& c) {
  Json j;
  j["off_real_bands"] = c.off_real_bands;
  j["spines"] = c.spines;
  j["non_spine_bands"] = c.non_spine_bands;
  j["finite_band_in_region"] = c.finite_band_in_region;
  Json cr = Json::array();
  for (const SpineInfo& s : c.spine_crossings) {
    Json js;
    js["crossing"] = complex_pair(s.crossing);
    js["lattice_distance"] = number(s.lattice_distance);
    js["angle_deg"] = number(s.angle_deg);
    cr.push_back(std::move(js));
  }
  j["spine_crossings"] = std::move(cr);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  Json regions = Json::array();
  for (const RegionAudit& a : r.audits) {
    Json ja;
    ja["kind"] = to_string(a.region.kind);
    ja["region"] = a.region.describe();
    ja["evaluated"] = a.evaluated;
    ja["skipped_reason"] = a.skipped_reason;
    ja["checked"] = a.checked;
    ja["violations"] = a.violations;
    ja["worst_excess"] = number(a.worst_excess);
    regions.push_back(std::move(ja));
  }
  j["regions"] = std::move(regions);
  j["total_violations"] = r.total_violations();
  return j;
}

Json to_json(const CountingReport& r) {
  Json j;
  j["N"] = r.N;
  j["radius"] = number(r.radius);
  j["periodic"] = r.periodic;
  j["antiperiodic"] = r.antiperiodic;
  j["dirichlet"] = r.dirichlet;
  j["predicted_periodic"] = r.predicted_periodic;
  j["predicted_antiperiodic"] = r.predicted_antiperiodic;
  j["predicted_dirichlet"] = r.predicted_dirichlet;
  j["matches"] = r.matches();
  return j;
}

Json to_json(const SweepResult& r, Observable o) {
  Json j;
  j["observable"] = to_string(o);
  Json pts = Json::array();
  for (std::size_t k = 0; k < r.eps_values.size(); ++k) {
    Json p;
    p["eps"] = number(r.eps_values[k]);
    p["value"] = number(r.observable[k]);
    p["used_in_fit"] = static_cast<bool>(r.used_in_fit[k]);
    p["cloud_size"] = r.cloud_sizes[k];
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  j["fitted_exponent"] = number(r.fitted_exponent);
  j["intercept"] = number(r.intercept);
  j["fit_residual"] = number(r.fit_residual);
  return j;
}

Json to_json(const std::vector<Root>& roots) {
  Json a = Json::array();
  for (const Root& r : roots) {
    Json j;
    j["re"] = number(r.z.real());
    j["im"] = number(r.z.imag());
    j["multiplicity"] = r.multiplicity;
    j["residual"] = number(r.residual);
    a.push_back(std::move(j));
  }
  return a;
}

Json document(const Json& config) {
  Json j;
  j["schema"] = kSchema;
  j["config"] = config;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cloud_csv(const SpectrumCloud& cloud) {
  std::string out = "re_z,im_z,nu,residual,engine\n";
  for (const auto& pt : cloud.points) {
    out += format_g17(pt.z.real()) + "," + format_g17(pt.z.imag()) + "," + format_g17(pt.nu) + "," +
           format_g17(pt.residual) + "," + to_string(pt.engine) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error("failed writing '" + path + "'");
}

std::string render_svg(const SvgFigure& fig) {
  constexpr double W = 640.0, H = 480.0, left = 70.0, right = 20.0, top = 40.0, bottom = 50.0;
  const double pw = W - left - right, ph = H - top - bottom;
  const double xr = fig.x_max - fig.x_min, yr = fig.y_max - fig.y_min;
  if (!(xr > 0.0) || !(yr > 0.0)) throw DomainError("render_svg: empty plot range");
  auto px = [&](double x) { return left + (x - fig.x_min) / xr * pw; };
  auto py = [&](double y) { return top + (fig.y_max - y) / yr * ph; };
  auto in_view = [&](double x, double y) {
    return x >= fig.x_min && x <= fig.x_max && y >= fig.y_min && y <= fig.y_max;
  };
  auto path_d = [&](const Polyline& pl) {
    std::string d;
    bool pen = false;
    for (const auto& [x, y] : pl) {
      if (!std::isfinite(x) || !std::isfinite(y)) {
        pen = false;
        continue;
      }
      d += (pen ? " L" : (d.empty() ? "M" : " M")) + fixed2(px(x)) + " " + fixed2(py(y));
      pen = true;
    }
    return d;
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  s << "<defs><clipPath id=\"plot\"><rect x=\"" << fixed2(left) << "\" y=\"" << fixed2(top) << "\" width=\""
    << fixed2(pw) << "\" height=\"" << fixed2(ph) << "\"/></clipPath></defs>\n";
  s << "<text x=\"" << fixed2(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"15\">" << escape_xml(fig.title) << "</text>\n";

  // Axes frame, ticks and labels.
  s << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s << "<rect x=\"" << fixed2(left) << "\" y=\"" << fixed2(top) << "\" width=\"" << fixed2(pw) << "\" height=\""
    << fixed2(ph) << "\"/>\n";
  s << "</g>\n<g id=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  const double xs = tick_step(fig.x_min, fig.x_max, 6), ys = tick_step(fig.y_min, fig.y_max, 6);
  for (double t = std::ceil(fig.x_min / xs) * xs; t <= fig.x_max + 1e-9 * xs; t += xs) {
    s << "<line x1=\"" << fixed2(px(t)) << "\" y1=\"" << fixed2(top + ph) << "\" x2=\"" << fixed2(px(t))
      << "\" y2=\"" << fixed2(top + ph + 5) << "\" stroke=\"black\"/>";
    s << "<text x=\"" << fixed2(px(t)) << "\" y=\"" << fixed2(top + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(t, xs) << "</text>\n";
  }
  for (double t = std::ceil(fig.y_min / ys) * ys; t <= fig.y_max + 1e-9 * ys; t += ys) {
    s << "<line x1=\"" << fixed2(left - 5) << "\" y1=\"" << fixed2(py(t)) << "\" x2=\"" << fixed2(left)
      << "\" y2=\"" << fixed2(py(t)) << "\" stroke=\"black\"/>";
    s << "<text x=\"" << fixed2(left - 8) << "\" y=\"" << fixed2(py(t) + 4) << "\" text-anchor=\"end\">"
      << tick_label(t, ys) << "</text>\n";
  }
  s << "</g>\n";
  s << "<text x=\"" << fixed2(left + pw / 2) << "\" y=\"" << fixed2(H - 10)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape_xml(fig.x_label)
    << "</text>\n";
  s << "<text x=\"16\" y=\"" << fixed2(top + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"13\" transform=\"rotate(-90 16 " << fixed2(top + ph / 2) << ")\">" << escape_xml(fig.y_label)
    << "</text>\n";

  s << "<g id=\"bands\" clip-path=\"url(#plot)\" stroke=\"#1f4e9c\" stroke-width=\"2\" fill=\"none\">\n";
  for (const Polyline& pl : fig.bands) {
    const std::string d = path_d(pl);
    if (!d.empty()) s << "<path d=\"" << d << "\"/>\n";
  }
  s << "</g>\n";

  s << "<g id=\"cloud\" clip-path=\"url(#plot)\" fill=\"#2a6fdb\" stroke=\"none\">\n";
  for (const auto& [x, y] : fig.markers) {
    if (!in_view(x, y)) continue;
    if (fig.marker_shape == MarkerShape::Circle) {
      s << "<circle cx=\"" << fixed2(px(x)) << "\" cy=\"" << fixed2(py(y)) << "\" r=\"1.5\"/>\n";
    } else {
      const double cx = px(x), cy = py(y);
      s << "<path fill=\"#c0392b\" d=\"M" << fixed2(cx) << " " << fixed2(cy - 5) << " L" << fixed2(cx + 4.5) << " "
        << fixed2(cy + 3.5) << " L" << fixed2(cx - 4.5) << " " << fixed2(cy + 3.5) << " Z\"/>\n";
    }
  }
  s << "</g>\n";

  s << "<g id=\"bounds\" clip-path=\"url(#plot)\" stroke=\"#8b0000\" stroke-width=\"1.5\" "
    << "stroke-dasharray=\"6 4\" fill=\"none\">\n";
  for (const Polyline& pl : fig.dashed) {
    const std::string d = path_d(pl);
    if (!d.empty()) s << "<path d=\"" << d << "\"/>\n";
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

std::vector<Polyline> bound_curve(double sup_norm, const std::optional<double>& deriv_sup_norm, double eps,
                                  double x_min, double x_max, int samples) {
  if (samples < 2) throw DomainError("bound_curve: need at least two samples");
  Polyline upper, lower;
  for (int k = 0; k < samples; ++k) {
    const double x = x_min + (x_max - x_min) * k / (samples - 1);
    double y = sup_norm;
    if (deriv_sup_norm && x != 0.0) y = std::min(y, 0.5 * eps * *deriv_sup_norm / std::abs(x));
    upper.emplace_back(x, y);
    lower.emplace_back(x, -y);
  }
  return {upper, lower};
}

}  // namespace zs::io
