#include "zs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "zs/errors.hpp"

namespace zs {

namespace {

constexpr double kPi = std::numbers::pi;

double require(const std::optional<double>& v, const char* what, RegionKind k) {
  if (!v) {
    std::ostringstream os;
    os << to_string(k) << " needs " << what << ", which is unbounded for this potential";
    throw UnboundedParameter(os.str());
  }
  return *v;
}

// Distance from z to R u i[-s, s].
double sigma_infty_distance(cd z, double s) {
  const double to_real = std::abs(z.imag());
  const double to_segment = std::hypot(z.real(), std::max(0.0, std::abs(z.imag()) - s));
  return std::min(to_real, to_segment);
}

}  // namespace

const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Strip: return "Strip";
    case RegionKind::Lambda: return "Lambda";
    case RegionKind::LambdaTilde: return "LambdaTilde";
    case RegionKind::SigmaInftyNbhd: return "SigmaInftyNbhd";
    case RegionKind::Pi: return "Pi";
    case RegionKind::Xi: return "Xi";
    case RegionKind::WkbStrip: return "WkbStrip";
  }
  return "?";
}

RegionKind region_kind_from_string(const std::string& s) {
  for (RegionKind k : {RegionKind::Strip, RegionKind::Lambda, RegionKind::LambdaTilde, RegionKind::SigmaInftyNbhd,
                       RegionKind::Pi, RegionKind::Xi, RegionKind::WkbStrip})
    if (s == to_string(k)) return k;
  throw DomainError("unknown region kind '" + s + "'");
}

BoundRegion BoundRegion::from_potential(RegionKind kind, const PeriodicPotential& p, double eps, double delta, int N) {
  const PotentialNorms n = p.norms(eps);
  BoundRegion r;
  r.kind = kind;
  r.sup_norm = n.sup_norm;
  r.deriv_sup_norm = n.deriv_sup_norm;
  r.log_deriv_sup_norm = n.log_deriv_sup_norm;
  r.eps = eps;
  r.delta = delta;
  r.N = N;
  r.L = p.period();
  return r;
}

double BoundRegion::disc_radius() const { return (N - 0.5) * kPi * eps / L; }

double BoundRegion::excess(cd z) const {
  const double x = std::abs(z.real()), y = std::abs(z.imag());
  const double strip = y - sup_norm;
  auto lambda = [&] {
    const double d = require(deriv_sup_norm, "|q'|_inf", kind);
    return std::max(strip, x * y - 0.5 * eps * d);
  };
  switch (kind) {
    case RegionKind::Strip: return strip;
    case RegionKind::Lambda: return lambda();
    case RegionKind::LambdaTilde: return y - 2.0 * sup_norm;
    case RegionKind::SigmaInftyNbhd: return sigma_infty_distance(z, sup_norm) - delta;
    case RegionKind::Pi: return std::max(lambda(), std::abs(z) - disc_radius());
    case RegionKind::Xi: return std::max(strip, std::abs(z) - disc_radius());
    case RegionKind::WkbStrip: {
      const double g = require(log_deriv_sup_norm, "|q'/q|_inf", kind);
      if (z.real() <= wkb_re_floor) return -std::numeric_limits<double>::infinity();
      return y - 0.5 * eps * g;
    }
  }
  return 0.0;
}

std::string BoundRegion::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << to_string(kind) << "(|q|=" << sup_norm;
  if (kind == RegionKind::Lambda || kind == RegionKind::Pi)
    os << ", |q'|=" << (deriv_sup_norm ? std::to_string(*deriv_sup_norm) : std::string("unbounded"));
  if (kind == RegionKind::WkbStrip)
    os << ", |q'/q|=" << (log_deriv_sup_norm ? std::to_string(*log_deriv_sup_norm) : std::string("unbounded"));
  if (kind == RegionKind::SigmaInftyNbhd) os << ", delta=" << delta;
  if (kind == RegionKind::Pi || kind == RegionKind::Xi) os << ", N=" << N << ", L=" << L;
  os << ", eps=" << eps << ")";
  return os.str();
}

std::size_t BoundReport::total_violations() const {
  std::size_t n = 0;
  for (const auto& a : audits) n += a.violations;
  return n;
}

BoundReport audit_cloud(const SpectrumCloud& cloud, const std::vector<BoundRegion>& regions) {
  BoundReport rep;
  for (const BoundRegion& r : regions) {
    RegionAudit a;
    a.region = r;
    try {
      a.worst_excess = -std::numeric_limits<double>::infinity();
      a.inside.reserve(cloud.points.size());
      for (const auto& pt : cloud.points) {
        const double e = r.excess(pt.z);
        a.worst_excess = std::max(a.worst_excess, e);
        const bool in = e <= kRegionPad;
        a.inside.push_back(in);
        ++a.checked;
        if (!in) ++a.violations;
      }
      if (cloud.points.empty()) a.worst_excess = 0.0;
    } catch (const UnboundedParameter& e) {
      a.evaluated = false;
      a.skipped_reason = e.what();
      a.checked = a.violations = 0;
      a.worst_excess = 0.0;
      a.inside.clear();
    }
    rep.audits.push_back(std::move(a));
  }
  return rep;
}

int CountingReport::mismatch() const {
  return std::abs(periodic - predicted_periodic) + std::abs(antiperiodic - predicted_antiperiodic) +
         std::abs(dirichlet - predicted_dirichlet);
}

CountingReport count_in_regions(const PeriodicPotential& p, double eps, int N, const SpectraOptions& opt) {
  if (N < 1) throw DomainError("count_in_regions: N must be positive");
  const BoundRegion pi = BoundRegion::from_potential(RegionKind::Pi, p, eps, 0.1, N);
  BoundRegion xi = pi;
  xi.kind = RegionKind::Xi;
  CountingReport rep;
  rep.N = N;
  rep.radius = pi.disc_radius();
  rep.predicted_periodic = 2 * N - 2;
  rep.predicted_antiperiodic = 2 * N;
  rep.predicted_dirichlet = 2 * N - 1;
  // The search window covers the disc within the strip; the asymmetric margins keep
  // its edges off the symmetry axes, where eigenvalues tend to sit.
  const double h = pi.sup_norm;
  const Window w{-rep.radius * 1.0173 - 0.0113, rep.radius * 1.0131 + 0.0127, -h - 0.0519, h + 0.0487};
  for (const EdgeEigenvalue& e : periodic_antiperiodic_eigenvalues(p, eps, w, opt)) {
    if (!pi.contains(e.z)) continue;
    (e.type == EdgeType::Periodic ? rep.periodic : rep.antiperiodic) += e.multiplicity;
  }
  for (const Root& r : dirichlet_spectrum(p, eps, w, DirichletVariant::Sum, opt))
    if (xi.contains(r.z)) rep.dirichlet += r.multiplicity;
  return rep;
}

CountingReport best_count_in_regions(const PeriodicPotential& p, double eps, int n_max, const SpectraOptions& opt) {
  if (n_max < 1) throw DomainError("best_count_in_regions: n_max must be positive");
  CountingReport best;
  bool have = false;
  for (int N = 1; N <= n_max; ++N) {
    const CountingReport r = count_in_regions(p, eps, N, opt);
    if (!have || r.mismatch() < best.mismatch()) {
      best = r;
      have = true;
    }
    if (best.matches()) break;
  }
  return best;
}

const char* to_string(Observable o) {
  switch (o) {
    case Observable::MaxImOffReal: return "MaxImOffReal";
    case Observable::BandCountImagAxis: return "BandCountImagAxis";
    case Observable::HausdorffToSigmaInfty: return "HausdorffToSigmaInfty";
  }
  return "?";
}

Observable observable_from_string(const std::string& s) {
  for (Observable o : {Observable::MaxImOffReal, Observable::BandCountImagAxis, Observable::HausdorffToSigmaInfty})
    if (s == to_string(o)) return o;
  throw DomainError("unknown observable '" + s + "'");
}

double hausdorff_to_sigma_infty(const SpectrumCloud& cloud, double sup_norm) {
  double d = 0.0;
  for (const auto& pt : cloud.points) d = std::max(d, sigma_infty_distance(pt.z, sup_norm));
  return d;
}

namespace {

double segment_distance(cd z, cd a, cd b) {
  const cd ab = b - a;
  const double len2 = std::norm(ab);
  const double t = len2 > 0.0 ? std::clamp(std::real((z - a) * std::conj(ab)) / len2, 0.0, 1.0) : 0.0;
  return std::abs(z - (a + t * ab));
}

// Polylines of the off-real bands crossing R at 0 < Re z <= re_max.
std::vector<std::vector<cd>> real_emanating_bands(const PeriodicPotential& p, double eps, const SweepOptions& opt) {
  const double h = 1.3 * p.norms(eps).sup_norm + 0.25;
  std::vector<std::vector<cd>> out;
  for (const Band& b : trace_gamma_contours(p, eps, {opt.off_axis_floor, opt.band_re_max, -h, h})) {
    if (b.on_real_axis || !b.crosses_real_at || b.crosses_real_at->real() <= opt.off_axis_floor) continue;
    out.push_back(b.polyline);
  }
  return out;
}

bool on_any_band(cd z, const std::vector<std::vector<cd>>& bands, double tol) {
  for (const auto& pl : bands)
    for (std::size_t k = 0; k + 1 < pl.size(); ++k)
      if (segment_distance(z, pl[k], pl[k + 1]) <= tol) return true;
  return false;
}

double max_off_real(const SpectrumCloud& cloud, const PeriodicPotential& p, double eps, const SweepOptions& opt) {
  std::vector<std::vector<cd>> bands;
  if (opt.real_emanating_only) bands = real_emanating_bands(p, eps, opt);
  double m = 0.0;
  for (const auto& pt : cloud.points) {
    const cd z = pt.z;
    if (std::abs(z.imag()) <= opt.off_real_floor) continue;
    if ((opt.positive_re_only || opt.real_emanating_only) && z.real() <= opt.off_axis_floor) continue;
    if (opt.real_emanating_only && !on_any_band(z, bands, 1e-2 * eps)) continue;
    m = std::max(m, opt.measure_real_part ? std::abs(z.real()) : std::abs(z.imag()));
  }
  return m;
}

// Bands on the upper imaginary axis that hold cloud points. Consecutive points
// belong to one band unless |Delta| exceeds 1 at one of the probes between them;
// gaps narrower than the probe spacing merge their bands, as closed gaps do.
double band_count_imag_axis(const SpectrumCloud& cloud, const PeriodicPotential& p, double eps,
                            const SweepOptions& opt) {
  std::vector<double> ys;
  for (const auto& pt : cloud.points) {
    const cd z = pt.z;
    if (z.imag() > opt.off_real_floor && std::abs(z.real()) <= opt.off_axis_floor * (1.0 + std::abs(z)))
      ys.push_back(z.imag());
  }
  std::sort(ys.begin(), ys.end());
  if (ys.empty()) return 0.0;
  constexpr int kProbes = 8;
  const MonodromyOptions mo{1e-10, Derivatives::None};
  int bands = 1;
  for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
    if (ys[k + 1] - ys[k] <= 1e-9 * (1.0 + ys[k])) continue;
    for (int j = 1; j <= kProbes; ++j) {
      const double y = ys[k] + (ys[k + 1] - ys[k]) * j / (kProbes + 1.0);
      if (std::abs(propagate_monodromy(p, {cd(0.0, y), eps}, mo).delta()) > 1.0 + 1e-9) {
        ++bands;
        break;
      }
    }
  }
  return bands;
}

}  // namespace

double observable_value(const SpectrumCloud& cloud, const PeriodicPotential& p, double eps, const SweepOptions& opt) {
  switch (opt.observable) {
    case Observable::MaxImOffReal: return max_off_real(cloud, p, eps, opt);
    case Observable::BandCountImagAxis: return band_count_imag_axis(cloud, p, eps, opt);
    case Observable::HausdorffToSigmaInfty: return hausdorff_to_sigma_infty(cloud, p.norms(eps).sup_norm);
  }
  return 0.0;
}

SweepResult epsilon_sweep(const PeriodicPotential& p, const std::vector<double>& eps_values, const SweepOptions& opt) {
  if (eps_values.size() < 3) throw DomainError("epsilon_sweep needs at least three eps values");
  for (std::size_t k = 0; k < eps_values.size(); ++k) {
    if (!(eps_values[k] > 0.0 && eps_values[k] <= 1.0)) throw DomainError("epsilon_sweep: eps must lie in (0, 1]");
    if (k > 0 && !(eps_values[k] < eps_values[k - 1]))
      throw DomainError("epsilon_sweep: eps values must be strictly decreasing");
  }
  SweepResult res;
  res.eps_values = eps_values;
  // Each Hill solve already runs its nu grid on the worker pool.
  for (const double eps : eps_values) {
    HillConfig cfg = default_hill_config(p, eps, opt.nu_points);
    cfg.residual_tol = opt.residual_tol;
    const SpectrumCloud cloud = lax_spectrum_hill(p, cfg);
    res.cloud_sizes.push_back(cloud.points.size());
    res.observable.push_back(observable_value(cloud, p, eps, opt));
  }
  const double floor = opt.fit_floor_factor * opt.residual_tol;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < eps_values.size(); ++k) {
    const bool use = res.observable[k] > floor;
    res.used_in_fit.push_back(use);
    if (use) {
      xs.push_back(std::log(eps_values[k]));
      ys.push_back(std::log(res.observable[k]));
    }
  }
  if (xs.size() < 2) {
    res.fitted_exponent = res.intercept = res.fit_residual = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k] / n;
    my += ys[k] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  res.fitted_exponent = sxy / sxx;
  res.intercept = my - res.fitted_exponent * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (res.fitted_exponent * xs[k] + res.intercept);
    ss += r * r;
  }
  res.fit_residual = std::sqrt(ss / n);
  return res;
}

}  // namespace zs
