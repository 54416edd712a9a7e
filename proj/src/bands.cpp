#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "zs/errors.hpp"
#include "zs/spectra.hpp"

namespace zs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cd I(0.0, 1.0);

// Delta and its first two z-derivatives, unscaled.
struct DVal {
  cd d, d1, d2;
};

struct Direction {
  double theta;
  bool band;  // Re Delta stays within [-1, 1] along it
};

struct Branch {
  std::vector<cd> pts;
  std::vector<double> w;
  BandEnd end;
  std::vector<cd> saddles;
  std::optional<cd> crossing;
  bool crossing_interior = false;
  double crossing_angle = 0.0;
};

struct Spawn {
  cd z;
  double theta;
};

double angle_to_real_deg(double theta) { return std::asin(std::min(1.0, std::abs(std::sin(theta)))) * 180.0 / kPi; }

double angle_diff(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return d > kPi ? 2.0 * kPi - d : d;
}

class Tracer {
 public:
  Tracer(const PeriodicPotential& p, double eps, const Window& region, const TraceOptions& opt)
      : p_(p), eps_(eps), L_(p.period()), region_(region), opt_(opt) {}

  DVal at(cd z) const {
    const MonodromyResult r = run(z, Derivatives::Second);
    const double s = std::exp(r.log_scale);
    return {s * 0.5 * (r.m(0, 0) + r.m(1, 1)), s * 0.5 * ((*r.dm)(0, 0) + (*r.dm)(1, 1)),
            s * 0.5 * ((*r.d2m)(0, 0) + (*r.d2m)(1, 1))};
  }

  cd delta(cd z) const { return run(z, Derivatives::None).delta(); }

  double base_step(cd z) const { return L_ / (64.0 * (1.0 + std::abs(z) / eps_)); }

  bool on_real(cd z) const { return std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z)); }

  // Newton on Delta' from z, staying within `radius`.
  std::optional<cd> critical_point(cd z, double radius) const {
    cd w = z;
    for (int it = 0; it < 80; ++it) {
      const DVal v = at(w);
      if (v.d2 == 0.0) return std::nullopt;
      const cd step = v.d1 / v.d2;
      w -= step;
      if (std::abs(w - z) > radius) return std::nullopt;
      if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) break;
    }
    return w;
  }

  // Newton on Delta - s from z.
  std::optional<cd> edge_point(cd z, double s, double radius) const {
    cd w = z;
    for (int it = 0; it < 60; ++it) {
      const DVal v = at(w);
      if (v.d1 == 0.0) return std::nullopt;
      const cd step = (v.d - s) / v.d1;
      w -= step;
      if (std::abs(w - z) > radius) return std::nullopt;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
    }
    if (std::abs(delta(w) - s) > 1e-9) return std::nullopt;
    return w;
  }

  // Gamma branches leaving the critical point zc. A simple saddle has four, at the
  // angles where Im(Delta'' e^{2i theta}) = 0; each is refined by bisection on a
  // circle of radius r. Degenerate points fall back to a full circle scan.
  std::vector<Direction> directions(cd zc, double r, double theta0) const {
    auto g = [&](double th) { return delta(zc + r * std::exp(I * th)).imag(); };
    const DVal v = at(zc);
    if (std::abs(v.d2) * r > 1e-6 * (1.0 + std::abs(v.d))) {
      const double base = -0.5 * std::arg(v.d2);
      const double half = kPi / 8.0;
      std::vector<Direction> out;
      for (int k = 0; k < 4; ++k) {
        double a = base + k * kPi / 2.0 - half, b = base + k * kPi / 2.0 + half;
        double ga = g(a);
        const double gb = g(b);
        if ((ga > 0) == (gb > 0)) return scan(zc, r, theta0, g);
        out.push_back(bisect(a, b, ga, g, zc, r));
      }
      return out;
    }
    return scan(zc, r, theta0, g);
  }

  template <class G>
  Direction bisect(double a, double b, double ga, const G& g, cd zc, double r) const {
    for (int it = 0; it < 14; ++it) {
      const double m = 0.5 * (a + b);
      const double gm = g(m);
      if ((gm > 0) == (ga > 0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    const double t = 0.5 * (a + b);
    const double re = delta(zc + r * std::exp(I * t)).real();
    return {t, std::abs(re) <= 1.0 + 1e-8};
  }

  template <class G>
  std::vector<Direction> scan(cd zc, double r, double theta0, const G& g) const {
    const int K = opt_.circle_samples;
    std::vector<double> th(K + 1), val(K + 1);
    for (int k = 0; k <= K; ++k) {
      th[k] = theta0 + (k + 0.5) * 2.0 * kPi / K;
      val[k] = k < K ? g(th[k]) : val[0];
    }
    std::vector<Direction> out;
    for (int k = 0; k < K; ++k)
      if ((val[k] > 0) != (val[k + 1] > 0)) out.push_back(bisect(th[k], th[k + 1], val[k], g, zc, r));
    return out;
  }

  // Predictor-corrector step. Returns the corrected point and the number of corrector iterations.
  bool correct(cd zp, cd& zout, DVal& vout, int& iters) const {
    DVal v = at(zp);
    if (v.d1 == 0.0) return false;
    const cd t = std::conj(v.d1) / std::abs(v.d1);
    const cd n = I * t;
    cd z = zp;
    for (iters = 0; iters <= 8; ++iters) {
      if (std::abs(v.d.imag()) <= opt_.trace_tol) {
        zout = z;
        vout = v;
        return true;
      }
      const double s = (v.d1 * n).imag();
      if (s == 0.0 || !std::isfinite(s)) return false;
      z -= (v.d.imag() / s) * n;
      v = at(z);
    }
    return false;
  }

  static cd orient(cd d1, cd T) {
    cd t = std::conj(d1) / std::abs(d1);
    if ((t * std::conj(T)).real() < 0.0) t = -t;
    return t;
  }

  // Follows Gamma from z0 along the unit direction T0 until an edge, the region
  // boundary or the vertex budget. Interior saddles are crossed straight through;
  // the other band directions leaving them are queued in `spawns`.
  Branch trace(cd z0, cd T0, bool from_critical, std::vector<Spawn>& spawns) const {
    Branch br;
    DVal v = at(z0);
    br.pts.push_back(z0);
    br.w.push_back(v.d.real());
    cd z = z0, T = T0;
    double h = base_step(z0);
    bool skip_critical = from_critical;
    if (from_critical) h = 0.5 * base_step(z0);
    const bool off_real_start = !on_real(z0) || from_critical;
    int guard = 0;
    while (true) {
      if (static_cast<int>(br.pts.size()) >= opt_.max_vertices || ++guard > 20 * opt_.max_vertices) {
        br.end = {z, EndKind::Truncated};
        return br;
      }
      const double hmin = 1e-10 * (1.0 + std::abs(z));
      // A critical point just ahead is crossed explicitly.
      if (!skip_critical && v.d2 != 0.0) {
        const cd dc = -v.d1 / v.d2;
        if (std::abs(dc) < h && (dc * std::conj(T)).real() > 0.0) {
          if (auto zc = critical_point(z, 2.0 * h)) {
            const cd dzc = delta(*zc);
            if (std::abs(dzc.imag()) <= 1e-7 && std::abs(dzc.real()) <= 1.0 + 1e-7 && std::abs(*zc - z) > 0.0) {
              const cd Tin = (z - *zc) / std::abs(z - *zc);
              if (!cross(br, *zc, dzc, Tin, std::min(h, base_step(*zc)), spawns, T)) return br;
              z = *zc;
              v = at(z);
              h = 0.5 * std::min(h, base_step(z));
              skip_critical = true;
              continue;
            }
          }
        }
      }
      cd zn;
      DVal vn;
      int iters = 0;
      const bool ok = correct(z + h * T, zn, vn, iters);
      bool accept = ok && iters <= 3 && vn.d1 != 0.0;
      if (accept) {
        const cd Tn = orient(vn.d1, T);
        if ((Tn * std::conj(T)).real() < std::cos(kPi / 6.0)) accept = false;
        if (std::abs(vn.d.real() - v.d.real()) > 0.2 && std::abs(vn.d.real()) <= 1.0) accept = false;
        // An off-real branch meets R only through a critical point.
        if (off_real_start && !on_real(z) && (zn.imag() == 0.0 || (zn.imag() > 0) != (z.imag() > 0)))
          accept = false;
      }
      if (!accept) {
        h *= 0.5;
        if (h < hmin) {
          br.end = {z, EndKind::Truncated};
          return br;
        }
        continue;
      }
      if (!region_.contains(zn)) {
        br.end = {z, EndKind::Boundary};
        return br;
      }
      const double wn = vn.d.real();
      if (std::abs(wn) > 1.0 + 1e-9) {
        const double s = wn > 0 ? 1.0 : -1.0;
        const double w0 = v.d.real();
        const cd zi = z + (zn - z) * ((s - w0) / (wn - w0));
        const double span = std::abs(zn - z);
        auto ze = edge_point(zi, s, 2.0 * span);
        if (ze) {
          const DVal ve = at(*ze);
          const bool dbl = ve.d2 != 0.0 && std::abs(ve.d1 / ve.d2) <= 0.1 * span;
          if (!dbl) {
            br.pts.push_back(*ze);
            br.w.push_back(s);
            br.end = {*ze, s > 0 ? EndKind::Periodic : EndKind::Antiperiodic};
            return br;
          }
          // Closed gap: a double point of Delta = +-1; the band continues through it.
          auto zc = critical_point(*ze, span);
          if (zc) {
            const cd dzc = delta(*zc);
            const cd Tin = std::abs(z - *zc) > 0 ? (z - *zc) / std::abs(z - *zc) : -T;
            if (!cross(br, *zc, dzc, Tin, std::min(span, base_step(*zc)), spawns, T)) return br;
            z = *zc;
            v = at(z);
            h = 0.5 * std::min(span, base_step(z));
            skip_critical = true;
            continue;
          }
        }
        h *= 0.5;
        if (h < hmin) {
          br.end = {z, EndKind::Truncated};
          return br;
        }
        continue;
      }
      br.pts.push_back(zn);
      br.w.push_back(wn);
      if (br.pts.size() > 8 && std::abs(zn - z0) < 0.5 * h) {
        std::ostringstream os;
        os << "Gamma branch from " << z0 << " closed on itself";
        throw ClosedCurveDetected(os.str());
      }
      T = orient(vn.d1, T);
      z = zn;
      v = vn;
      skip_critical = false;
      if (iters <= 1) h = std::min(1.5 * h, 4.0 * base_step(z));
    }
  }

  // Records the critical point zc on the branch and picks the straight-through
  // direction. Returns false when no band direction continues the branch.
  bool cross(Branch& br, cd zc, cd dzc, cd Tin, double r, std::vector<Spawn>& spawns, cd& Tout) const {
    br.pts.push_back(zc);
    br.w.push_back(dzc.real());
    const double th_in = std::arg(Tin);
    const auto dirs = directions(zc, r, th_in);
    int in_idx = -1, out_idx = -1;
    double best_in = 1e9, best_out = 1e9;
    for (int k = 0; k < static_cast<int>(dirs.size()); ++k) {
      const double din = angle_diff(dirs[k].theta, th_in);
      if (din < best_in) {
        best_in = din;
        in_idx = k;
      }
    }
    for (int k = 0; k < static_cast<int>(dirs.size()); ++k) {
      if (k == in_idx || !dirs[k].band) continue;
      const double dout = angle_diff(dirs[k].theta, th_in + kPi);
      if (dout < best_out) {
        best_out = dout;
        out_idx = k;
      }
    }
    const bool real_pt = on_real(zc);
    for (int k = 0; k < static_cast<int>(dirs.size()); ++k) {
      if (k == in_idx || k == out_idx || !dirs[k].band) continue;
      if (real_pt && std::abs(std::sin(dirs[k].theta)) < 0.2) continue;  // the real axis itself
      spawns.push_back({zc, dirs[k].theta});
    }
    const bool interior = std::abs(dzc.real()) < 1.0 - 1e-8;
    if (out_idx < 0) {
      br.end = {zc, dzc.real() > 0 ? EndKind::Periodic : EndKind::Antiperiodic};
      return false;
    }
    if (real_pt) {
      br.crossing = zc.real();
      br.crossing_interior = interior;
      br.crossing_angle = angle_to_real_deg(dirs[out_idx].theta);
    } else if (interior && dirs.size() > 2) {
      br.saddles.push_back(zc);
    }
    Tout = std::exp(I * dirs[out_idx].theta);
    return true;
  }

  // Real critical points of Delta in [a, b]; Delta' is real on R.
  std::vector<double> real_critical_points(double a, double b) const {
    const double dx = std::min(kPi * eps_ / (8.0 * L_), (b - a) / 16.0);
    const int n = static_cast<int>(std::ceil((b - a) / dx));
    auto f = [&](double x) { return run(cd(x, 0.0), Derivatives::First).delta_prime()->real(); };
    std::vector<double> xs(n + 1), fs(n + 1);
    for (int k = 0; k <= n; ++k) {
      xs[k] = a + (b - a) * k / n;
      fs[k] = f(xs[k]);
    }
    std::vector<double> out;
    for (int k = 0; k < n; ++k) {
      if (fs[k] == 0.0) {
        out.push_back(xs[k]);
        continue;
      }
      if ((fs[k] > 0) == (fs[k + 1] > 0) || fs[k + 1] == 0.0) continue;
      boost::uintmax_t iters = 100;
      const auto tol = [](double u, double v) { return std::abs(u - v) <= 1e-14 * (1.0 + std::abs(u)); };
      const auto r = boost::math::tools::toms748_solve(f, xs[k], xs[k + 1], fs[k], fs[k + 1], tol, iters);
      out.push_back(0.5 * (r.first + r.second));
    }
    return out;
  }

 private:
  MonodromyResult run(cd z, Derivatives d) const {
    MonodromyOptions mo;
    mo.tol = opt_.spectra.monodromy_tol;
    mo.integrator = opt_.spectra.integrator;
    mo.derivatives = d;
    return propagate_monodromy(p_, {z, eps_}, mo);
  }

  const PeriodicPotential& p_;
  double eps_, L_;
  Window region_;
  TraceOptions opt_;
};

Band join(const Branch& back, const Branch& fwd) {
  Band b;
  for (auto it = back.pts.rbegin(); it != back.pts.rend(); ++it) b.polyline.push_back(*it);
  for (auto it = back.w.rbegin(); it != back.w.rend(); ++it) b.re_delta.push_back(*it);
  b.polyline.insert(b.polyline.end(), fwd.pts.begin() + 1, fwd.pts.end());
  b.re_delta.insert(b.re_delta.end(), fwd.w.begin() + 1, fwd.w.end());
  b.first = back.end;
  b.last = fwd.end;
  for (const Branch* br : {&back, &fwd}) {
    b.saddles.insert(b.saddles.end(), br->saddles.begin(), br->saddles.end());
    if (br->crossing && !b.crosses_real_at) {
      b.crosses_real_at = br->crossing;
      b.crossing_interior = br->crossing_interior;
      b.crossing_angle_deg = br->crossing_angle;
    }
  }
  return b;
}

// z lies on the band between two vertices whose Re Delta bracket `w`.
bool on_band(const Band& b, cd z, double w) {
  for (std::size_t k = 0; k + 1 < b.polyline.size(); ++k) {
    const double lo = std::min(b.re_delta[k], b.re_delta[k + 1]), hi = std::max(b.re_delta[k], b.re_delta[k + 1]);
    if (w < lo - 1e-9 || w > hi + 1e-9) continue;
    const cd a = b.polyline[k], c = b.polyline[k + 1];
    if (std::abs(z - a) + std::abs(z - c) <= 1.5 * std::abs(c - a) + 1e-9 * (1.0 + std::abs(z))) return true;
  }
  return false;
}

bool has_vertex(const Band& b, cd z, double tol) {
  for (const cd v : b.polyline)
    if (std::abs(v - z) <= tol) return true;
  return false;
}

// A branch leaving z in direction theta is already part of b.
bool has_departure(const Band& b, cd z, double theta) {
  const double tol = 1e-9 * (1.0 + std::abs(z));
  for (std::size_t k = 0; k < b.polyline.size(); ++k) {
    if (std::abs(b.polyline[k] - z) > tol) continue;
    for (std::size_t j : {k - 1, k + 1}) {
      if (j >= b.polyline.size()) continue;
      const cd d = b.polyline[j] - z;
      if (std::abs(d) > 0 && angle_diff(std::arg(d), theta) < kPi / 9.0) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Band> trace_gamma_contours(const PeriodicPotential& p, double eps, const Window& region,
                                       const TraceOptions& opt) {
  if (!region.valid()) throw DomainError("trace_gamma_contours: empty region");
  Tracer tr(p, eps, region, opt);
  std::vector<Band> bands;
  const bool straddles = region.im_min < 0.0 && region.im_max > 0.0;
  if (straddles) {
    Band real;
    real.polyline = {cd(region.re_min, 0.0), cd(region.re_max, 0.0)};
    real.re_delta = {tr.delta(real.polyline[0]).real(), tr.delta(real.polyline[1]).real()};
    real.on_real_axis = true;
    real.first = {real.polyline[0], EndKind::Boundary};
    real.last = {real.polyline[1], EndKind::Boundary};
    bands.push_back(real);
  }
  std::vector<Spawn> spawns;
  std::size_t seeds = 0;

  if (straddles) {
    for (double xc : tr.real_critical_points(region.re_min, region.re_max)) {
      ++seeds;
      const cd zc(xc, 0.0);
      bool known = false;
      for (const auto& b : bands)
        if (!b.on_real_axis && b.crosses_real_at && std::abs(*b.crosses_real_at - zc) <= 1e-7 * (1.0 + std::abs(xc)))
          known = true;
      if (known) continue;
      const cd dz = tr.delta(zc);
      // Branches leaving a real gap point start outside the Lax set; any band they
      // reach carries a zero of Delta and is seeded from there.
      if (std::abs(dz.real()) > 1.0 + 1e-8) continue;
      const double r = 0.5 * tr.base_step(zc);
      std::vector<Direction> up, down;
      for (const auto& d : tr.directions(zc, r, 0.0)) {
        if (!d.band || std::abs(std::sin(d.theta)) < 0.2) continue;
        (std::sin(d.theta) > 0 ? up : down).push_back(d);
      }
      // Pair each upward direction with the most nearly opposite downward one.
      std::vector<bool> used(down.size(), false);
      for (const auto& u : up) {
        int best = -1;
        double bd = 1e9;
        for (std::size_t k = 0; k < down.size(); ++k) {
          const double d = angle_diff(down[k].theta, u.theta + kPi);
          if (!used[k] && d < bd) {
            bd = d;
            best = static_cast<int>(k);
          }
        }
        const Branch fwd = tr.trace(zc, std::exp(I * u.theta), true, spawns);
        Branch back;
        if (best >= 0) {
          used[best] = true;
          back = tr.trace(zc, std::exp(I * down[best].theta), true, spawns);
        } else {
          back.pts = {zc};
          back.w = {dz.real()};
          back.end = {zc, dz.real() > 0 ? EndKind::Periodic : EndKind::Antiperiodic};
        }
        Band b = join(back, fwd);
        b.crosses_real_at = zc;
        b.crossing_interior = std::abs(dz.real()) < 1.0 - 1e-8;
        b.crossing_angle_deg = angle_to_real_deg(u.theta);
        bands.push_back(std::move(b));
      }
      for (std::size_t k = 0; k < down.size(); ++k) {
        if (used[k]) continue;
        Branch back;
        back.pts = {zc};
        back.w = {dz.real()};
        back.end = {zc, dz.real() > 0 ? EndKind::Periodic : EndKind::Antiperiodic};
        Band b = join(back, tr.trace(zc, std::exp(I * down[k].theta), true, spawns));
        b.crosses_real_at = zc;
        b.crossing_interior = std::abs(dz.real()) < 1.0 - 1e-8;
        b.crossing_angle_deg = angle_to_real_deg(down[k].theta);
        bands.push_back(std::move(b));
      }
    }
  }

  // Every band carries a point with Delta = 0, away from closed-gap degeneracies.
  // Seeds only start the corrector, so they are located at a looser tolerance.
  std::vector<Root> zeros;
  SpectraOptions seed_opt = opt.spectra;
  seed_opt.monodromy_tol = std::max(seed_opt.monodromy_tol, 1e-8);
  seed_opt.roots.residual_tol = std::max(seed_opt.roots.residual_tol, 1e-6);
  seed_opt.roots.counting.method = CountingMethod::PhaseTracking;
  const AnalyticFunction f = floquet_function(p, eps, 0.0, seed_opt);
  const double strip = opt.seed_strip;
  if (region.im_max > strip) {
    const Window w{region.re_min, region.re_max, std::max(region.im_min, strip), region.im_max};
    const auto r = find_roots(f, w, seed_opt.roots);
    zeros.insert(zeros.end(), r.begin(), r.end());
  }
  if (region.im_min < -strip) {
    const Window w{region.re_min, region.re_max, region.im_min, std::min(region.im_max, -strip)};
    const auto r = find_roots(f, w, seed_opt.roots);
    zeros.insert(zeros.end(), r.begin(), r.end());
  }
  seeds += zeros.size();
  for (const Root& r0 : zeros) {
    bool known = false;
    for (const auto& b : bands)
      if (!b.on_real_axis && on_band(b, r0.z, 0.0)) known = true;
    if (known) continue;
    const DVal v = tr.at(r0.z);
    if (v.d1 == 0.0) continue;
    const cd t = std::conj(v.d1) / std::abs(v.d1);
    const Branch fwd = tr.trace(r0.z, t, false, spawns);
    const Branch back = tr.trace(r0.z, -t, false, spawns);
    bands.push_back(join(back, fwd));
  }

  // Other Gamma branches through interior saddles form their own bands.
  std::deque<Spawn> queue(spawns.begin(), spawns.end());
  spawns.clear();
  while (!queue.empty()) {
    const Spawn s = queue.front();
    queue.pop_front();
    bool known = false;
    for (const auto& b : bands)
      if (!b.on_real_axis && has_departure(b, s.z, s.theta)) known = true;
    if (known) continue;
    const Branch fwd = tr.trace(s.z, std::exp(I * s.theta), true, spawns);
    Branch back;
    back.pts = {s.z};
    back.w = {tr.delta(s.z).real()};
    back.end = fwd.end;
    // The opposite departure belongs to the same analytic curve.
    bool opposite_known = false;
    for (const auto& b : bands)
      if (!b.on_real_axis && has_departure(b, s.z, s.theta + kPi)) opposite_known = true;
    if (!opposite_known) back = tr.trace(s.z, std::exp(I * (s.theta + kPi)), true, spawns);
    Band b = join(back, fwd);
    if (opposite_known) b.first = {s.z, EndKind::Boundary};
    b.saddles.push_back(s.z);
    for (auto& other : bands)
      if (!other.on_real_axis && has_vertex(other, s.z, 1e-9 * (1.0 + std::abs(s.z)))) other.saddles.push_back(s.z);
    bands.push_back(std::move(b));
    queue.insert(queue.end(), spawns.begin(), spawns.end());
    spawns.clear();
  }

  if (seeds == 0) throw SeedExhausted("no real critical points or zeros of Delta in the region");

  // Deterministic order: real band first, then by the first vertex.
  std::stable_sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) {
    if (a.on_real_axis != b.on_real_axis) return a.on_real_axis;
    const cd za = a.polyline.front(), zb = b.polyline.front();
    if (za.real() != zb.real()) return za.real() < zb.real();
    return za.imag() < zb.imag();
  });
  for (auto& b : bands) {
    std::sort(b.saddles.begin(), b.saddles.end(),
              [](cd a, cd c) { return a.real() != c.real() ? a.real() < c.real() : a.imag() < c.imag(); });
    b.saddles.erase(std::unique(b.saddles.begin(), b.saddles.end(),
                                [](cd a, cd c) { return std::abs(a - c) <= 1e-9 * (1.0 + std::abs(a)); }),
                    b.saddles.end());
  }
  return bands;
}

BandClassification classify_bands(std::vector<Band>& bands, double eps, double L) {
  BandClassification c;
  const double lattice = kPi * eps / L;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    Band& b = bands[i];
    if (b.on_real_axis) continue;
    ++c.off_real_bands;
    bool shares = !b.saddles.empty();
    for (std::size_t j = 0; j < bands.size() && !shares; ++j) {
      if (j == i || bands[j].on_real_axis) continue;
      for (const cd s : bands[j].saddles)
        if (has_vertex(b, s, 1e-9 * (1.0 + std::abs(s)))) shares = true;
    }
    b.is_spine = b.crosses_real_at && b.crossing_interior && b.crossing_angle_deg >= 10.0 && !shares;
    if (b.is_spine) {
      ++c.spines;
      const double x = b.crosses_real_at->real();
      c.spine_crossings.push_back({*b.crosses_real_at, std::abs(x - lattice * std::round(x / lattice)),
                                   b.crossing_angle_deg});
    } else {
      ++c.non_spine_bands;
    }
  }
  c.finite_band_in_region = true;
  return c;
}

}  // namespace zs
