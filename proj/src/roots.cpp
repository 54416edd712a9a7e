#include "zs/roots.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "zs/errors.hpp"

namespace zs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bisection depth of the Gauss-Kronrod edge quadrature before it yields to phase tracking.
constexpr unsigned kQuadDepth = 4;

// Split fraction kept away from 1/2 so that split lines avoid symmetry axes.
constexpr double kSplit[] = {0.5 + 0.0618, 0.5 - 0.0931, 0.5 + 0.1447, 0.5 - 0.0213};

double cell_scale(const Window& w) {
  return std::max(w.width(), w.height());
}

// Boundary integral of f'/f. Quadrature uses adaptive Gauss-Kronrod. Phase
// tracking accepts a segment [a, b] when the arg increment is below the step
// and the first-order Taylor predictions of f(b)/f(a) from either end miss by
// less than half the distance from 0 to the chord of the image, so the image
// cannot wind around 0 unseen; otherwise the segment is bisected. Edge
// integrals are cached, so split lines shared by sibling cells cost nothing.
class BoundaryCounter {
 public:
  BoundaryCounter(const AnalyticFunction& f, const CountingOptions& opt) : f_(f), opt_(opt) {}

  // Integral of f'/f around w, divided by 2 pi i.
  cd winding(const Window& w) {
    const cd c0(w.re_min, w.im_min), c1(w.re_max, w.im_min), c2(w.re_max, w.im_max), c3(w.re_min, w.im_max);
    return (edge(c0, c1) + edge(c1, c2) + edge(c2, c3) + edge(c3, c0)) / cd(0.0, kTwoPi);
  }

 private:
  struct Sample {
    cd f;            // f / |f|
    double log_abs;  // log |f|, scale included
    cd g;            // f'/f
  };

  Sample sample(cd z) const {
    const FunctionValue v = f_(z, 1);
    const double a = std::abs(v.f);
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(std::abs(v.df))) {
      std::ostringstream os;
      os << "f vanishes or is not finite at " << z << " on a counting boundary";
      throw BoundaryTooClose(os.str());
    }
    return {v.f / a, std::log(a) + v.log_scale, v.df / v.f};
  }

  // Distance from 0 to the segment [1, u].
  static double chord_distance(cd u) {
    const cd d = u - 1.0;
    const double n2 = std::norm(d);
    if (n2 == 0.0) return 1.0;
    const double t = std::clamp(-d.real() / n2, 0.0, 1.0);
    return std::abs(1.0 + t * d);
  }

  bool resolved(const Sample& sa, const Sample& sb, cd h) const {
    const double lr = sb.log_abs - sa.log_abs;
    if (std::abs(lr) > 50.0) return false;
    const cd u = (sb.f / sa.f) * std::exp(lr);  // f(b) / f(a)
    if (std::abs(std::arg(u)) > opt_.phase_step) return false;
    const cd v = 1.0 / u;
    return std::abs(u - (1.0 + sa.g * h)) <= 0.5 * chord_distance(u) &&
           std::abs(v - (1.0 - sb.g * h)) <= 0.5 * chord_distance(v);
  }

  cd quadrature(cd a, cd b) {
    const cd d = b - a;
    auto g = [&](double t) -> cd {
      const FunctionValue v = f_(a + t * d, 1);
      const cd r = v.df / v.f * d;
      return std::isfinite(r.real()) && std::isfinite(r.imag()) ? r : cd(1e300, 0.0);
    };
    double err = 0.0, l1 = 0.0;
    const cd v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, kQuadDepth,
                                                                               opt_.quad_rel_tol, &err, &l1);
    if (err <= opt_.quad_rel_tol * l1) return v;
    // Near clustered zeros |f| can fall to the evaluation noise, where no depth
    // meets the tolerance; the phase count needs no smoothness of f'/f.
    return tracked(a, b);
  }

  cd tracked(cd a, cd b) {
    constexpr int kInitial = 8;
    cd total = 0.0;
    cd za = a;
    Sample sa = sample(a);
    for (int j = 1; j <= kInitial; ++j) {
      const cd zb = j == kInitial ? b : a + (b - a) * (static_cast<double>(j) / kInitial);
      const Sample sb = sample(zb);
      total += segment(za, sa, zb, sb, 0);
      za = zb;
      sa = sb;
    }
    return total;
  }

  cd edge(cd a, cd b) {
    const Key k{a.real(), a.imag(), b.real(), b.imag()};
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
    if (auto it = cache_.find(Key{b.real(), b.imag(), a.real(), a.imag()}); it != cache_.end()) return -it->second;
    const cd v = opt_.method == CountingMethod::Quadrature ? quadrature(a, b) : tracked(a, b);
    cache_.emplace(k, v);
    return v;
  }

  // log(f(b)/f(a)) on the continuous branch.
  cd segment(cd a, const Sample& sa, cd b, const Sample& sb, int depth) {
    if (resolved(sa, sb, b - a)) return {sb.log_abs - sa.log_abs, std::arg(sb.f / sa.f)};
    if (depth >= 48 || std::abs(b - a) <= 1e-13 * (1.0 + std::abs(a))) {
      std::ostringstream os;
      os << "phase of f unresolved between " << a << " and " << b << "; boundary too close to a zero";
      throw BoundaryTooClose(os.str());
    }
    const cd m = 0.5 * (a + b);
    const Sample sm = sample(m);
    return segment(a, sa, m, sm, depth + 1) + segment(m, sm, b, sb, depth + 1);
  }

  using Key = std::array<double, 4>;
  const AnalyticFunction& f_;
  CountingOptions opt_;
  std::map<Key, cd> cache_;
};

int checked_count(BoundaryCounter& bc, const Window& w, double* deviation) {
  if (!w.valid()) throw DomainError("winding_count: empty window");
  const cd total = bc.winding(w);
  const double wn = total.real();
  const double nearest = std::round(wn);
  const double dev = std::abs(wn - nearest) + std::abs(total.imag());
  if (deviation) *deviation = dev;
  if (!std::isfinite(wn) || dev > 0.2 || nearest < 0) {
    std::ostringstream os;
    os << "winding integral " << wn << " is not near a non-negative integer; boundary too close to a zero";
    throw BoundaryTooClose(os.str());
  }
  return static_cast<int>(nearest);
}

double unscaled_abs(const FunctionValue& v) { return std::abs(v.f) * std::exp(v.log_scale); }

struct Finder {
  const AnalyticFunction& f;
  const RootFinderOptions& opt;
  BoundaryCounter counter;
  std::vector<Root> roots;

  int count(const Window& w, double* deviation = nullptr) { return checked_count(counter, w, deviation); }

  // Newton iteration on the (m-1)-th derivative; m in {1, 2}.
  bool newton(cd& z, int m, const Window& cell) {
    const double span = cell_scale(cell);
    for (int it = 0; it < 60; ++it) {
      const FunctionValue v = f(z, m == 1 ? 1 : 2);
      const cd num = m == 1 ? v.f : v.df;
      const cd den = m == 1 ? v.df : v.d2f;
      if (den == 0.0 || !std::isfinite(std::abs(den))) return false;
      const cd step = num / den;
      z -= step;
      if (!cell.contains(z, 0.5 * span)) return false;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    return true;
  }

  // z <- z - n f / f', quadratically convergent to a zero of multiplicity n.
  bool newton_multiple(cd& z, int n, const Window& cell) {
    const double span = cell_scale(cell);
    for (int it = 0; it < 60; ++it) {
      const FunctionValue v = f(z, 1);
      if (v.f == 0.0) return true;
      if (v.df == 0.0 || !std::isfinite(std::abs(v.df))) return false;
      const cd step = double(n) * v.f / v.df;
      z -= step;
      if (!cell.contains(z, 0.5 * span)) return false;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    return true;
  }

  // A small box around z holds exactly n zeros. Several radii are tried because
  // near a high-order zero |f| can sink to the evaluation noise on the tightest box.
  bool certify_cluster(cd z, int n, double span) {
    for (double frac : {1e-3, 1e-2, 5e-2}) {
      const double rho = std::max(frac * span, 1e-9 * (1.0 + std::abs(z)));
      const Window box{z.real() - rho, z.real() + rho, z.imag() - rho * 1.0137, z.imag() + rho * 0.9871};
      try {
        if (count(box) == n) return true;
      } catch (const BoundaryTooClose&) {
      }
    }
    return false;
  }

  double residual(cd z) { return unscaled_abs(f(z, 1)); }

  bool accept(cd z, int m, const Window& cell) {
    if (!cell.contains(z, 1e-12 * (1.0 + std::abs(z)))) return false;
    const double r = residual(z);
    if (!(r <= opt.residual_tol)) return false;
    roots.push_back({z, m, r});
    return true;
  }

  void solve(const Window& w, int n, int depth) {
    if (n == 0) return;
    const cd center((w.re_min + w.re_max) / 2, (w.im_min + w.im_max) / 2);
    const double span = cell_scale(w);
    if (n == 1) {
      cd z = center;
      if (newton(z, 1, w) && accept(z, 1, w)) return;
    } else {
      // An n-fold zero: Newton on f' for n = 2, the multiplicity-corrected step otherwise.
      cd z = center;
      const bool ok = n == 2 ? newton(z, 2, w) : newton_multiple(z, n, w);
      if (ok && residual(z) <= opt.residual_tol && w.contains(z) && certify_cluster(z, n, span)) {
        roots.push_back({z, n, residual(z)});
        return;
      }
    }
    if (depth >= opt.max_depth || span <= opt.min_cell * (1.0 + std::abs(center))) {
      // Unresolvable cluster: report its Newton point with the cluster multiplicity.
      cd z = center;
      if (n >= 2) newton(z, 2, w);
      else newton(z, 1, w);
      roots.push_back({z, n, residual(z)});
      return;
    }
    for (double frac : kSplit) {
      const bool vertical = w.width() >= w.height();
      Window a = w, b = w;
      if (vertical) {
        const double x = w.re_min + frac * w.width();
        a.re_max = x;
        b.re_min = x;
      } else {
        const double y = w.im_min + frac * w.height();
        a.im_max = y;
        b.im_min = y;
      }
      int na, nb;
      try {
        na = count(a);
        nb = count(b);
      } catch (const BoundaryTooClose&) {
        continue;
      }
      if (na + nb != n) continue;
      solve(a, na, depth + 1);
      solve(b, nb, depth + 1);
      return;
    }
    std::ostringstream os;
    os << "subdivision stalled in window [" << w.re_min << ", " << w.re_max << "] x [" << w.im_min << ", "
       << w.im_max << "] holding " << n << " zeros";
    throw CountMismatch(os.str());
  }
};

}  // namespace

double Window::boundary_distance(cd z) const {
  return std::min({std::abs(z.real() - re_min), std::abs(z.real() - re_max), std::abs(z.imag() - im_min),
                   std::abs(z.imag() - im_max)});
}

int winding_count(const AnalyticFunction& f, const Window& w, const CountingOptions& opt, double* deviation) {
  BoundaryCounter bc(f, opt);
  return checked_count(bc, w, deviation);
}

std::vector<Root> find_roots(const AnalyticFunction& f, const Window& w, const RootFinderOptions& opt) {
  Finder fd{f, opt, BoundaryCounter(f, opt.counting), {}};
  Window win = w;
  int n;
  try {
    n = fd.count(win);
  } catch (const BoundaryTooClose&) {
    win = w.dilated(1e-4 * std::max(1.0, cell_scale(w)));
    n = fd.count(win);
  }
  fd.solve(win, n, 0);
  int found = 0;
  for (const auto& r : fd.roots) found += r.multiplicity;
  if (found != n) {
    std::ostringstream os;
    os << "found " << found << " zeros but the boundary count is " << n;
    throw CountMismatch(os.str());
  }
  sort_roots(fd.roots);
  return fd.roots;
}

void sort_roots(std::vector<Root>& roots) {
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
}

}  // namespace zs
