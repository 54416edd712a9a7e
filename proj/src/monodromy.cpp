#include "zs/monodromy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "zs/errors.hpp"

namespace zs {

namespace {

// DP45 controls local error only; over many oscillations the global error grows
// roughly linearly in the step count, so each step targets a tenth of tol.
constexpr double kDp45LocalFraction = 0.1;

// Propagation is templated on the real type so that long double can push the
// accumulated roundoff below double-precision oracles.
template <class T>
struct Kit {
  using C = std::complex<T>;
  using M2 = std::array<C, 4>;  // row-major 2x2
  // Phi, Phi_z, Phi_zz as consecutive 2x2 blocks.
  using State = std::array<C, 12>;

  static constexpr C I{T(0), T(1)};

  static M2 mul(const M2& a, const M2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
  }
  static M2 comm(const M2& a, const M2& b) {
    const M2 ab = mul(a, b), ba = mul(b, a);
    return {ab[0] - ba[0], ab[1] - ba[1], ab[2] - ba[2], ab[3] - ba[3]};
  }
  static M2 lin(T s, const M2& a, T t, const M2& b) {
    return {s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2], s * a[3] + t * b[3]};
  }
  static T max_abs(const M2& a) {
    return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2]), std::abs(a[3])});
  }

  // cos(sqrt u) - 1, S = sin(sqrt u)/sqrt u and the first two u-derivatives of S.
  struct ExpCoeffs {
    C Cm1, S, S1, S2;
  };

  static ExpCoeffs exp_coeffs(C u) {
    ExpCoeffs e{};
    if (std::abs(u) < T(4)) {
      C pw = T(1);          // (-u)^k
      T f2k = 1, f2k1 = 1;  // (2k)!, (2k+1)!
      for (int k = 0; k < 32; ++k) {
        if (k > 0) {
          f2k *= T(2 * k - 1) * T(2 * k);
          f2k1 *= T(2 * k) * T(2 * k + 1);
          e.Cm1 += pw / f2k;
        }
        e.S += pw / f2k1;
        pw *= -u;
      }
      C pk = T(1);  // (-1)^k u^(k-1)
      T f = 6;
      for (int k = 1; k < 32; ++k) {
        if (k > 1) f *= T(2 * k) * T(2 * k + 1);
        e.S1 -= T(k) * pk / f;
        pk *= -u;
      }
      pk = T(1);  // (-1)^k u^(k-2)
      f = 120;
      for (int k = 2; k < 32; ++k) {
        if (k > 2) f *= T(2 * k) * T(2 * k + 1);
        e.S2 += T(k * (k - 1)) * pk / f;
        pk *= -u;
      }
    } else {
      const C sq = std::sqrt(u);
      const C hs = std::sin(sq / T(2));
      e.Cm1 = T(-2) * hs * hs;
      e.S = std::sin(sq) / sq;
      e.S1 = (e.Cm1 + T(1) - e.S) / (T(2) * u);
      e.S2 = -e.S / (T(4) * u) - T(1.5) * e.S1 / u;
    }
    return e;
  }

  // exp(W) - I for traceless W (W^2 = -u I, u = det W) and the z-derivatives of exp(W).
  static void traceless_exp(const M2& W, const M2& Wz, const M2& Wzz, int nb, M2& Em1, M2& Ez, M2& Ezz) {
    // Symmetric bilinear form with pair(W, W) = det W.
    auto pair = [](const M2& a, const M2& b) {
      return (a[0] * b[3] + a[3] * b[0] - a[1] * b[2] - a[2] * b[1]) / T(2);
    };
    auto diag = [](int i, C v) { return (i == 0 || i == 3) ? v : C(0); };
    const C u = pair(W, W);
    const ExpCoeffs e = exp_coeffs(u);
    for (int i = 0; i < 4; ++i) Em1[i] = diag(i, e.Cm1) + e.S * W[i];
    if (nb < 2) return;
    const C uz = T(2) * pair(W, Wz);
    const C C1 = -e.S / T(2);
    for (int i = 0; i < 4; ++i) Ez[i] = diag(i, C1 * uz) + e.S1 * uz * W[i] + e.S * Wz[i];
    if (nb < 3) return;
    const C uzz = T(2) * pair(Wz, Wz) + T(2) * pair(W, Wzz);
    const C C2 = -e.S1 / T(2);
    for (int i = 0; i < 4; ++i)
      Ezz[i] = diag(i, C2 * uz * uz + C1 * uzz) + (e.S2 * uz * uz + e.S1 * uzz) * W[i] +
               T(2) * e.S1 * uz * Wz[i] + e.S * Wzz[i];
  }
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <class T>
struct Propagator {
  using K = Kit<T>;
  using C = typename K::C;
  using M2 = typename K::M2;
  using State = typename K::State;

  const PeriodicPotential& p;
  C z;
  T eps;
  T tol;
  int nb;
  double L;
  State y{};
  State comp{};  // Kahan compensation
  double log_scale = 0.0;

  C q_at(double x) const {
    const cd q = p.eval(x, static_cast<double>(eps));
    return C(q.real(), q.imag());
  }

  T block_max(const State& v, int b) const {
    T m = 0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(v[4 * b + i]));
    return m;
  }

  void renormalize() {
    T mx = 0;
    for (int b = 0; b < nb; ++b) mx = std::max(mx, block_max(y, b));
    if (mx > T(1e150)) {
      const T f = T(1) / mx;
      for (int i = 0; i < 4 * nb; ++i) {
        y[i] *= f;
        comp[i] *= f;
      }
      log_scale += static_cast<double>(std::log(mx));
    }
  }

  void kahan_add(int i, C delta) {
    const C yk = delta - comp[i];
    const C t = y[i] + yk;
    comp[i] = (t - y[i]) - yk;
    y[i] = t;
  }

  // y' = A y with A = (-i z sigma3 + Q)/eps, differentiated in z.
  template <int NB>
  void rhs(C q, const State& v, State& out) const {
    const C a = -K::I * z / eps, d = K::I * z / eps;
    const C b = q / eps, c = -std::conj(q) / eps;
    const C az0 = -K::I / eps, az1 = K::I / eps;
    for (int k = 0; k < NB; ++k) {
      const C* X = &v[4 * k];
      C* o = &out[4 * k];
      o[0] = a * X[0] + b * X[2];
      o[1] = a * X[1] + b * X[3];
      o[2] = c * X[0] + d * X[2];
      o[3] = c * X[1] + d * X[3];
      if (k >= 1) {
        // d/dz (A P) = A_z P + A P_z; the second derivative picks up A_z twice.
        const T coef = T(k);
        const C* P = &v[4 * (k - 1)];
        o[0] += coef * az0 * P[0];
        o[1] += coef * az0 * P[1];
        o[2] += coef * az1 * P[2];
        o[3] += coef * az1 * P[3];
      }
    }
  }

  [[noreturn]] void underflow(double x) const {
    std::ostringstream os;
    os << "adaptive step underflow at x=" << x << " for z=" << cd(double(z.real()), double(z.imag()));
    throw StepFailure(os.str(), x);
  }

  template <int NB>
  void integrate_dopri(double x0, double x1) {
    const double hmax = L / 16.0, hmin = 1e-12 * L;
    double h = std::min(L / 256.0, x1 - x0);
    double x = x0;
    double err_prev = 1e-4;
    std::array<State, 7> k;
    State tmp, ynew, incr;
    constexpr int n = 4 * NB;
    // Stage abscissae stay inside the jump-free interval.
    auto qx = [&](double xx) {
      xx = std::clamp(xx, x0, x1);
      if (xx == x1 && x1 != x0) xx = std::nextafter(x1, x0);
      return q_at(xx);
    };
    rhs<NB>(qx(x), y, k[0]);
    long guard = 0;
    while (x < x1) {
      if (++guard > 50'000'000) throw StepFailure("step budget exhausted", x);
      const bool last = x + h >= x1;
      // The step is the exact difference of representable abscissae, so the
      // step lengths telescope to the segment length without drift.
      const double xn = last ? x1 : x + h;
      h = xn - x;
      const T H = T(h);
      for (int i = 0; i < n; ++i) tmp[i] = y[i] + H * (T(a21) * k[0][i]);
      rhs<NB>(qx(x + c2 * h), tmp, k[1]);
      for (int i = 0; i < n; ++i) tmp[i] = y[i] + H * (T(a31) * k[0][i] + T(a32) * k[1][i]);
      rhs<NB>(qx(x + c3 * h), tmp, k[2]);
      for (int i = 0; i < n; ++i)
        tmp[i] = y[i] + H * (T(a41) * k[0][i] + T(a42) * k[1][i] + T(a43) * k[2][i]);
      rhs<NB>(qx(x + c4 * h), tmp, k[3]);
      for (int i = 0; i < n; ++i)
        tmp[i] = y[i] + H * (T(a51) * k[0][i] + T(a52) * k[1][i] + T(a53) * k[2][i] + T(a54) * k[3][i]);
      rhs<NB>(qx(x + c5 * h), tmp, k[4]);
      for (int i = 0; i < n; ++i)
        tmp[i] = y[i] + H * (T(a61) * k[0][i] + T(a62) * k[1][i] + T(a63) * k[2][i] + T(a64) * k[3][i] +
                             T(a65) * k[4][i]);
      rhs<NB>(qx(x + h), tmp, k[5]);
      for (int i = 0; i < n; ++i) {
        incr[i] = H * (T(b1) * k[0][i] + T(b3) * k[2][i] + T(b4) * k[3][i] + T(b5) * k[4][i] + T(b6) * k[5][i]);
        ynew[i] = y[i] + incr[i];
      }
      rhs<NB>(qx(x + h), ynew, k[6]);
      T errT = 0;
      for (int b = 0; b < NB; ++b) {
        const T sc = tol * T(kDp45LocalFraction) * std::max({T(1), block_max(y, b), block_max(ynew, b)});
        for (int i = 4 * b; i < 4 * b + 4; ++i) {
          const C e = H * (T(e1) * k[0][i] + T(e3) * k[2][i] + T(e4) * k[3][i] + T(e5) * k[4][i] +
                           T(e6) * k[5][i] + T(e7) * k[6][i]);
          errT = std::max(errT, std::abs(e) / sc);
        }
      }
      double err = static_cast<double>(errT);
      if (!std::isfinite(err)) err = 1e10;
      if (err <= 1.0) {
        for (int i = 0; i < n; ++i) kahan_add(i, incr[i]);
        x = xn;
        k[0] = k[6];
        // PI controller.
        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
        err_prev = std::max(err, 1e-4);
        h = std::min(hmax, h * std::clamp(fac, 0.2, 5.0));
        const double before = log_scale;
        renormalize();
        if (log_scale != before) rhs<NB>(qx(x), y, k[0]);
      } else {
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        if (h < hmin) underflow(x);
      }
    }
  }

  // Sixth-order Magnus on three Gauss nodes; the fourth-order truncation of the
  // same expansion supplies the local error estimate.
  void integrate_magnus(double x0, double x1) {
    const double hmax = L / 16.0, hmin = 1e-12 * L;
    const double s15 = std::sqrt(15.0);
    const double nodes[3] = {0.5 - s15 / 10.0, 0.5, 0.5 + s15 / 10.0};
    const T rt15 = std::sqrt(T(15));
    const M2 Az{-K::I / eps, C(0), C(0), K::I / eps};
    double h = std::min(L / 256.0, x1 - x0);
    double x = x0;
    long guard = 0;
    while (x < x1) {
      if (++guard > 50'000'000) throw StepFailure("step budget exhausted", x);
      const bool last = x + h >= x1;
      // The step is the exact difference of representable abscissae, so the
      // step lengths telescope to the segment length without drift.
      const double xn = last ? x1 : x + h;
      h = xn - x;
      const T H = T(h);
      M2 A[3];
      for (int k = 0; k < 3; ++k) {
        const C q = q_at(x + nodes[k] * h);
        A[k] = {-K::I * z / eps, q / eps, -std::conj(q) / eps, K::I * z / eps};
      }
      const M2 a1 = K::lin(H, A[1], T(0), A[1]);
      const M2 a2 = K::lin(rt15 * H / T(3), A[2], -rt15 * H / T(3), A[0]);
      const M2 a3 = K::lin(T(10) * H / T(3), K::lin(T(1), A[2], T(1), A[0]), T(-20) * H / T(3), A[1]);
      const M2 c1 = K::comm(a1, a2);
      const M2 c2 = K::lin(T(-1) / T(60), K::comm(a1, K::lin(T(2), a3, T(1), c1)), T(0), c1);
      const M2 X = K::lin(T(1), K::lin(T(-20), a1, T(-1), a3), T(1), c1);
      const M2 Y = K::lin(T(1), a2, T(1), c2);
      const M2 XY = K::comm(X, Y);
      const M2 omega = K::lin(T(1), K::lin(T(1), a1, T(1) / T(12), a3), T(1) / T(240), XY);
      const double err = static_cast<double>(K::max_abs(K::lin(T(1) / T(240), XY, T(1) / T(12), c1)) / tol);
      if (!(err <= 1.0)) {
        h *= std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
        if (h < hmin) underflow(x);
        continue;
      }
      M2 oz{}, ozz{};
      if (nb >= 2) {
        // Only a1 depends on z, linearly.
        const M2 da1 = K::lin(H, Az, T(0), Az);
        const M2 dc1 = K::comm(da1, a2);
        const M2 dc2 =
            K::lin(T(-1) / T(60), K::comm(da1, K::lin(T(2), a3, T(1), c1)), T(-1) / T(60), K::comm(a1, dc1));
        const M2 dX = K::lin(T(-20), da1, T(1), dc1);
        oz = K::lin(T(1), da1, T(1) / T(240), K::lin(T(1), K::comm(dX, Y), T(1), K::comm(X, dc2)));
        if (nb >= 3) {
          const M2 d2c2 = K::lin(T(-1) / T(30), K::comm(da1, dc1), T(0), dc1);
          ozz = K::lin(T(2) / T(240), K::comm(dX, dc2), T(1) / T(240), K::comm(X, d2c2));
        }
      }
      M2 Em1, Ez, Ezz;
      K::traceless_exp(omega, oz, ozz, nb, Em1, Ez, Ezz);
      apply(Em1, Ez, Ezz);
      x = xn;
      h = std::min(hmax, h * std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0));
    }
  }

  // Exact exp(h A) for constant q, split so that |Im sqrt(u)| stays moderate.
  void exact_segment(double h, cd qd) {
    const C q(qd.real(), qd.imag());
    const C xi = std::sqrt(z * z + std::norm(q));
    const double growth = static_cast<double>(std::abs((T(h) / eps) * xi.imag()));
    const int pieces = std::max(1, static_cast<int>(std::ceil(growth / 300.0)));
    for (int s = 0; s < pieces; ++s) {
      const T r = T(h / pieces) / eps;
      const M2 W{-K::I * r * z, r * q, -r * std::conj(q), K::I * r * z};
      const M2 Wz{-K::I * r, C(0), C(0), K::I * r};
      const M2 Wzz{};
      M2 Em1, Ez, Ezz;
      K::traceless_exp(W, Wz, Wzz, nb, Em1, Ez, Ezz);
      apply(Em1, Ez, Ezz);
    }
  }

  // y <- exp(W) y with the product rule on the derivative blocks. Em1 = exp(W) - I,
  // so every block receives an increment that is added with compensation.
  void apply(const M2& Em1, const M2& Ez, const M2& Ezz) {
    auto acc = [](const M2& A, const C* X, C* out) {
      out[0] += A[0] * X[0] + A[1] * X[2];
      out[1] += A[0] * X[1] + A[1] * X[3];
      out[2] += A[2] * X[0] + A[3] * X[2];
      out[3] += A[2] * X[1] + A[3] * X[3];
    };
    State inc{};
    acc(Em1, &y[0], &inc[0]);
    if (nb >= 2) {
      acc(Ez, &y[0], &inc[4]);
      acc(Em1, &y[4], &inc[4]);
    }
    if (nb >= 3) {
      acc(Ezz, &y[0], &inc[8]);
      acc(K::lin(T(2), Ez, T(0), Ez), &y[4], &inc[8]);
      acc(Em1, &y[8], &inc[8]);
    }
    for (int i = 0; i < 4 * nb; ++i) kahan_add(i, inc[i]);
    renormalize();
  }

  void run(Integrator integrator) {
    y.fill(C(0));
    comp.fill(C(0));
    y[0] = T(1);
    y[3] = T(1);
    const auto& segs = p.segments();
    if (!segs.empty()) {
      for (const auto& s : segs) exact_segment(s.x1 - s.x0, s.q);
      return;
    }
    std::vector<double> cuts{0.0};
    for (double d : p.discontinuities())
      if (d > 0.0) cuts.push_back(d);
    cuts.push_back(L);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (integrator == Integrator::Magnus6) {
        integrate_magnus(cuts[i], cuts[i + 1]);
        continue;
      }
      switch (nb) {
        case 1: integrate_dopri<1>(cuts[i], cuts[i + 1]); break;
        case 2: integrate_dopri<2>(cuts[i], cuts[i + 1]); break;
        default: integrate_dopri<3>(cuts[i], cuts[i + 1]); break;
      }
    }
  }

  cd out(int i) const { return cd(static_cast<double>(y[i].real()), static_cast<double>(y[i].imag())); }
};

constexpr double kExtendedTolFactor = 1e-2;

int block_count(Derivatives d) { return d == Derivatives::None ? 1 : d == Derivatives::First ? 2 : 3; }

template <class T>
MonodromyResult run_propagator(const PeriodicPotential& p, const SpectralPoint& pt, const MonodromyOptions& opt) {
  using C = std::complex<T>;
  // The wider mantissa leaves room to run the step controller below the requested tolerance.
  const T step_tol = T(opt.tol) * (sizeof(T) > sizeof(double) ? T(kExtendedTolFactor) : T(1));
  Propagator<T> pr{p, C(T(pt.z.real()), T(pt.z.imag())), T(pt.eps), step_tol, block_count(opt.derivatives),
                   p.period()};
  pr.run(opt.integrator);
  MonodromyResult r;
  r.log_scale = pr.log_scale;
  r.m << pr.out(0), pr.out(1), pr.out(2), pr.out(3);
  if (pr.nb >= 2) r.dm = (Mat2() << pr.out(4), pr.out(5), pr.out(6), pr.out(7)).finished();
  if (pr.nb >= 3) r.d2m = (Mat2() << pr.out(8), pr.out(9), pr.out(10), pr.out(11)).finished();
  // det M = 1 becomes det m = exp(-2 log_scale) in the scaled representation.
  const C det = pr.y[0] * pr.y[3] - pr.y[1] * pr.y[2];
  const T target = std::exp(T(-2) * T(r.log_scale));
  const T mx = std::max({std::abs(pr.y[0]), std::abs(pr.y[1]), std::abs(pr.y[2]), std::abs(pr.y[3])});
  r.det_defect = static_cast<double>(std::abs(det - target) / std::max(target, mx * mx));
  return r;
}

}  // namespace

std::optional<cd> MonodromyResult::delta_prime() const {
  if (!dm) return std::nullopt;
  return scaled(0.5 * ((*dm)(0, 0) + (*dm)(1, 1)));
}

std::optional<cd> MonodromyResult::delta_second() const {
  if (!d2m) return std::nullopt;
  return scaled(0.5 * ((*d2m)(0, 0) + (*d2m)(1, 1)));
}

MonodromyResult propagate_monodromy(const PeriodicPotential& p, const SpectralPoint& pt, const MonodromyOptions& opt) {
  if (!(opt.tol >= 1e-13)) throw DomainError("propagate_monodromy: tol must be >= 1e-13");
  if (!(pt.eps > 0.0 && pt.eps <= 1.0)) throw DomainError("propagate_monodromy: eps must lie in (0, 1]");
  if (!std::isfinite(pt.z.real()) || !std::isfinite(pt.z.imag()))
    throw DomainError("propagate_monodromy: z must be finite");
  MonodromyResult r =
      opt.extended_precision ? run_propagator<long double>(p, pt, opt) : run_propagator<double>(p, pt, opt);
  if (!(r.det_defect <= opt.det_tol)) {
    std::ostringstream os;
    os << "det M defect " << r.det_defect << " exceeds " << opt.det_tol << " at z=" << pt.z << ", eps=" << pt.eps;
    throw ToleranceNotMet(os.str());
  }
  return r;
}

cd discriminant(const PeriodicPotential& p, const SpectralPoint& pt, double tol) {
  return propagate_monodromy(p, pt, {tol, Derivatives::None}).delta();
}

cd discriminant_derivative(const PeriodicPotential& p, const SpectralPoint& pt, double tol) {
  return *propagate_monodromy(p, pt, {tol, Derivatives::First}).delta_prime();
}

double SymmetryReport::worst() const {
  double w = std::max(schwarz, det_defect);
  for (const auto& o : {real, reflection, pt})
    if (o) w = std::max(w, *o);
  return w;
}

SymmetryReport check_symmetries(const PeriodicPotential& p, const SpectralPoint& pt, double tol) {
  MonodromyOptions opt;
  opt.tol = tol;
  return check_symmetries(p, pt, opt);
}

SymmetryReport check_symmetries(const PeriodicPotential& p, const SpectralPoint& pt, const MonodromyOptions& base) {
  const cd I(0.0, 1.0);
  const Mat2 s1 = (Mat2() << 0, 1, 1, 0).finished();
  const Mat2 s2 = (Mat2() << 0, -I, I, 0).finished();
  const Mat2 s3 = (Mat2() << 1, 0, 0, -1).finished();
  MonodromyOptions opt = base;
  opt.derivatives = Derivatives::None;
  auto full = [&](cd z) {
    const auto r = propagate_monodromy(p, {z, pt.eps}, opt);
    return Mat2(r.m * std::exp(r.log_scale));
  };
  const cd z = pt.z;
  const auto r0 = propagate_monodromy(p, {z, pt.eps}, opt);
  const Mat2 M = r0.m * std::exp(r0.log_scale);
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  auto defect = [&](const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff() / scale; };
  // det M = 1 (audited by det_defect), so the inverse is the adjugate; forming
  // the determinant would cancel terms of size |M|^2.
  auto inv = [](const Mat2& a) { return (Mat2() << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0)).finished(); };

  SymmetryReport rep;
  rep.det_defect = r0.det_defect;
  const Mat2 Mbar = full(std::conj(z));
  rep.schwarz = defect(Mbar.conjugate(), s2 * M * s2);
  const auto& sym = p.symmetry();
  if (sym.real || sym.reflection_theta) {
    const Mat2 Mref = full(-std::conj(z));
    if (sym.real) rep.real = defect(Mref.conjugate(), M);
    if (sym.reflection_theta) {
      const double th = *sym.reflection_theta;
      const Mat2 S = std::cos(th) * s1 + std::sin(th) * s2;
      rep.reflection = defect(inv(Mref).conjugate(), S * M * S);
    }
  }
  if (sym.pt) rep.pt = defect(inv(Mbar).conjugate(), s3 * M * s3);
  return rep;
}

}  // namespace zs
