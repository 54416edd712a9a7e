#include "zs/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zs/errors.hpp"

namespace zs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cd I(0.0, 1.0);

// (1 - cos sqrt u)/u, entire in u.
cd one_minus_cos_over(cd u) {
  if (std::abs(u) < 1.0) {
    cd sum = 0.0, pw = 1.0;
    double f = 2.0;  // (2k)!
    for (int k = 1; k < 14; ++k) {
      sum += (k % 2 == 1 ? 1.0 : -1.0) * pw / f;
      pw *= u;
      f *= (2.0 * k + 1) * (2.0 * k + 2);
    }
    return sum;
  }
  return (1.0 - std::cos(std::sqrt(u))) / u;
}

// Signum removable singularity: 4-term series of (1 - cos sqrt u)/u.
cd one_minus_cos_over_4(cd u) { return 0.5 - u / 24.0 + u * u / 720.0 - u * u * u / 40320.0; }

}  // namespace

cd cos_sqrt(cd u) { return std::cos(std::sqrt(u)); }

cd sinc_sqrt(cd u) {
  if (std::abs(u) < 1.0) {
    cd sum = 0.0, pw = 1.0;
    double f = 1.0;  // (2k+1)!
    for (int k = 0; k < 14; ++k) {
      sum += pw / f;
      pw *= -u;
      f *= (2.0 * k + 2) * (2.0 * k + 3);
    }
    return sum;
  }
  const cd s = std::sqrt(u);
  return std::sin(s) / s;
}

cd constant_discriminant(double A, double L, double eps, cd z) {
  const cd xi = std::sqrt(A * A + z * z);
  return std::cos(xi * L / eps);
}

cd plane_wave_discriminant(double A, double V, double L, double eps, cd z) {
  const cd zeta = z + 0.5 * eps * V;
  const double r = L / eps;
  const cd u = r * r * (A * A + zeta * zeta);
  // sin(xi_o L/eps)/xi_o = (L/eps) sinc_sqrt(u), which is even in xi_o.
  return std::cos(0.5 * V * L) * cos_sqrt(u) + zeta * std::sin(0.5 * V * L) * r * sinc_sqrt(u);
}

cd signum_discriminant(double A, double L, double eps, cd z) {
  // (A^2 + z^2 cos(xi L/eps))/xi^2 = cos(xi L/eps) + A^2 (L/eps)^2 (1 - cos(xi L/eps))/u.
  const cd xi_sq = A * A + z * z;
  const double r = L / eps;
  const cd u = r * r * xi_sq;
  const cd g = std::abs(xi_sq) < 1e-6 ? one_minus_cos_over_4(u) : one_minus_cos_over(u);
  return cos_sqrt(u) + A * A * r * r * g;
}

cd constant_dirichlet_function(double A, double L, double eps, cd z, DirichletVariant v) {
  const double r = L / eps;
  const cd s = r * sinc_sqrt(r * r * (A * A + z * z));  // sin(xi L/eps)/xi
  return v == DirichletVariant::Sum ? (z - I * A) * s : -(z + I * A) * s;
}

std::vector<Root> constant_dirichlet(double A, double L, double eps, double R, DirichletVariant v) {
  if (!(R > 0.0)) throw DomainError("constant_dirichlet: window radius must be positive");
  std::vector<Root> out;
  const double step = kPi * eps / L;
  // Lattice mu^2 = (n pi eps/L)^2 - A^2 for n >= 1; n = 0 gives xi = 0 where
  // sin(xi L/eps)/xi = L/eps != 0, so only the linear factor can vanish there.
  const cd lin = v == DirichletVariant::Sum ? I * A : -I * A;
  if (std::abs(lin) <= R) out.push_back({lin, 1, 0.0});
  for (int n = 1;; ++n) {
    const double s = n * step;
    const double mu_sq = s * s - A * A;
    if (mu_sq > R * R) break;
    if (mu_sq == 0.0 || std::abs(mu_sq) < 1e-15 * (s * s)) {
      out.push_back({0.0, 2, 0.0});
      continue;
    }
    const cd mu = std::sqrt(cd(mu_sq, 0.0));
    for (cd m : {mu, -mu}) {
      if (std::abs(m) > R) continue;
      if (std::abs(m - lin) < 1e-14) {
        // Coincides with the linear factor's zero.
        for (auto& r : out)
          if (std::abs(r.z - lin) < 1e-14) ++r.multiplicity;
        continue;
      }
      out.push_back({m, 1, 0.0});
    }
  }
  for (auto& r : out) r.residual = std::abs(constant_dirichlet_function(A, L, eps, r.z, v));
  sort_roots(out);
  return out;
}

double LaxSetDescription::distance(cd z) const {
  double d = real_line ? std::abs(z.imag()) : std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : segments) {
    const cd ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0.0 ? std::real((z - a) * std::conj(ab)) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    d = std::min(d, std::abs(z - (a + t * ab)));
  }
  return d;
}

LaxSetDescription constant_lax_spectrum(double A, double, double) {
  LaxSetDescription s;
  if (A != 0.0) s.segments.push_back({cd(0.0, -std::abs(A)), cd(0.0, std::abs(A))});
  return s;
}

std::optional<LaxSetDescription> plane_wave_lax_spectrum(double A, double V, double eps, std::optional<double> L) {
  if (V == 0.0) return constant_lax_spectrum(A, L.value_or(1.0), eps);
  if (L && std::abs(*L - 2.0 * kPi / std::abs(V)) > 1e-12 * *L) return std::nullopt;
  LaxSetDescription s;
  const double re = -0.5 * eps * V;
  if (A != 0.0) s.segments.push_back({cd(re, -std::abs(A)), cd(re, std::abs(A))});
  return s;
}

HillReduction hill_reduction(const PeriodicPotential& p, double eps) {
  const double L = p.period();
  for (int k = 0; k < 1000; ++k) {
    const cd q = p.eval(L * (k + 0.5) / 1000.0, eps);
    if (std::abs(q.imag()) > 1e-14 * std::max(1.0, std::abs(q)))
      throw NotRealPotential("hill_reduction requires a real-valued potential");
  }
  HillReduction h;
  h.w_plus = [p, eps](double x) {
    const cd q = p.eval(x, eps);
    return -q * q - I * eps * p.eval_derivative(x, eps);
  };
  h.w_minus = [p, eps](double x) {
    const cd q = p.eval(x, eps);
    return -q * q + I * eps * p.eval_derivative(x, eps);
  };
  return h;
}

}  // namespace zs
