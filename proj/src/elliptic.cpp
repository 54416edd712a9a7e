#include "zs/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "zs/errors.hpp"

namespace zs {

double elliptic_K(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("elliptic_K: m must lie in [0,1)");
  double a = 1.0, b = std::sqrt(1.0 - m);
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

JacobiTriple jacobi_sncndn(double x, double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw DomainError("jacobi_dn: m must lie in [0,1]");
  if (m < 1e-300) return {std::sin(x), std::cos(x), 1.0};
  if (m == 1.0) {
    const double s = 1.0 / std::cosh(x);
    return {std::tanh(x), s, s};
  }
  // sn, cn have period 4K; reducing first keeps phi small.
  const double K4 = 4.0 * elliptic_K(m);
  x -= K4 * std::floor(x / K4);
  // Descending AGM; phi is recovered by the backward recurrence.
  constexpr int kMax = 32;
  std::array<double, kMax + 1> a{}, c{};
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (n < kMax && std::abs(c[n]) > 1e-16 * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * x, n);
  for (int k = n; k > 0; --k) phi = 0.5 * (phi + std::asin(c[k] * std::sin(phi) / a[k]));
  const double sn = std::sin(phi), cn = std::cos(phi);
  return {sn, cn, std::sqrt(1.0 - m * sn * sn)};
}

double jacobi_dn(double x, double m) { return jacobi_sncndn(x, m).dn; }

}  // namespace zs
