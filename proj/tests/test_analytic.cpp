#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zs/analytic.hpp"
#include "zs/elliptic.hpp"
#include "zs/monodromy.hpp"

using namespace zs;
using std::numbers::pi;

namespace {

const cd I(0, 1);

bool has_root(const std::vector<Root>& roots, cd z, int mult = 1, double tol = 1e-10) {
  for (const auto& r : roots)
    if (std::abs(r.z - z) <= tol) return r.multiplicity == mult;
  return false;
}

double max_oracle_error(const PeriodicPotential& p, const std::function<cd(cd)>& oracle, double im_half) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> re(-3, 3), im(-im_half, im_half);
  MonodromyOptions o;
  o.tol = 1e-12;
  o.integrator = Integrator::Magnus6;
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const cd z(re(rng), im(rng));
    worst = std::max(worst, std::abs(propagate_monodromy(p, {z, 1.0}, o).delta() - oracle(z)));
  }
  return worst;
}

}  // namespace

TEST_CASE("entire square-root helpers are branch independent") {
  for (cd xi : {cd(0.3, 0.2), cd(-2, 1), cd(5, -0.5), cd(1e-4, 1e-4), cd(2e-9, -1e-9)}) {
    const cd u = xi * xi;
    CHECK(std::abs(cos_sqrt(u) - std::cos(xi)) <= 1e-14 * std::max(1.0, std::abs(std::cos(xi))));
    CHECK(std::abs(cos_sqrt(u) - std::cos(-xi)) <= 1e-14 * std::max(1.0, std::abs(std::cos(xi))));
    CHECK(std::abs(sinc_sqrt(u) - std::sin(xi) / xi) <= 1e-14 * std::max(1.0, std::abs(std::sin(xi) / xi)));
  }
  // Series region: compare with extended-precision direct evaluation.
  for (cd u : {cd(3e-7, 1e-7), cd(-5e-7, 0), cd(0, 9e-7)}) {
    const std::complex<long double> x = std::sqrt(std::complex<long double>(u.real(), u.imag()));
    const auto ref = std::sin(x) / x;
    CHECK(std::abs(sinc_sqrt(u) - cd(double(ref.real()), double(ref.imag()))) <= 1e-15);
  }
  CHECK(sinc_sqrt(0) == cd(1, 0));
}

TEST_CASE("constant discriminant") {
  CHECK(std::abs(constant_discriminant(1, 2 * pi, 1, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(constant_discriminant(1, 2 * pi, 1, I) - 1.0) <= 1e-15);
  for (cd z : {cd(0.4, 0.1), cd(-2, 1.5)})
    CHECK(std::abs(constant_discriminant(0, 2.0, 0.5, z) - std::cos(z * 4.0)) <= 1e-12 * std::abs(std::cos(z * 4.0)));
  // Near the branch point xi = 0.
  const cd z = I * (1 + 1e-9);
  CHECK(std::abs(constant_discriminant(1, 2 * pi, 1, z) - std::cos(std::sqrt(z * z + 1.0) * (2 * pi))) <= 1e-12);
}

TEST_CASE("constant Lax set") {
  const auto s = constant_lax_spectrum(1, 2 * pi, 1);
  CHECK(s.real_line);
  CHECK(s.contains(0.5 * I));
  CHECK(s.contains(3.0));
  CHECK_FALSE(s.contains(1.5 * I));
  CHECK(s.distance(1.5 * I) == doctest::Approx(0.5));
  CHECK(s.distance(cd(0.2, 0.3)) == doctest::Approx(0.2));
  CHECK(constant_lax_spectrum(0, 2, 1).segments.empty());
}

TEST_CASE("constant Dirichlet eigenvalues") {
  const auto sum = constant_dirichlet(1, pi, 1, 2);
  CHECK(has_root(sum, I));
  CHECK(has_root(sum, 0, 2));
  CHECK(has_root(sum, std::sqrt(3.0)));
  CHECK(has_root(sum, -std::sqrt(3.0)));
  CHECK(sum.size() == 4);
  const auto diff = constant_dirichlet(1, pi, 1, 2, DirichletVariant::Difference);
  CHECK(has_root(diff, -I));
  CHECK(has_root(diff, 0, 2));

  const auto lattice = constant_dirichlet(0, pi, 1, 3.5);
  CHECK(lattice.size() == 7);
  for (int n = -3; n <= 3; ++n) CHECK(has_root(lattice, double(n)));
  CHECK(has_root(constant_dirichlet(1, 2 * pi, 1, 0.5), 0, 2));

  // Each root is a zero of the Dirichlet function itself.
  for (double L : {pi, 2.0, 5.0})
    for (const auto& r : constant_dirichlet(0.8, L, 0.7, 4))
      CHECK(std::abs(constant_dirichlet_function(0.8, L, 0.7, r.z, DirichletVariant::Sum)) <= 1e-10);
}

TEST_CASE("plane-wave discriminant") {
  CHECK(std::abs(plane_wave_discriminant(1, 1, 2 * pi, 1, -0.5) + 1.0) <= 1e-12);
  for (cd z : {cd(0.3, 0.7), cd(-1.1, -0.4), cd(2, 1.9)})
    CHECK(std::abs(plane_wave_discriminant(0.7, 0, 3.0, 0.6, z) - constant_discriminant(0.7, 3.0, 0.6, z)) <=
          1e-12 * std::max(1.0, std::abs(constant_discriminant(0.7, 3.0, 0.6, z))));
}

TEST_CASE("plane-wave Lax set") {
  const auto s = plane_wave_lax_spectrum(1, 1, 0.2);
  REQUIRE(s);
  REQUIRE(s->segments.size() == 1);
  CHECK(std::abs(s->segments[0].first - cd(-0.1, -1)) <= 1e-14);
  CHECK(std::abs(s->segments[0].second - cd(-0.1, 1)) <= 1e-14);
  const auto t = plane_wave_lax_spectrum(1, 1, 1e-6);
  REQUIRE(t);
  CHECK(std::abs(t->segments[0].first.real()) <= 1e-6);
  CHECK_FALSE(plane_wave_lax_spectrum(1, 1, 0.2, 3.0).has_value());
  const auto v0 = plane_wave_lax_spectrum(1, 0, 0.5, 2.0);
  REQUIRE(v0);
  CHECK(v0->contains(0.5 * I));
}

TEST_CASE("signum discriminant") {
  CHECK(std::abs(signum_discriminant(1, 2, 1, 0) - 1.0) <= 1e-15);
  for (cd z : {cd(0.4, 0.1), cd(-2, 1.5)})
    CHECK(std::abs(signum_discriminant(0, 2.0, 0.5, z) - std::cos(z * 4.0)) <= 1e-12 * std::abs(std::cos(z * 4.0)));
}

TEST_CASE("closed forms agree with the monodromy engine") {
  CHECK(max_oracle_error(PeriodicPotential::constant(1, 2 * pi),
                         [](cd z) { return constant_discriminant(1, 2 * pi, 1, z); }, 2) <= 1e-9);
  CHECK(max_oracle_error(PeriodicPotential::plane_wave(1, 1),
                         [](cd z) { return plane_wave_discriminant(1, 1, 2 * pi, 1, z); }, 2) <= 1e-9);
  CHECK(max_oracle_error(PeriodicPotential::signum(1, 2), [](cd z) { return signum_discriminant(1, 2, 1, z); },
                         2) <= 1e-9);
  CHECK(max_oracle_error(PeriodicPotential::signum(0.5, 2), [](cd z) { return signum_discriminant(0.5, 2, 1, z); },
                         1) <= 1e-9);
}

TEST_CASE("Hill reduction") {
  const auto c = hill_reduction(PeriodicPotential::constant(0.7, 2), 0.5);
  for (double x : {0.0, 0.3, 1.7}) {
    CHECK(std::abs(c.w_plus(x) + 0.49) <= 1e-14);
    CHECK(std::abs(c.w_minus(x) + 0.49) <= 1e-14);
  }
  const auto d = hill_reduction(PeriodicPotential::jacobi_dn(0.6), 0.3);
  CHECK(std::abs(d.w_plus(0) + 1.0) <= 1e-14);
  CHECK(std::abs(d.w_minus(0) + 1.0) <= 1e-14);
  // W = -q^2 -/+ i eps q'.
  const double x = 0.8, m = 0.6;
  const auto t = jacobi_sncndn(x, m);
  CHECK(std::abs(d.w_plus(x) - cd(-t.dn * t.dn, 0.3 * m * t.sn * t.cn)) <= 1e-12);
  CHECK(HillReduction::eigenvalue_map(0.5 * I) == cd(-0.25, 0));
}
