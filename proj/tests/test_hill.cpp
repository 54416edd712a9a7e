#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zs/analytic.hpp"
#include "zs/errors.hpp"
#include "zs/hill.hpp"
#include "zs/monodromy.hpp"
#include "zs/spectra.hpp"

using namespace zs;
using std::numbers::pi;

namespace {

HillConfig config(double eps, int N, std::vector<double> nu) {
  HillConfig c;
  c.eps = eps;
  c.n_modes = N;
  c.nu_grid = std::move(nu);
  return c;
}

double nearest(const std::vector<cd>& set, cd z) {
  double d = 1e300;
  for (cd w : set) d = std::min(d, std::abs(w - z));
  return d;
}

std::vector<cd> points(const SpectrumCloud& c) {
  std::vector<cd> out;
  for (const auto& p : c.points) out.push_back(p.z);
  return out;
}

std::vector<cd> within(const std::vector<cd>& v, double r) {
  std::vector<cd> out;
  for (cd z : v)
    if (std::abs(z) <= r) out.push_back(z);
  return out;
}

}  // namespace

TEST_CASE("zero potential matrix is diagonal") {
  auto c = config(1, 8, {0.0});
  const auto H = assemble_hill_matrix(PeriodicPotential::zero(2 * pi), 0.0, c);
  const int n = 17;
  for (int a = 0; a < n; ++a) {
    const double k = a - 8;
    CHECK(std::abs(H(a, a) + k) <= 1e-14);
    CHECK(std::abs(H(n + a, n + a) - k) <= 1e-14);
  }
  CHECK((H.topRightCorner(n, n).cwiseAbs().maxCoeff() <= 1e-15));
  CHECK((H.bottomLeftCorner(n, n).cwiseAbs().maxCoeff() <= 1e-15));

  auto ev = hill_eigenvalues(PeriodicPotential::zero(2 * pi), 0.3, c);
  for (int j = -8; j <= 8; ++j) {
    CHECK(nearest(ev, j + 0.3) <= 1e-12);
    CHECK(nearest(ev, -(j + 0.3)) <= 1e-12);
  }
}

TEST_CASE("plane wave couples a single Toeplitz diagonal") {
  auto c = config(1, 8, {0.0});
  const auto H = assemble_hill_matrix(PeriodicPotential::plane_wave(1, 1), 0.1, c);
  const int n = 17;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double up = std::abs(H(a, n + b)), lo = std::abs(H(n + a, b));
      CHECK(up == doctest::Approx(a - b == 1 ? 1.0 : 0.0));
      CHECK(lo == doctest::Approx(b - a == 1 ? 1.0 : 0.0));
    }
}

TEST_CASE("constant potential eigenvalues satisfy z^2 = k^2 - A^2") {
  auto c = config(1, 16, {0.0});
  const auto ev = hill_eigenvalues(PeriodicPotential::constant(1, 2 * pi), 0.0, c);
  for (int j = 0; j <= 5; ++j) {
    const cd z = std::sqrt(cd(j * j - 1.0, 0));
    CHECK(nearest(ev, z) <= 1e-10);
    CHECK(nearest(ev, -z) <= 1e-10);
    CHECK(std::abs(constant_discriminant(1, 2 * pi, 1, z) - 1.0) <= 1e-10);
  }
}

TEST_CASE("filtered cloud for the constant potential lies on R u i[-1, 1]") {
  const auto p = PeriodicPotential::constant(1, 2 * pi);
  auto c = default_hill_config(p, 1.0);
  c.n_modes = 64;
  const auto cloud = lax_spectrum_hill(p, c);
  const auto set = constant_lax_spectrum(1, 2 * pi, 1);
  REQUIRE(cloud.points.size() > 100);
  double worst = 0;
  bool on_segment = false;
  for (const auto& pt : cloud.points) {
    worst = std::max(worst, set.distance(pt.z));
    on_segment = on_segment || std::abs(pt.z.imag()) > 0.5;
    CHECK(pt.residual <= c.residual_tol);
    CHECK(pt.engine == Engine::Hill);
  }
  CHECK(worst <= 1e-6);
  CHECK(on_segment);
}

TEST_CASE("plane-wave cloud sits on Re z = -eps V / 2") {
  const auto p = PeriodicPotential::plane_wave(1, 1);
  const auto cloud = lax_spectrum_hill(p, default_hill_config(p, 0.2));
  int complex_points = 0;
  for (const auto& pt : cloud.points) {
    if (std::abs(pt.z.imag()) < 1e-6) continue;
    ++complex_points;
    CHECK(std::abs(pt.z.real() + 0.1) <= 1e-6);
    CHECK(std::abs(pt.z.imag()) <= 1 + 1e-6);
  }
  CHECK(complex_points > 10);
}

TEST_CASE("zero potential cloud is real") {
  const auto p = PeriodicPotential::zero(2.0);
  const auto cloud = lax_spectrum_hill(p, default_hill_config(p, 0.5, 16));
  REQUIRE(!cloud.points.empty());
  for (const auto& pt : cloud.points) CHECK(std::abs(pt.z.imag()) <= 1e-9);
}

TEST_CASE("retained points pass an independent monodromy check") {
  const auto p = PeriodicPotential::jacobi_dn(0.6);
  const auto cloud = lax_spectrum_hill(p, default_hill_config(p, 0.5, 4));
  REQUIRE(!cloud.points.empty());
  MonodromyOptions o;
  o.tol = 1e-12;
  o.integrator = Integrator::DormandPrince45;
  for (const auto& pt : cloud.points) {
    const cd d = propagate_monodromy(p, {pt.z, 0.5}, o).delta();
    CHECK(std::abs(d - std::cos(pt.nu * p.period())) <= 1e-6);
  }
}

TEST_CASE("truncation convergence") {
  const auto p = PeriodicPotential::constant(1, 2 * pi);
  const auto a = within(hill_eigenvalues(p, 0.17, config(1, 32, {0.17})), 3);
  const auto b = within(hill_eigenvalues(p, 0.17, config(1, 64, {0.17})), 3);
  REQUIRE(a.size() == b.size());
  for (cd z : a) CHECK(nearest(b, z) <= 1e-8);

  const auto e = PeriodicPotential::exp_sin_sq(1, pi);
  const auto c = within(hill_eigenvalues(e, 0.4, config(0.5, 32, {0.4})), 3);
  const auto d = within(hill_eigenvalues(e, 0.4, config(0.5, 64, {0.4})), 3);
  for (cd z : c)
    if (std::abs(z) < 2.9) CHECK(nearest(d, z) <= 1e-8);
}

TEST_CASE("nu-periodicity") {
  const auto p = PeriodicPotential::exp_sin_sq(1, pi);
  const double nu = 0.37, shift = 2 * pi / p.period();
  const auto a = within(hill_eigenvalues(p, nu, config(0.5, 48, {nu})), 3);
  const auto b = within(hill_eigenvalues(p, nu + shift, config(0.5, 48, {nu})), 3);
  REQUIRE(!a.empty());
  for (cd z : a)
    if (std::abs(z) < 2.9) CHECK(nearest(b, z) <= 1e-8);
}

TEST_CASE("Schwarz and quartet symmetry of the cloud") {
  for (const auto& p : {PeriodicPotential::exp_sin_sq(1, pi), PeriodicPotential::jacobi_dn(0.6),
                        PeriodicPotential::signum(1, 2)}) {
    INFO(p.describe());
    const auto cloud = lax_spectrum_hill(p, default_hill_config(p, 0.5, 8));
    const auto pts = points(cloud);
    const double trust = 0.5 * 0.5 * 2 * pi * default_hill_config(p, 0.5).n_modes / p.period();
    for (cd z : pts) {
      if (std::abs(z.real()) > 0.95 * trust) continue;
      CHECK(nearest(pts, std::conj(z)) <= 1e-8);
      CHECK(nearest(pts, -std::conj(z)) <= 1e-8);
    }
  }
}

TEST_CASE("every Floquet root is matched by a Hill eigenvalue") {
  const auto p = PeriodicPotential::jacobi_dn(0.6);
  const double eps = 0.5, nu = 0.3;
  const auto cfg = config(eps, 48, {nu});
  const auto cloud = points(lax_spectrum_hill(p, cfg));
  const auto roots = floquet_roots(p, eps, nu, {-2.0, 2.0, -1.1, 1.1});
  REQUIRE(!roots.empty());
  for (const auto& r : roots) CHECK(nearest(cloud, r.z) <= 1e-6);
}

TEST_CASE("configuration checks") {
  const auto p = PeriodicPotential::constant(1, 1);
  CHECK_THROWS_AS(assemble_hill_matrix(p, 0, config(1, 4, {0.0})), DomainError);
  CHECK_THROWS_AS(lax_spectrum_hill(p, config(1, 16, {})), DomainError);
  const auto g = uniform_nu_grid(2.0, 8);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(g.front() == doctest::Approx(-pi / 2));
  CHECK(g.back() < pi / 2);
  const auto d = default_hill_config(PeriodicPotential::signum(1, 2), 0.019);
  CHECK(d.n_modes == static_cast<int>(std::ceil(8 * 2 / (2 * pi * 0.019))));
  CHECK(d.nu_grid.size() == 64);
}

TEST_CASE("deduplicate removes coincident points") {
  SpectrumCloud c;
  c.points = {{cd(1, 1), 0.1, 0, Engine::Hill}, {cd(1, 1 + 1e-12), 0.2, 0, Engine::Hill},
              {cd(2, 0), 0.1, 0, Engine::Hill}};
  deduplicate(c);
  CHECK(c.points.size() == 2);
}
