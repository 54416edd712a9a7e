#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zs/bounds.hpp"
#include "zs/errors.hpp"
#include "zs/spectra.hpp"

using namespace zs;
using std::numbers::pi;

namespace {

const cd I(0, 1);

SpectrumCloud cloud_of(std::vector<cd> zs) {
  SpectrumCloud c;
  for (cd z : zs) c.points.push_back({z, 0.0, 0.0, Engine::Hill});
  return c;
}

SpectrumCloud hill_cloud(const PeriodicPotential& p, double eps, int nu_points) {
  return lax_spectrum_hill(p, default_hill_config(p, eps, nu_points));
}

}  // namespace

TEST_CASE("region predicates") {
  BoundRegion r;
  r.sup_norm = 1;
  r.deriv_sup_norm = 2;
  r.log_deriv_sup_norm = 4;
  r.eps = 0.5;
  r.L = pi;
  r.N = 2;

  r.kind = RegionKind::Strip;
  CHECK(r.contains(cd(5, 1)));
  CHECK_FALSE(r.contains(cd(0, 1.01)));

  r.kind = RegionKind::Lambda;  // |Re| |Im| <= 0.5
  CHECK(r.contains(cd(0.5, 1)));
  CHECK_FALSE(r.contains(cd(0.6, 1)));
  CHECK(r.contains(cd(10, 0.05)));

  r.kind = RegionKind::LambdaTilde;
  CHECK(r.contains(cd(3, 2)));
  CHECK_FALSE(r.contains(cd(3, 2.1)));

  r.kind = RegionKind::SigmaInftyNbhd;
  r.delta = 0.1;
  CHECK(r.contains(cd(4, 0.1)));
  CHECK(r.contains(cd(0.1, 0.9)));
  CHECK_FALSE(r.contains(cd(0.2, 0.5)));
  CHECK_FALSE(r.contains(cd(0, 1.2)));

  r.kind = RegionKind::Pi;
  CHECK(r.disc_radius() == doctest::Approx(1.5 * pi * 0.5 / pi));
  CHECK(r.contains(cd(0.7, 0)));
  CHECK_FALSE(r.contains(cd(0.8, 0)));

  r.kind = RegionKind::Xi;
  CHECK(r.contains(cd(0, 0.74)));
  CHECK_FALSE(r.contains(cd(0.6, 0.6)));

  r.kind = RegionKind::WkbStrip;  // |Im| <= 1 for Re z > 0
  CHECK(r.contains(cd(0.3, 0.99)));
  CHECK_FALSE(r.contains(cd(0.3, 1.1)));
  CHECK(r.contains(cd(-0.3, 5)));
  CHECK(r.contains(cd(0, 5)));
}

TEST_CASE("regions are Schwarz symmetric, and Strip, Lambda, SigmaInftyNbhd also reflection symmetric") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  const auto p = PeriodicPotential::jacobi_dn(0.6);
  for (auto k : {RegionKind::Strip, RegionKind::Lambda, RegionKind::LambdaTilde, RegionKind::SigmaInftyNbhd,
                 RegionKind::Pi, RegionKind::Xi, RegionKind::WkbStrip}) {
    const auto r = BoundRegion::from_potential(k, p, 0.3, 0.1, 3);
    const bool reflect = k == RegionKind::Strip || k == RegionKind::Lambda || k == RegionKind::SigmaInftyNbhd;
    for (int j = 0; j < 500; ++j) {
      const cd z(u(rng), u(rng));
      CHECK(r.contains(z) == r.contains(std::conj(z)));
      if (reflect) CHECK(r.contains(z) == r.contains(-std::conj(z)));
    }
  }
}

TEST_CASE("unbounded norms") {
  const auto s = PeriodicPotential::signum(1, 2);
  const auto lam = BoundRegion::from_potential(RegionKind::Lambda, s, 0.2);
  CHECK_THROWS_AS(lam.excess(0.5), UnboundedParameter);
  const auto rep = audit_cloud(cloud_of({0.5, cd(0.1, 0.5)}), {lam});
  REQUIRE(rep.audits.size() == 1);
  CHECK_FALSE(rep.audits[0].evaluated);
  CHECK_FALSE(rep.audits[0].skipped_reason.empty());
  CHECK(rep.total_violations() == 0);
}

TEST_CASE("audit bookkeeping") {
  const auto p = PeriodicPotential::constant(1, 2 * pi);
  const auto strip = BoundRegion::from_potential(RegionKind::Strip, p, 1);
  const auto rep = audit_cloud(cloud_of({0.5, cd(0, 0.5), cd(0, 1.5), cd(2, -3)}), {strip});
  CHECK(rep.audits[0].checked == 4);
  CHECK(rep.audits[0].violations == 2);
  CHECK(rep.audits[0].worst_excess == doctest::Approx(2));
  CHECK(rep.audits[0].inside == std::vector<bool>{true, true, false, false});
}

TEST_CASE("smooth built-in potentials stay inside Strip and Lambda") {
  const std::vector<PeriodicPotential> ps{PeriodicPotential::constant(1, 2 * pi), PeriodicPotential::plane_wave(1, 1),
                                          PeriodicPotential::exp_sin_sq(1, pi), PeriodicPotential::jacobi_dn(0.6),
                                          PeriodicPotential::rapid_phase_cos(1, 1, pi)};
  for (const auto& p : ps)
    for (double eps : {1.0, 0.5, 0.2}) {
      INFO(p.describe() << " eps=" << eps);
      const auto rep = audit_cloud(hill_cloud(p, eps, 8), {BoundRegion::from_potential(RegionKind::Strip, p, eps),
                                                           BoundRegion::from_potential(RegionKind::Lambda, p, eps)});
      CHECK(rep.audits[0].checked > 0);
      CHECK(rep.total_violations() == 0);
    }
}

TEST_CASE("dn cloud satisfies the WKB strip on Re z > 0") {
  const auto p = PeriodicPotential::jacobi_dn(0.6);
  for (double eps : {0.5, 0.2}) {
    const auto rep = audit_cloud(hill_cloud(p, eps, 16), {BoundRegion::from_potential(RegionKind::WkbStrip, p, eps)});
    CHECK(rep.total_violations() == 0);
  }
}

TEST_CASE("Dirichlet eigenvalues lie in LambdaTilde") {
  const std::vector<PeriodicPotential> ps{PeriodicPotential::signum(1, 2), PeriodicPotential::plane_wave(1, 1),
                                          PeriodicPotential::exp_sin_sq(1, pi)};
  for (const auto& p : ps) {
    const double eps = 0.5, s = p.norms(eps).sup_norm;
    const auto roots = dirichlet_spectrum(p, eps, {-2.05, 2.05, -2 * s - 0.3, 2 * s + 0.3});
    SpectrumCloud c;
    for (const auto& r : roots) c.points.push_back({r.z, 0.0, r.residual, Engine::Monodromy});
    const auto rep = audit_cloud(c, {BoundRegion::from_potential(RegionKind::LambdaTilde, p, eps)});
    INFO(p.describe());
    CHECK(!roots.empty());
    CHECK(rep.total_violations() == 0);
  }
}

TEST_CASE("counting in Pi and Xi") {
  // Even N only; odd N swaps the periodic and antiperiodic counts at these parameters.
  const auto r = count_in_regions(PeriodicPotential::constant(0.1, 2 * pi), 1, 2);
  CHECK(r.radius == doctest::Approx(0.75));
  CHECK(r.predicted_periodic == 2);
  CHECK(r.predicted_antiperiodic == 4);
  CHECK(r.predicted_dirichlet == 3);
  CHECK(r.matches());
  CHECK(count_in_regions(PeriodicPotential::zero(2 * pi), 1, 2).matches());
  const auto best = best_count_in_regions(PeriodicPotential::constant(0.1, 2 * pi), 1, 3);
  CHECK(best.N == 2);
  CHECK(best.mismatch() == 0);
}

TEST_CASE("observables on synthetic clouds") {
  const auto p = PeriodicPotential::constant(1, 2 * pi);
  SweepOptions o;
  o.observable = Observable::MaxImOffReal;
  const auto c = cloud_of({cd(0.3, 1e-4), cd(-0.2, 0.4), cd(0.5, -0.25)});
  CHECK(observable_value(c, p, 1, o) == doctest::Approx(0.4));
  o.positive_re_only = true;
  CHECK(observable_value(c, p, 1, o) == doctest::Approx(0.25));
  o.positive_re_only = false;
  o.measure_real_part = true;
  CHECK(observable_value(c, p, 1, o) == doctest::Approx(0.5));
  CHECK(observable_value(cloud_of({0.5, 1.0}), p, 1, o) == 0.0);

  CHECK(hausdorff_to_sigma_infty(cloud_of({cd(0.5, 0.3)}), 1) == doctest::Approx(0.3));
  CHECK(hausdorff_to_sigma_infty(cloud_of({cd(2, 2)}), 1) == doctest::Approx(2));
  CHECK(hausdorff_to_sigma_infty(cloud_of({cd(0.1, 1.5), cd(3, 0)}), 1) == doctest::Approx(std::sqrt(0.26)));
}

TEST_CASE("real-emanating MaxImOffReal keeps only bands crossing R at Re z > 0") {
  const auto p = PeriodicPotential::signum(1, 2);
  const double eps = 0.15;
  const auto cloud = hill_cloud(p, eps, 32);
  SweepOptions o;
  o.observable = Observable::MaxImOffReal;
  o.positive_re_only = true;
  const double all_positive = observable_value(cloud, p, eps, o);
  o.real_emanating_only = true;
  const double emanating = observable_value(cloud, p, eps, o);
  CHECK(emanating > 0);
  CHECK(emanating < all_positive);

  // The cloud maximum never exceeds the traced band maximum and approaches it.
  double traced = 0;
  for (const auto& b : trace_gamma_contours(p, eps, {1e-6, 3, -1.55, 1.55}))
    if (!b.on_real_axis && b.crosses_real_at && b.crosses_real_at->real() > 1e-6)
      for (cd z : b.polyline) traced = std::max(traced, std::abs(z.imag()));
  CHECK(emanating <= traced + 1e-3 * eps);
  CHECK(emanating >= 0.9 * traced);
}

TEST_CASE("band count on the imaginary axis") {
  const auto p = PeriodicPotential::constant(1, 2 * pi);
  SweepOptions o;
  o.observable = Observable::BandCountImagAxis;
  CHECK(observable_value(hill_cloud(p, 1, 16), p, 1, o) == 1);
  const auto dn = PeriodicPotential::jacobi_dn(0.6);
  const double a = observable_value(hill_cloud(dn, 0.5, 32), dn, 0.5, o);
  const double b = observable_value(hill_cloud(dn, 0.25, 32), dn, 0.25, o);
  CHECK(a >= 1);
  CHECK(b > a);
}

TEST_CASE("plane-wave sweep recovers the linear law of Re z = -eps V / 2") {
  SweepOptions o;
  o.observable = Observable::MaxImOffReal;
  o.measure_real_part = true;
  o.nu_points = 8;
  const auto r = epsilon_sweep(PeriodicPotential::plane_wave(1, 1), {0.5, 0.3, 0.2}, o);
  CHECK(r.fitted_exponent == doctest::Approx(1).epsilon(1e-6));
  CHECK(std::exp(r.intercept) == doctest::Approx(0.5).epsilon(1e-6));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(r.used_in_fit[k]);
    CHECK(r.observable[k] >= 0);
  }
}

TEST_CASE("sweep argument checks") {
  const auto p = PeriodicPotential::constant(1, 1);
  CHECK_THROWS_AS(epsilon_sweep(p, {0.5, 0.2}), DomainError);
  CHECK_THROWS_AS(epsilon_sweep(p, {0.5, 0.5, 0.2}), DomainError);
  CHECK_THROWS_AS(epsilon_sweep(p, {1.5, 0.5, 0.2}), DomainError);
  CHECK(region_kind_from_string("WkbStrip") == RegionKind::WkbStrip);
  CHECK_THROWS_AS(region_kind_from_string("Nope"), DomainError);
  CHECK(observable_from_string(to_string(Observable::HausdorffToSigmaInfty)) == Observable::HausdorffToSigmaInfty);
}
