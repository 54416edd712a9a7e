#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zs/errors.hpp"
#include "zs/roots.hpp"

using namespace zs;

namespace {

// Monic polynomial with the given zeros, repeated by multiplicity.
AnalyticFunction poly(std::vector<cd> zeros) {
  return [zeros](cd z, int) {
    cd f = 1, df = 0, d2f = 0;
    for (cd a : zeros) {
      d2f = d2f * (z - a) + 2.0 * df;
      df = df * (z - a) + f;
      f = f * (z - a);
    }
    return FunctionValue{f, df, d2f, 0.0};
  };
}

CountingOptions method(CountingMethod m) {
  CountingOptions o;
  o.method = m;
  return o;
}

}  // namespace

TEST_CASE("winding counts agree across methods") {
  const auto f = poly({cd(0.1, 0.2), cd(-0.5, 0.5), cd(-0.5, 0.5), cd(2, 2)});
  const Window w{-1, 1, -1, 1};
  for (auto m : {CountingMethod::Quadrature, CountingMethod::PhaseTracking}) {
    double dev = 1;
    CHECK(winding_count(f, w, method(m), &dev) == 3);
    CHECK(dev <= 1e-6);
    CHECK(winding_count(f, {1.5, 3, 1.5, 3}, method(m)) == 1);
    CHECK(winding_count(f, {1.5, 3, -3, -1.5}, method(m)) == 0);
  }
}

TEST_CASE("zeros on the boundary are rejected") {
  const auto f = poly({cd(1, 0)});
  CHECK_THROWS_AS(winding_count(f, {-1, 1, -1, 1}), BoundaryTooClose);
  CHECK_THROWS_AS(winding_count(f, {-1, 1, -1, 1}, method(CountingMethod::PhaseTracking)), BoundaryTooClose);
}

TEST_CASE("roots with multiplicity") {
  const std::vector<cd> zs{cd(0.1, 0.2), cd(-0.5, 0.5), cd(-0.5, 0.5), cd(0.7, -0.3)};
  auto roots = find_roots(poly(zs), {-1, 1, -1, 1});
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  CHECK(total == 4);
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(roots[0].z - cd(-0.5, 0.5)) <= 1e-6);
  CHECK(roots[0].multiplicity == 2);
  CHECK(std::abs(roots[1].z - cd(0.1, 0.2)) <= 1e-12);
  CHECK(std::abs(roots[2].z - cd(0.7, -0.3)) <= 1e-12);
  CHECK(roots[1].residual <= 1e-10);
}

TEST_CASE("near-coincident zeros form one cluster") {
  const auto roots = find_roots(poly({cd(0.2, 0.1), cd(0.2, 0.1 + 1e-13)}), {-1, 1, -1, 1});
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].multiplicity == 2);
}

TEST_CASE("scaled functions") {
  // e^{40 z} (z - 0.3)(z + 0.4i), carried as a scaled value.
  AnalyticFunction f = [](cd z, int) {
    const cd p = (z - 0.3) * (z + cd(0, 0.4));
    const cd dp = 2.0 * z - 0.3 + cd(0, 0.4);
    const double ls = 40 * z.real();
    const cd ph = std::exp(cd(0, 40 * z.imag()));
    return FunctionValue{ph * p, ph * (40.0 * p + dp), ph * (1600.0 * p + 80.0 * dp + 2.0), ls};
  };
  auto roots = find_roots(f, {-1, 1, -1, 1});
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0].z - cd(0, -0.4)) <= 1e-10);
  CHECK(std::abs(roots[1].z - cd(0.3, 0)) <= 1e-10);
}

TEST_CASE("counting consistency on a dense set") {
  std::vector<cd> zs;
  for (int k = 0; k < 12; ++k) zs.push_back(cd(std::cos(0.5 * k + 0.1) * 0.8, std::sin(0.7 * k) * 0.6));
  const auto f = poly(zs);
  const Window w{-0.9, 0.9, -0.7, 0.7};
  const auto roots = find_roots(f, w);
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  CHECK(total == winding_count(f, w));
  CHECK(total == 12);
}

TEST_CASE("ordering and window helpers") {
  std::vector<Root> r{{cd(1, 0)}, {cd(-1, 2)}, {cd(-1, -2)}};
  sort_roots(r);
  CHECK(r[0].z == cd(-1, -2));
  CHECK(r[1].z == cd(-1, 2));
  CHECK(r[2].z == cd(1, 0));
  const Window w{-1, 2, -3, 4};
  CHECK(w.valid());
  CHECK_FALSE((Window{1, 0, 0, 1}.valid()));
  CHECK(w.contains(cd(0, 0)));
  CHECK_FALSE(w.contains(cd(3, 0)));
  CHECK(w.boundary_distance(cd(0, 0)) == doctest::Approx(1));
}
