#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "zs/potential.hpp"
#include "zs/roots.hpp"

namespace zs {

enum class DirichletVariant { Sum, Difference };

// cos(sqrt u) and sin(sqrt u)/sqrt u; both entire in u, so the branch is immaterial.
cd cos_sqrt(cd u);
cd sinc_sqrt(cd u);

cd constant_discriminant(double A, double L, double eps, cd z);
cd plane_wave_discriminant(double A, double V, double L, double eps, cd z);
cd signum_discriminant(double A, double L, double eps, cd z);

// Dirichlet function of a constant potential for the given boundary variant:
// Sum gives (z - iA) sin(xi L/eps)/xi, Difference gives -(z + iA) sin(xi L/eps)/xi.
cd constant_dirichlet_function(double A, double L, double eps, cd z, DirichletVariant v);

// Zeros of constant_dirichlet_function with |mu| <= R, with multiplicity,
// sorted by (Re, Im).
std::vector<Root> constant_dirichlet(double A, double L, double eps, double R,
                                     DirichletVariant v = DirichletVariant::Sum);

// The real line together with finitely many closed segments.
struct LaxSetDescription {
  bool real_line = true;
  std::vector<std::pair<cd, cd>> segments;

  double distance(cd z) const;
  bool contains(cd z, double tol = 1e-12) const { return distance(z) <= tol; }
};

LaxSetDescription constant_lax_spectrum(double A, double L, double eps);
// Closed form only when L = 2 pi / |V|; nullopt otherwise.
std::optional<LaxSetDescription> plane_wave_lax_spectrum(double A, double V, double eps,
                                                         std::optional<double> L = std::nullopt);

// W(x) = -q(x)^2 -/+ i eps q'(x) for real q; Hill eigenvalue lambda = z^2.
struct HillReduction {
  std::function<cd(double)> w_plus, w_minus;
  static cd eigenvalue_map(cd z) { return z * z; }
};
HillReduction hill_reduction(const PeriodicPotential& p, double eps);

}  // namespace zs
