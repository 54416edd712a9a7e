#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>

#include "zs/potential.hpp"

namespace zs {

using Mat2 = Eigen::Matrix2cd;

struct SpectralPoint {
  cd z;
  double eps = 1.0;
};

enum class Derivatives { None, First, Second };

// Smooth-segment integrator. Piecewise-constant potentials always use exact exponentials.
enum class Integrator {
  DormandPrince45,  // embedded RK 5(4), PI step control
  Magnus6,          // three-node Gauss-Legendre Magnus, exact 2x2 exponentials
};

// Monodromy M(z; eps) = Phi(L). Matrices are stored scaled: the true value is
// exp(log_scale) times the stored one. log_scale is 0 unless the propagation
// had to renormalize to avoid overflow.
struct MonodromyResult {
  Mat2 m = Mat2::Identity();
  std::optional<Mat2> dm;   // d/dz
  std::optional<Mat2> d2m;  // d^2/dz^2
  double log_scale = 0.0;
  // |det M - 1| relative to max(1, |M|^2) so that it measures roundoff.
  double det_defect = 0.0;

  cd m11() const { return scaled(m(0, 0)); }
  cd m12() const { return scaled(m(0, 1)); }
  cd m21() const { return scaled(m(1, 0)); }
  cd m22() const { return scaled(m(1, 1)); }
  cd delta() const { return scaled(0.5 * (m(0, 0) + m(1, 1))); }
  std::optional<cd> delta_prime() const;
  std::optional<cd> delta_second() const;
  // Trace/2 of the stored matrices, without the scale factor.
  cd delta_scaled() const { return 0.5 * (m(0, 0) + m(1, 1)); }

 private:
  cd scaled(cd v) const { return log_scale == 0.0 ? v : v * std::exp(log_scale); }
};

struct MonodromyOptions {
  double tol = 1e-10;
  Derivatives derivatives = Derivatives::None;
  // Reject results whose normalized det defect exceeds this.
  double det_tol = 1e-9;
  Integrator integrator = Integrator::DormandPrince45;
  // Accumulate in long double; lowers the roundoff floor where |M| is large.
  bool extended_precision = false;
};

MonodromyResult propagate_monodromy(const PeriodicPotential& p, const SpectralPoint& pt,
                                    const MonodromyOptions& opt = {});

cd discriminant(const PeriodicPotential& p, const SpectralPoint& pt, double tol = 1e-10);
cd discriminant_derivative(const PeriodicPotential& p, const SpectralPoint& pt, double tol = 1e-10);

// Max-abs entry defects of the monodromy identities, normalized by max(1, |M|).
// Entries are absent when the potential lacks the corresponding symmetry.
struct SymmetryReport {
  double schwarz = 0.0;
  std::optional<double> real;
  std::optional<double> reflection;
  std::optional<double> pt;
  double det_defect = 0.0;
  double worst() const;
};

SymmetryReport check_symmetries(const PeriodicPotential& p, const SpectralPoint& pt, double tol = 1e-10);
SymmetryReport check_symmetries(const PeriodicPotential& p, const SpectralPoint& pt, const MonodromyOptions& opt);

}  // namespace zs
