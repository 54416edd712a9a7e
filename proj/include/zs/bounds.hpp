#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "zs/hill.hpp"
#include "zs/potential.hpp"
#include "zs/spectra.hpp"

namespace zs {

enum class RegionKind { Strip, Lambda, LambdaTilde, SigmaInftyNbhd, Pi, Xi, WkbStrip };
const char* to_string(RegionKind k);
RegionKind region_kind_from_string(const std::string& s);

// Absolute slack allowed on every region boundary.
inline constexpr double kRegionPad = 1e-9;

// A closed region of the spectral plane that a theorem places the spectrum in.
//   Strip           |Im z| <= |q|
//   Lambda          Strip and |Re z| |Im z| <= (eps/2) |q'|
//   LambdaTilde     |Im z| <= 2 |q|
//   SigmaInftyNbhd  dist(z, R u i[-|q|, |q|]) <= delta
//   Pi              Lambda and |z| <= (N - 1/2) pi eps / L
//   Xi              Strip and |z| <= (N - 1/2) pi eps / L
//   WkbStrip        |Im z| <= (eps/2) |q'/q| when Re z > wkb_re_floor; no constraint otherwise
// Norms are sup norms; nullopt marks an unbounded one.
struct BoundRegion {
  RegionKind kind = RegionKind::Strip;
  double sup_norm = 0.0;
  std::optional<double> deriv_sup_norm;
  std::optional<double> log_deriv_sup_norm;
  double eps = 1.0;
  double delta = 0.1;
  int N = 1;
  double L = 1.0;
  // Points this close to iR are treated as lying on it; the WKB bound concerns Re z > 0.
  double wkb_re_floor = 1e-6;

  static BoundRegion from_potential(RegionKind kind, const PeriodicPotential& p, double eps, double delta = 0.1,
                                    int N = 1);

  // Largest constraint excess at z; <= kRegionPad means inside. Throws
  // UnboundedParameter when the region needs a norm that is unbounded.
  double excess(cd z) const;
  bool contains(cd z) const { return excess(z) <= kRegionPad; }
  // Radius (N - 1/2) pi eps / L of the counting disc used by Pi and Xi.
  double disc_radius() const;
  std::string describe() const;
};

struct RegionAudit {
  BoundRegion region;
  // False when the region could not be evaluated; `skipped_reason` says why.
  bool evaluated = true;
  std::string skipped_reason;
  std::size_t checked = 0;
  std::size_t violations = 0;
  // Largest excess over the cloud; negative when every point is strictly inside.
  double worst_excess = 0.0;
  std::vector<bool> inside;  // per cloud point, in cloud order
};

struct BoundReport {
  std::vector<RegionAudit> audits;
  std::size_t total_violations() const;
};

BoundReport audit_cloud(const SpectrumCloud& cloud, const std::vector<BoundRegion>& regions);

struct CountingReport {
  int N = 1;
  double radius = 0.0;
  int periodic = 0, antiperiodic = 0, dirichlet = 0;
  int predicted_periodic = 0, predicted_antiperiodic = 0, predicted_dirichlet = 0;
  bool matches() const {
    return periodic == predicted_periodic && antiperiodic == predicted_antiperiodic && dirichlet == predicted_dirichlet;
  }
  int mismatch() const;
};

// Periodic, antiperiodic and Sum-variant Dirichlet eigenvalues (with multiplicity)
// inside Pi and Xi, against the predicted 2N - 2, 2N and 2N - 1.
CountingReport count_in_regions(const PeriodicPotential& p, double eps, int N, const SpectraOptions& opt = {});
// The report with the smallest mismatch over N = 1..n_max; ties go to the smaller N.
CountingReport best_count_in_regions(const PeriodicPotential& p, double eps, int n_max,
                                     const SpectraOptions& opt = {});

enum class Observable { MaxImOffReal, BandCountImagAxis, HausdorffToSigmaInfty };
const char* to_string(Observable o);
Observable observable_from_string(const std::string& s);

struct SweepOptions {
  Observable observable = Observable::MaxImOffReal;
  int nu_points = 64;
  double residual_tol = 1e-6;
  // Cloud points closer than this to R are excluded from MaxImOffReal and BandCountImagAxis.
  double off_real_floor = 1e-3;
  // MaxImOffReal over points with Re z > off_axis_floor only.
  bool positive_re_only = false;
  double off_axis_floor = 1e-6;
  // MaxImOffReal reports max |Re z| over the off-real points instead of max |Im z|.
  bool measure_real_part = false;
  // MaxImOffReal over cloud points on traced bands that cross R at 0 < Re z <= band_re_max;
  // a point is on a band when it lies within 1e-2 eps of its polyline.
  bool real_emanating_only = false;
  double band_re_max = 3.0;
  // Observables at or below fit_floor_factor * residual_tol are left out of the fit.
  double fit_floor_factor = 10.0;
};

struct SweepResult {
  std::vector<double> eps_values;    // strictly decreasing
  std::vector<double> observable;    // one per eps, nonnegative
  std::vector<bool> used_in_fit;
  std::vector<std::size_t> cloud_sizes;
  double fitted_exponent = 0.0;      // alpha in log obs = alpha log eps + c; NaN with fewer than two usable points
  double intercept = 0.0;
  double fit_residual = 0.0;         // RMS of the log-space residuals
};

// Observable on a finished cloud.
double observable_value(const SpectrumCloud& cloud, const PeriodicPotential& p, double eps, const SweepOptions& opt);

// Hill cloud per eps (default modes, filtered by the monodromy residual), the
// observable, and the least-squares power law. eps_values must hold at least
// three strictly decreasing values.
SweepResult epsilon_sweep(const PeriodicPotential& p, const std::vector<double>& eps_values,
                          const SweepOptions& opt = {});

// One-sided Hausdorff distance from the cloud to R u i[-|q|, |q|].
double hausdorff_to_sigma_infty(const SpectrumCloud& cloud, double sup_norm);

}  // namespace zs
