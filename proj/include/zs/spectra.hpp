#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "zs/analytic.hpp"
#include "zs/monodromy.hpp"
#include "zs/potential.hpp"
#include "zs/roots.hpp"

namespace zs {

struct SpectraOptions {
  double monodromy_tol = 1e-11;
  Integrator integrator = Integrator::Magnus6;
  RootFinderOptions roots;
};

enum class CountTarget { Delta, DeltaPrime, DeltaMinusOne, DeltaPlusOne };

// Delta(z) - c as a scaled analytic function; order 2 also yields Delta''.
AnalyticFunction floquet_function(const PeriodicPotential& p, double eps, cd c, const SpectraOptions& opt = {});
// Delta'(z); second derivative requests return NaN.
AnalyticFunction discriminant_prime_function(const PeriodicPotential& p, double eps, const SpectraOptions& opt = {});
// Sum: (i/2)(M11 - M12 + M21 - M22). Difference: -(i/2)(M11 - M21 + M12 - M22).
AnalyticFunction dirichlet_function(const PeriodicPotential& p, double eps, DirichletVariant v,
                                    const SpectraOptions& opt = {});

// Zeros of Delta - cos(nu L) in the window, with multiplicity.
std::vector<Root> floquet_roots(const PeriodicPotential& p, double eps, double nu, const Window& window,
                                const SpectraOptions& opt = {});

enum class EdgeType { Periodic, Antiperiodic };
const char* to_string(EdgeType t);

struct EdgeEigenvalue {
  cd z;
  EdgeType type = EdgeType::Periodic;
  int multiplicity = 1;
  double residual = 0.0;
};

// Zeros of Delta - 1 and Delta + 1, sorted by (Re, Im) then type.
std::vector<EdgeEigenvalue> periodic_antiperiodic_eigenvalues(const PeriodicPotential& p, double eps,
                                                              const Window& window, const SpectraOptions& opt = {});

std::vector<Root> dirichlet_spectrum(const PeriodicPotential& p, double eps, const Window& window,
                                     DirichletVariant v = DirichletVariant::Sum, const SpectraOptions& opt = {});

// Winding number of the target function around the rectangle; BoundaryTooClose
// when the boundary integral is farther than 0.2 from an integer.
int count_zeros_rectangle(const PeriodicPotential& p, double eps, const Window& rect, CountTarget target,
                          const SpectraOptions& opt = {});

// ---------------------------------------------------------------------------
// Gamma = {Im Delta = 0} tracing.

enum class EndKind { Periodic, Antiperiodic, Boundary, Truncated };
const char* to_string(EndKind k);

struct BandEnd {
  cd z;
  EndKind kind = EndKind::Boundary;
};

struct Band {
  std::vector<cd> polyline;
  std::vector<double> re_delta;  // Re Delta at each vertex
  BandEnd first, last;
  bool on_real_axis = false;
  bool is_spine = false;
  std::optional<cd> crosses_real_at;
  // Delta at the real crossing lies strictly inside (-1, 1).
  bool crossing_interior = false;
  double crossing_angle_deg = 0.0;
  // Interior saddles where another Gamma branch leaves this band.
  std::vector<cd> saddles;
};

struct TraceOptions {
  SpectraOptions spectra;
  double trace_tol = 1e-10;     // corrector target for |Im Delta|
  double seed_strip = 1e-3;     // zero seeds closer than this to R are left to the real-axis scan
  int max_vertices = 200000;    // per branch
  int circle_samples = 48;
};

// Off-real bands in the region plus a symbolic real-axis band (first entry).
// Throws ClosedCurveDetected if a branch closes on itself and SeedExhausted if
// the region has no seeds at all.
std::vector<Band> trace_gamma_contours(const PeriodicPotential& p, double eps, const Window& region,
                                       const TraceOptions& opt = {});

struct SpineInfo {
  cd crossing;
  double lattice_distance = 0.0;  // to the nearest n pi eps / L
  double angle_deg = 0.0;
};

struct BandClassification {
  int off_real_bands = 0;
  int spines = 0;
  int non_spine_bands = 0;
  std::vector<SpineInfo> spine_crossings;
  bool finite_band_in_region = true;
};

// Marks spines in place. A spine crosses R at a simple interior point of the band,
// at an angle of at least 10 degrees, and shares no saddle with another band in the region.
BandClassification classify_bands(std::vector<Band>& bands, double eps, double L);

}  // namespace zs
