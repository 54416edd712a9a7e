#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace zs {

using cd = std::complex<double>;

// Axis-aligned rectangle in the complex plane.
struct Window {
  double re_min = -1.0, re_max = 1.0, im_min = -1.0, im_max = 1.0;

  bool valid() const { return re_min < re_max && im_min < im_max; }
  bool contains(cd z, double pad = 0.0) const {
    return z.real() >= re_min - pad && z.real() <= re_max + pad && z.imag() >= im_min - pad &&
           z.imag() <= im_max + pad;
  }
  Window dilated(double d) const { return {re_min - d, re_max + d, im_min - d, im_max + d}; }
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  double boundary_distance(cd z) const;
};

struct Root {
  cd z;
  int multiplicity = 1;
  double residual = 0.0;
};

// Value and z-derivatives of an entire function, all scaled by exp(log_scale).
struct FunctionValue {
  cd f, df, d2f;
  double log_scale = 0.0;
};

// `order` is the highest derivative the caller needs (1 or 2).
using AnalyticFunction = std::function<FunctionValue(cd z, int order)>;

// Boundary evaluation of the winding number. Quadrature integrates f'/f with
// adaptive Gauss-Kronrod; PhaseTracking sums arg f increments over segments
// refined until the linear Taylor model certifies each one, which needs far
// fewer evaluations when zeros lie near the boundary.
enum class CountingMethod { Quadrature, PhaseTracking };

struct CountingOptions {
  CountingMethod method = CountingMethod::Quadrature;
  double quad_rel_tol = 1e-8;  // Gauss-Kronrod tolerance on each edge
  double phase_step = 0.785;   // largest arg f increment accepted on one segment
};

struct RootFinderOptions {
  CountingOptions counting;
  double residual_tol = 1e-10;  // |f| after Newton polish, unscaled
  double min_cell = 1e-9;       // relative cell size below which a cluster is declared
  int max_depth = 48;
};

// Winding number of f around w. Throws BoundaryTooClose when the boundary
// integral is farther than 0.2 from a non-negative integer or cannot be resolved;
// `deviation` receives that distance.
int winding_count(const AnalyticFunction& f, const Window& w, const CountingOptions& opt = {},
                  double* deviation = nullptr);

// All zeros of f in w with multiplicity. Throws CountMismatch when the roots
// found do not add up to the boundary count.
std::vector<Root> find_roots(const AnalyticFunction& f, const Window& w, const RootFinderOptions& opt = {});

// Deterministic ordering by (Re z, Im z).
void sort_roots(std::vector<Root>& roots);

}  // namespace zs
