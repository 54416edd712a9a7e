#pragma once

#include <Eigen/Core>
#include <vector>

#include "zs/potential.hpp"

namespace zs {

enum class Engine { Hill, Monodromy };
const char* to_string(Engine e);

struct HillConfig {
  int n_modes = 32;            // N; matrix dimension 2(2N+1)
  std::vector<double> nu_grid;  // sorted, within [-pi/L, pi/L)
  double eps = 1.0;
  double residual_tol = 1e-6;
  // Eigenvalues with |Re z| beyond this fraction of the resolved range eps*2*pi*N/L are discarded unchecked.
  double trust_fraction = 0.5;
  // Newton-polish eigenvalues that miss residual_tol before rejecting them.
  bool polish = true;
  double monodromy_tol = 1e-10;
};

// N = max(32, ceil(8 |q|_inf L / (2 pi eps))) and 64 uniform nu in [-pi/L, pi/L).
HillConfig default_hill_config(const PeriodicPotential& p, double eps, int nu_points = 64);
std::vector<double> uniform_nu_grid(double L, int count);

struct CloudPoint {
  cd z;
  double nu = 0.0;
  double residual = 0.0;
  Engine engine = Engine::Hill;
};

struct SpectrumCloud {
  std::vector<CloudPoint> points;
  // Sorts by (nu, Re z, Im z).
  void canonicalize();
};

Eigen::MatrixXcd assemble_hill_matrix(const PeriodicPotential& p, double nu, const HillConfig& cfg);
std::vector<cd> hill_eigenvalues(const PeriodicPotential& p, double nu, const HillConfig& cfg);
SpectrumCloud lax_spectrum_hill(const PeriodicPotential& p, const HillConfig& cfg);

// Removes points within 1e-8 (1 + |z|) of an earlier point in (nu, Re z, Im z) order.
void deduplicate(SpectrumCloud& cloud, double rel_radius = 1e-8);

}  // namespace zs
