#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace zs {

using cd = std::complex<double>;

enum class PotentialKind { Constant, PlaneWave, Signum, ExpSinSq, JacobiDn, RapidPhase, Sampled, UserClosure };

std::string to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

// Kind-specific real parameters. Unused entries keep their defaults.
struct PotentialParams {
  double A = 1.0;  // amplitude
  double V = 0.0;  // plane-wave wavenumber
  double m = 0.0;  // elliptic parameter
  double S = 0.0;  // phase scale of the rapid-phase family
};

// nullopt marks an unbounded norm.
struct PotentialNorms {
  double sup_norm = 0.0;
  std::optional<double> deriv_sup_norm;
  double l2_norm_sq = 0.0;
  std::optional<double> log_deriv_sup_norm;
};

// Constant piece of a piecewise-constant potential on [x0, x1).
struct Segment {
  double x0, x1;
  cd q;
};

// Symmetry data used by the monodromy identities and by contour seeding.
struct PotentialSymmetry {
  bool real = false;
  std::optional<double> reflection_theta;  // q(-x) = e^{2i theta} q(x)
  bool pt = false;                         // q(-x) = conj(q(x))
};

// Immutable L-periodic potential q(x) or q(x; eps).
class PeriodicPotential {
 public:
  using Closure = std::function<cd(double x, double eps)>;

  static PeriodicPotential zero(double L);
  static PeriodicPotential constant(double A, double L);
  // L defaults to 2 pi / |V|; V == 0 requires an explicit L.
  static PeriodicPotential plane_wave(double A, double V, std::optional<double> L = std::nullopt);
  // +A on [0, L/2), -A on [L/2, L).
  static PeriodicPotential signum(double A = 1.0, double L = 2.0);
  // A exp(-sin^2(pi x / L)).
  static PeriodicPotential exp_sin_sq(double A = 1.0, double L = 3.14159265358979323846);
  // A dn(x|m), period 2K(m).
  static PeriodicPotential jacobi_dn(double m, double A = 1.0);
  // A exp(i S cos(2 pi x / L) / eps).
  static PeriodicPotential rapid_phase_cos(double A = 1.0, double S = 1.0, double L = 3.14159265358979323846);
  // A dn(x|m) exp(i S dn(x|m) / eps), period 2K(m).
  static PeriodicPotential rapid_phase_dn(double m, double S = 2.0, double A = 1.0);
  // Uniform samples q(jL/n), j = 0..n-1, interpolated trigonometrically.
  static PeriodicPotential sampled(std::vector<cd> samples, double L);
  static PeriodicPotential from_closure(Closure f, double L, bool epsilon_coupled = false,
                                        std::vector<double> discontinuities = {},
                                        PotentialSymmetry symmetry = {});

  PotentialKind kind() const;
  double period() const;
  const PotentialParams& params() const;
  bool epsilon_coupled() const;
  const std::vector<double>& discontinuities() const;
  const PotentialSymmetry& symmetry() const;
  bool is_real() const { return symmetry().real; }
  // Non-empty exactly for piecewise-constant kinds; segments tile [0, L).
  const std::vector<Segment>& segments() const;
  std::string describe() const;

  cd eval(double x, double eps = 1.0) const;
  // Throws DiscontinuityError within 1e-12 L of a jump.
  cd eval_derivative(double x, double eps = 1.0) const;
  PotentialNorms norms(double eps = 1.0) const;
  // c_j, j = -n..n, stored at index j + n; basis exp(2 pi i j x / L).
  std::vector<cd> fourier_coefficients(double eps, int n_modes) const;

  struct Impl;

 private:
  explicit PeriodicPotential(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace zs
