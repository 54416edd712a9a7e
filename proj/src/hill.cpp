#include "zs/hill.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "zs/errors.hpp"
#include "zs/monodromy.hpp"
#include "zs/parallel.hpp"

namespace zs {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cd I(0.0, 1.0);
}  // namespace

const char* to_string(Engine e) { return e == Engine::Hill ? "hill" : "monodromy"; }

std::vector<double> uniform_nu_grid(double L, int count) {
  if (count < 1) throw DomainError("nu grid needs at least one point");
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = -kPi / L + 2.0 * kPi * k / (count * L);
  return g;
}

HillConfig default_hill_config(const PeriodicPotential& p, double eps, int nu_points) {
  HillConfig c;
  c.eps = eps;
  const double L = p.period();
  const double sup = p.norms(eps).sup_norm;
  c.n_modes = std::max(32, static_cast<int>(std::ceil(8.0 * sup * L / (2.0 * kPi * eps))));
  c.nu_grid = uniform_nu_grid(L, nu_points);
  return c;
}

void SpectrumCloud::canonicalize() {
  std::sort(points.begin(), points.end(), [](const CloudPoint& a, const CloudPoint& b) {
    if (a.nu != b.nu) return a.nu < b.nu;
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
}

Eigen::MatrixXcd assemble_hill_matrix(const PeriodicPotential& p, double nu, const HillConfig& cfg) {
  if (cfg.n_modes < 8) throw DomainError("hill: n_modes must be at least 8");
  const int N = cfg.n_modes, n = 2 * N + 1;
  const double L = p.period(), eps = cfg.eps;
  const auto c = p.fourier_coefficients(eps, 2 * N);  // index j + 2N
  auto chat = [&](int j) { return c[j + 2 * N]; };
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    const int j = a - N;
    const double k = 2.0 * kPi * j / L + nu;
    H(a, a) = -eps * k;
    H(n + a, n + a) = eps * k;
    for (int b = 0; b < n; ++b) {
      const int l = b - N;
      // z v = i eps sigma3 v' - i sigma3 Q v; the conjugate potential has coefficients conj(c_{-m}).
      H(a, n + b) = -I * chat(j - l);
      H(n + a, b) = -I * std::conj(chat(l - j));
    }
  }
  return H;
}

std::vector<cd> hill_eigenvalues(const PeriodicPotential& p, double nu, const HillConfig& cfg) {
  const Eigen::MatrixXcd H = assemble_hill_matrix(p, nu, cfg);
  if (!H.allFinite()) throw EigensolverFailure("hill matrix has non-finite entries", nu);
  // Parallelism is over nu; single-threaded BLAS keeps results independent of the worker count.
  static std::once_flag blas_threads;
  std::call_once(blas_threads, [] { openblas_set_num_threads(1); });
  Eigen::MatrixXcd a = H;
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<cd> ev(a.rows());
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
                    reinterpret_cast<lapack_complex_double*>(ev.data()), nullptr, 1, nullptr, 1);
  if (info != 0) throw EigensolverFailure("zgeev failed with info " + std::to_string(info), nu);
  return ev;
}

namespace {

struct Checked {
  bool ok = false;
  cd z;
  double residual = 0.0;
};

Checked check_point(const PeriodicPotential& p, cd z, double target, const HillConfig& cfg) {
  const MonodromyOptions plain{cfg.monodromy_tol, Derivatives::None};
  Checked out;
  try {
    const double res = std::abs(propagate_monodromy(p, {z, cfg.eps}, plain).delta() - target);
    if (res <= cfg.residual_tol) return {true, z, res};
    if (!cfg.polish || !std::isfinite(res)) return out;
    // Newton on Delta - cos(nu L); bounded move keeps the point attached to its eigenvalue.
    const MonodromyOptions deriv{cfg.monodromy_tol, Derivatives::First};
    const double max_move = kPi * cfg.eps / 8.0;
    cd w = z;
    for (int it = 0; it < 8; ++it) {
      const auto r = propagate_monodromy(p, {w, cfg.eps}, deriv);
      const cd f = r.delta() - target;
      const cd df = *r.delta_prime();
      if (df == 0.0) return out;
      w -= f / df;
      if (std::abs(w - z) > max_move) return out;
      const double rr = std::abs(propagate_monodromy(p, {w, cfg.eps}, plain).delta() - target);
      if (rr <= cfg.residual_tol) return {true, w, rr};
    }
  } catch (const Error&) {
  }
  return out;
}

}  // namespace

SpectrumCloud lax_spectrum_hill(const PeriodicPotential& p, const HillConfig& cfg) {
  if (cfg.nu_grid.empty()) throw DomainError("hill: nu grid is empty");
  const double L = p.period();
  const double trust = cfg.trust_fraction * cfg.eps * 2.0 * kPi * cfg.n_modes / L;
  std::vector<std::vector<CloudPoint>> per_nu(cfg.nu_grid.size());
  parallel_for(cfg.nu_grid.size(), [&](std::size_t i) {
    const double nu = cfg.nu_grid[i];
    const double target = std::cos(nu * L);
    for (const cd z : hill_eigenvalues(p, nu, cfg)) {
      if (std::abs(z.real()) > trust) continue;
      const Checked c = check_point(p, z, target, cfg);
      if (c.ok) per_nu[i].push_back({c.z, nu, c.residual, Engine::Hill});
    }
  });
  SpectrumCloud cloud;
  for (auto& v : per_nu) cloud.points.insert(cloud.points.end(), v.begin(), v.end());
  cloud.canonicalize();
  deduplicate(cloud);
  return cloud;
}

void deduplicate(SpectrumCloud& cloud, double rel_radius) {
  cloud.canonicalize();
  double zmax = 0.0;
  for (const auto& pt : cloud.points) zmax = std::max(zmax, std::abs(pt.z));
  const double cell = 2.0 * rel_radius * (1.0 + zmax);
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> grid;
  std::vector<CloudPoint> kept;
  for (const auto& pt : cloud.points) {
    const long long gx = static_cast<long long>(std::floor(pt.z.real() / cell));
    const long long gy = static_cast<long long>(std::floor(pt.z.imag() / cell));
    bool dup = false;
    for (long long dx = -1; dx <= 1 && !dup; ++dx)
      for (long long dy = -1; dy <= 1 && !dup; ++dy) {
        auto it = grid.find({gx + dx, gy + dy});
        if (it == grid.end()) continue;
        for (std::size_t k : it->second)
          if (std::abs(kept[k].z - pt.z) <= rel_radius * (1.0 + std::abs(pt.z))) {
            dup = true;
            break;
          }
      }
    if (dup) continue;
    grid[{gx, gy}].push_back(kept.size());
    kept.push_back(pt);
  }
  cloud.points = std::move(kept);
}

}  // namespace zs
