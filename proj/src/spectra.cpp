#include "zs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zs/errors.hpp"

namespace zs {

namespace {

constexpr cd I(0.0, 1.0);

MonodromyResult eval(const PeriodicPotential& p, double eps, cd z, int order, const SpectraOptions& opt) {
  MonodromyOptions mo;
  mo.tol = opt.monodromy_tol;
  mo.integrator = opt.integrator;
  mo.derivatives = order <= 0 ? Derivatives::None : order == 1 ? Derivatives::First : Derivatives::Second;
  return propagate_monodromy(p, {z, eps}, mo);
}

cd half_trace(const Mat2& m) { return 0.5 * (m(0, 0) + m(1, 1)); }

cd dirichlet_combo(const Mat2& m, DirichletVariant v) {
  if (v == DirichletVariant::Sum) return 0.5 * I * (m(0, 0) - m(0, 1) + m(1, 0) - m(1, 1));
  return -0.5 * I * (m(0, 0) - m(1, 0) + m(0, 1) - m(1, 1));
}

}  // namespace

const char* to_string(EdgeType t) { return t == EdgeType::Periodic ? "periodic" : "antiperiodic"; }

const char* to_string(EndKind k) {
  switch (k) {
    case EndKind::Periodic: return "periodic";
    case EndKind::Antiperiodic: return "antiperiodic";
    case EndKind::Boundary: return "boundary";
    case EndKind::Truncated: return "truncated";
  }
  return "?";
}

AnalyticFunction floquet_function(const PeriodicPotential& p, double eps, cd c, const SpectraOptions& opt) {
  return [p, eps, c, opt](cd z, int order) {
    const MonodromyResult r = eval(p, eps, z, order, opt);
    FunctionValue v;
    v.log_scale = r.log_scale;
    v.f = half_trace(r.m) - c * std::exp(-r.log_scale);
    if (r.dm) v.df = half_trace(*r.dm);
    if (r.d2m) v.d2f = half_trace(*r.d2m);
    return v;
  };
}

AnalyticFunction discriminant_prime_function(const PeriodicPotential& p, double eps, const SpectraOptions& opt) {
  return [p, eps, opt](cd z, int order) {
    const MonodromyResult r = eval(p, eps, z, order + 1, opt);
    FunctionValue v;
    v.log_scale = r.log_scale;
    v.f = half_trace(*r.dm);
    if (r.d2m) v.df = half_trace(*r.d2m);
    v.d2f = cd(std::numeric_limits<double>::quiet_NaN(), 0.0);
    return v;
  };
}

AnalyticFunction dirichlet_function(const PeriodicPotential& p, double eps, DirichletVariant var,
                                    const SpectraOptions& opt) {
  return [p, eps, var, opt](cd z, int order) {
    const MonodromyResult r = eval(p, eps, z, order, opt);
    FunctionValue v;
    v.log_scale = r.log_scale;
    v.f = dirichlet_combo(r.m, var);
    if (r.dm) v.df = dirichlet_combo(*r.dm, var);
    if (r.d2m) v.d2f = dirichlet_combo(*r.d2m, var);
    return v;
  };
}

std::vector<Root> floquet_roots(const PeriodicPotential& p, double eps, double nu, const Window& window,
                                const SpectraOptions& opt) {
  const cd c = std::cos(nu * p.period());
  return find_roots(floquet_function(p, eps, c, opt), window, opt.roots);
}

std::vector<EdgeEigenvalue> periodic_antiperiodic_eigenvalues(const PeriodicPotential& p, double eps,
                                                              const Window& window, const SpectraOptions& opt) {
  std::vector<EdgeEigenvalue> out;
  for (const auto& [c, type] : {std::pair{1.0, EdgeType::Periodic}, std::pair{-1.0, EdgeType::Antiperiodic}})
    for (const Root& r : find_roots(floquet_function(p, eps, c, opt), window, opt.roots))
      out.push_back({r.z, type, r.multiplicity, r.residual});
  std::sort(out.begin(), out.end(), [](const EdgeEigenvalue& a, const EdgeEigenvalue& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
    return a.type < b.type;
  });
  return out;
}

std::vector<Root> dirichlet_spectrum(const PeriodicPotential& p, double eps, const Window& window, DirichletVariant v,
                                     const SpectraOptions& opt) {
  return find_roots(dirichlet_function(p, eps, v, opt), window, opt.roots);
}

int count_zeros_rectangle(const PeriodicPotential& p, double eps, const Window& rect, CountTarget target,
                          const SpectraOptions& opt) {
  AnalyticFunction f;
  switch (target) {
    case CountTarget::Delta: f = floquet_function(p, eps, 0.0, opt); break;
    case CountTarget::DeltaPrime: f = discriminant_prime_function(p, eps, opt); break;
    case CountTarget::DeltaMinusOne: f = floquet_function(p, eps, 1.0, opt); break;
    case CountTarget::DeltaPlusOne: f = floquet_function(p, eps, -1.0, opt); break;
  }
  return winding_count(f, rect, opt.roots.counting);
}

}  // namespace zs
