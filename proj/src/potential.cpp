#include "zs/potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unsupported/Eigen/FFT>

#include "zs/elliptic.hpp"
#include "zs/errors.hpp"

namespace zs {

namespace {

constexpr double kPi = std::numbers::pi;

enum class Shape { Zero, Constant, PlaneWave, Signum, ExpSinSq, Dn, RapidCos, RapidDn, Sampled, Closure };

}  // namespace

struct PeriodicPotential::Impl {
  PotentialKind kind;
  Shape shape;
  double L;
  PotentialParams params;
  bool eps_coupled = false;
  std::vector<double> discs;
  PotentialSymmetry sym;
  std::vector<Segment> segments;
  Closure closure;
  std::vector<cd> sample_coeffs;  // DFT of the samples, natural FFT order
};

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::Constant: return "constant";
    case PotentialKind::PlaneWave: return "plane_wave";
    case PotentialKind::Signum: return "signum";
    case PotentialKind::ExpSinSq: return "exp_sin_sq";
    case PotentialKind::JacobiDn: return "jacobi_dn";
    case PotentialKind::RapidPhase: return "rapid_phase";
    case PotentialKind::Sampled: return "sampled";
    case PotentialKind::UserClosure: return "user_closure";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  for (auto k : {PotentialKind::Constant, PotentialKind::PlaneWave, PotentialKind::Signum, PotentialKind::ExpSinSq,
                 PotentialKind::JacobiDn, PotentialKind::RapidPhase, PotentialKind::Sampled,
                 PotentialKind::UserClosure})
    if (to_string(k) == s) return k;
  throw DomainError("unknown potential kind '" + s + "'");
}

namespace {

void require_period(double L) {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("period must be positive and finite");
}

double reduce(double x, double L) {
  double r = x - L * std::floor(x / L);
  return r >= L ? 0.0 : r;
}

}  // namespace

PeriodicPotential PeriodicPotential::zero(double L) {
  auto p = constant(0.0, L);
  return p;
}

PeriodicPotential PeriodicPotential::constant(double A, double L) {
  require_period(L);
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::Constant;
  im->shape = A == 0.0 ? Shape::Zero : Shape::Constant;
  im->L = L;
  im->params.A = A;
  im->sym = {true, 0.0, true};
  im->segments = {{0.0, L, cd(A, 0.0)}};
  return PeriodicPotential(im);
}

PeriodicPotential PeriodicPotential::plane_wave(double A, double V, std::optional<double> L) {
  if (!L) {
    if (V == 0.0) throw DomainError("plane_wave: V == 0 requires an explicit period");
    L = 2.0 * kPi / std::abs(V);
  }
  require_period(*L);
  const double turns = V * *L / (2.0 * kPi);
  if (std::abs(turns - std::round(turns)) > 1e-9)
    throw DomainError("plane_wave: V L must be an integer multiple of 2 pi");
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::PlaneWave;
  im->shape = Shape::PlaneWave;
  im->L = *L;
  im->params.A = A;
  im->params.V = V;
  im->sym.real = (V == 0.0);
  im->sym.pt = true;
  if (V == 0.0) im->sym.reflection_theta = 0.0;
  return PeriodicPotential(im);
}

PeriodicPotential PeriodicPotential::signum(double A, double L) {
  require_period(L);
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::Signum;
  im->shape = Shape::Signum;
  im->L = L;
  im->params.A = A;
  im->discs = {0.0, 0.5 * L};
  im->sym = {true, kPi / 2.0, false};
  im->segments = {{0.0, 0.5 * L, cd(A, 0.0)}, {0.5 * L, L, cd(-A, 0.0)}};
  return PeriodicPotential(im);
}

PeriodicPotential PeriodicPotential::exp_sin_sq(double A, double L) {
  require_period(L);
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::ExpSinSq;
  im->shape = Shape::ExpSinSq;
  im->L = L;
  im->params.A = A;
  im->sym = {true, 0.0, true};
  return PeriodicPotential(im);
}

PeriodicPotential PeriodicPotential::jacobi_dn(double m, double A) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("jacobi_dn potential: m must lie in [0,1)");
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::JacobiDn;
  im->shape = Shape::Dn;
  im->L = 2.0 * elliptic_K(m);
  im->params.A = A;
  im->params.m = m;
  im->sym = {true, 0.0, true};
  return PeriodicPotential(im);
}

PeriodicPotential PeriodicPotential::rapid_phase_cos(double A, double S, double L) {
  require_period(L);
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::RapidPhase;
  im->shape = Shape::RapidCos;
  im->L = L;
  im->params.A = A;
  im->params.S = S;
  im->eps_coupled = true;
  im->sym.real = (S == 0.0);
  im->sym.reflection_theta = 0.0;
  im->sym.pt = (S == 0.0);
  return PeriodicPotential(im);
}

PeriodicPotential PeriodicPotential::rapid_phase_dn(double m, double S, double A) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("rapid_phase_dn: m must lie in [0,1)");
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::RapidPhase;
  im->shape = Shape::RapidDn;
  im->L = 2.0 * elliptic_K(m);
  im->params.A = A;
  im->params.m = m;
  im->params.S = S;
  im->eps_coupled = true;
  im->sym.real = (S == 0.0);
  im->sym.reflection_theta = 0.0;
  im->sym.pt = (S == 0.0);
  return PeriodicPotential(im);
}

PeriodicPotential PeriodicPotential::sampled(std::vector<cd> samples, double L) {
  require_period(L);
  if (samples.empty()) throw DomainError("sampled potential needs at least one sample");
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::Sampled;
  im->shape = Shape::Sampled;
  im->L = L;
  const auto n = samples.size();
  Eigen::FFT<double> fft;
  std::vector<cd> out(n);
  fft.fwd(out, samples);
  for (auto& c : out) c /= static_cast<double>(n);
  im->sample_coeffs = std::move(out);
  im->sym.real = std::all_of(samples.begin(), samples.end(), [](cd s) { return s.imag() == 0.0; });
  return PeriodicPotential(im);
}

PeriodicPotential PeriodicPotential::from_closure(Closure f, double L, bool epsilon_coupled,
                                                  std::vector<double> discontinuities, PotentialSymmetry symmetry) {
  require_period(L);
  if (!f) throw DomainError("from_closure: empty closure");
  for (double& d : discontinuities) d = reduce(d, L);
  std::sort(discontinuities.begin(), discontinuities.end());
  discontinuities.erase(std::unique(discontinuities.begin(), discontinuities.end()), discontinuities.end());
  auto im = std::make_shared<Impl>();
  im->kind = PotentialKind::UserClosure;
  im->shape = Shape::Closure;
  im->L = L;
  im->closure = std::move(f);
  im->eps_coupled = epsilon_coupled;
  im->discs = std::move(discontinuities);
  im->sym = symmetry;
  return PeriodicPotential(im);
}

PotentialKind PeriodicPotential::kind() const { return impl_->kind; }
double PeriodicPotential::period() const { return impl_->L; }
const PotentialParams& PeriodicPotential::params() const { return impl_->params; }
bool PeriodicPotential::epsilon_coupled() const { return impl_->eps_coupled; }
const std::vector<double>& PeriodicPotential::discontinuities() const { return impl_->discs; }
const PotentialSymmetry& PeriodicPotential::symmetry() const { return impl_->sym; }
const std::vector<Segment>& PeriodicPotential::segments() const { return impl_->segments; }

std::string PeriodicPotential::describe() const {
  std::ostringstream os;
  os.precision(17);
  const auto& p = impl_->params;
  os << to_string(impl_->kind) << "(L=" << impl_->L;
  switch (impl_->shape) {
    case Shape::Zero:
    case Shape::Constant:
    case Shape::Signum:
    case Shape::ExpSinSq: os << ", A=" << p.A; break;
    case Shape::PlaneWave: os << ", A=" << p.A << ", V=" << p.V; break;
    case Shape::Dn: os << ", A=" << p.A << ", m=" << p.m; break;
    case Shape::RapidCos: os << ", A=" << p.A << ", S=" << p.S << ", phase=cos"; break;
    case Shape::RapidDn: os << ", A=" << p.A << ", S=" << p.S << ", m=" << p.m << ", phase=dn"; break;
    case Shape::Sampled: os << ", n=" << impl_->sample_coeffs.size(); break;
    case Shape::Closure: break;
  }
  os << ")";
  return os.str();
}

cd PeriodicPotential::eval(double x, double eps) const {
  const Impl& im = *impl_;
  const double L = im.L;
  const double xr = reduce(x, L);
  const auto& p = im.params;
  switch (im.shape) {
    case Shape::Zero: return 0.0;
    case Shape::Constant: return p.A;
    case Shape::PlaneWave: return p.A * std::exp(cd(0.0, p.V * xr));
    case Shape::Signum: return xr < 0.5 * L ? p.A : -p.A;
    case Shape::ExpSinSq: {
      const double s = std::sin(kPi * xr / L);
      return p.A * std::exp(-s * s);
    }
    case Shape::Dn: return p.A * zs::jacobi_dn(xr, p.m);
    case Shape::RapidCos: return p.A * std::exp(cd(0.0, p.S * std::cos(2.0 * kPi * xr / L) / eps));
    case Shape::RapidDn: {
      const double d = zs::jacobi_dn(xr, p.m);
      return p.A * d * std::exp(cd(0.0, p.S * d / eps));
    }
    case Shape::Sampled: {
      const auto& c = im.sample_coeffs;
      const int n = static_cast<int>(c.size());
      const double w = 2.0 * kPi * xr / L;
      cd sum = c[0];
      for (int j = 1; 2 * j < n; ++j)
        sum += c[j] * std::exp(cd(0.0, j * w)) + c[n - j] * std::exp(cd(0.0, -j * w));
      if (n % 2 == 0) sum += c[n / 2] * std::cos(0.5 * n * w);
      return sum;
    }
    case Shape::Closure: return im.closure(xr, eps);
  }
  return 0.0;
}

cd PeriodicPotential::eval_derivative(double x, double eps) const {
  const Impl& im = *impl_;
  const double L = im.L;
  const double xr = reduce(x, L);
  for (double d : im.discs) {
    const double dist = std::min(std::abs(xr - d), L - std::abs(xr - d));
    if (dist <= 1e-12 * L) throw DiscontinuityError("eval_derivative at a jump of the potential");
  }
  const auto& p = im.params;
  switch (im.shape) {
    case Shape::Zero:
    case Shape::Constant:
    case Shape::Signum: return 0.0;
    case Shape::PlaneWave: return cd(0.0, p.V) * p.A * std::exp(cd(0.0, p.V * xr));
    case Shape::ExpSinSq: {
      const double a = kPi * xr / L;
      const double s = std::sin(a);
      return -p.A * (kPi / L) * std::sin(2.0 * a) * std::exp(-s * s);
    }
    case Shape::Dn: {
      const auto t = jacobi_sncndn(xr, p.m);
      return -p.A * p.m * t.sn * t.cn;
    }
    case Shape::RapidCos: {
      const double a = 2.0 * kPi * xr / L;
      const cd q = p.A * std::exp(cd(0.0, p.S * std::cos(a) / eps));
      return q * cd(0.0, -p.S * (2.0 * kPi / L) * std::sin(a) / eps);
    }
    case Shape::RapidDn: {
      const auto t = jacobi_sncndn(xr, p.m);
      const double dp = -p.m * t.sn * t.cn;
      return p.A * dp * std::exp(cd(0.0, p.S * t.dn / eps)) * cd(1.0, p.S * t.dn / eps);
    }
    case Shape::Sampled:
    case Shape::Closure: {
      const double h = 1e-6 * L;
      return (eval(xr + h, eps) - eval(xr - h, eps)) / (2.0 * h);
    }
  }
  return 0.0;
}

namespace {

// Max of f over one period: dense sampling, then Brent refinement around each
// sampled local maximum. f must be continuous on each sub-interval.
double sampled_max(const std::function<double(double)>& f, double L, int n = 10000) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = f(L * i / n);
  double best = *std::max_element(v.begin(), v.end());
  for (int i = 0; i < n; ++i) {
    const double prev = v[(i + n - 1) % n], next = v[(i + 1) % n];
    if (v[i] >= prev && v[i] >= next && v[i] > 0.0) {
      const double a = L * (i - 1) / n, b = L * (i + 1) / n;
      auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, a, b, 52);
      best = std::max(best, -r.second);
    }
  }
  return best;
}

double sampled_min(const std::function<double(double)>& f, double L, int n = 10000) {
  return -sampled_max([&](double x) { return -f(x); }, L, n);
}

}  // namespace

PotentialNorms PeriodicPotential::norms(double eps) const {
  const Impl& im = *impl_;
  const double L = im.L;
  const auto& p = im.params;
  PotentialNorms out;
  const bool smooth = im.discs.empty();
  auto absq = [&](double x) { return std::abs(eval(x, eps)); };
  auto absdq = [&](double x) { return std::abs(eval_derivative(x, eps)); };

  switch (im.shape) {
    case Shape::Zero:
      out.sup_norm = 0.0;
      out.deriv_sup_norm = 0.0;
      out.l2_norm_sq = 0.0;
      out.log_deriv_sup_norm = std::nullopt;
      return out;
    case Shape::Constant:
      out.sup_norm = std::abs(p.A);
      out.deriv_sup_norm = 0.0;
      out.l2_norm_sq = p.A * p.A * L;
      out.log_deriv_sup_norm = 0.0;
      return out;
    case Shape::PlaneWave:
      out.sup_norm = std::abs(p.A);
      out.deriv_sup_norm = std::abs(p.A * p.V);
      out.l2_norm_sq = p.A * p.A * L;
      if (p.A != 0.0) out.log_deriv_sup_norm = std::abs(p.V);
      return out;
    case Shape::Signum:
      out.sup_norm = std::abs(p.A);
      out.l2_norm_sq = p.A * p.A * L;
      return out;
    case Shape::ExpSinSq:
    case Shape::Dn:
    case Shape::RapidCos:
    case Shape::RapidDn: out.sup_norm = std::abs(p.A); break;
    case Shape::Sampled:
    case Shape::Closure: out.sup_norm = sampled_max(absq, L); break;
  }

  if (smooth) {
    out.deriv_sup_norm = sampled_max(absdq, L);
    const double qmin = sampled_min(absq, L);
    if (qmin > 1e-14 * std::max(out.sup_norm, 1e-300))
      out.log_deriv_sup_norm = sampled_max([&](double x) { return absdq(x) / absq(x); }, L);
  }

  std::vector<double> cuts{0.0};
  for (double d : im.discs)
    if (d > 0.0) cuts.push_back(d);
  cuts.push_back(L);
  double l2 = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    l2 += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return std::norm(eval(x, eps)); }, cuts[k], cuts[k + 1], 15, 1e-10);
  }
  out.l2_norm_sq = l2;
  return out;
}

std::vector<cd> PeriodicPotential::fourier_coefficients(double eps, int n_modes) const {
  if (n_modes < 1) throw DomainError("fourier_coefficients: n_modes must be >= 1");
  const Impl& im = *impl_;
  const auto& p = im.params;
  std::vector<cd> c(2 * n_modes + 1, cd(0.0));
  auto at = [&](int j) -> cd& { return c[j + n_modes]; };
  switch (im.shape) {
    case Shape::Zero: return c;
    case Shape::Constant: at(0) = p.A; return c;
    case Shape::Signum:
      for (int j = -n_modes; j <= n_modes; ++j)
        if (j % 2 != 0) at(j) = 2.0 * p.A / (cd(0.0, kPi) * static_cast<double>(j));
      return c;
    case Shape::PlaneWave: {
      const long j = std::lround(p.V * im.L / (2.0 * kPi));
      if (std::abs(j) <= n_modes) at(static_cast<int>(j)) = p.A;
      return c;
    }
    default: break;
  }
  int M = 16;
  while (M < 8 * n_modes) M *= 2;
  std::vector<cd> samples(M), spec(M);
  for (int k = 0; k < M; ++k) samples[k] = eval(im.L * k / M, eps);
  Eigen::FFT<double> fft;
  fft.fwd(spec, samples);
  for (int j = -n_modes; j <= n_modes; ++j) at(j) = spec[(j + M) % M] / static_cast<double>(M);
  return c;
}

}  // namespace zs
