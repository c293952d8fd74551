#include "synthwalk/step.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>

#include <fftw3.h>

#include "synthwalk/bessel.hpp"
#include "synthwalk/errors.hpp"

namespace synthwalk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLeakFlag = 1e-6;
constexpr double kBoundaryWarn = 1e-9;

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ConfigError(std::string("modulation parameter ") + name + " must be finite");
}

// i^l for integer l.
cplx i_power(int l) {
  switch (((l % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::vector<cplx> convolve_open(std::span<const cplx> in, const TranslationKernel& k) {
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(in.size());
  for (int src = 0; src < n; ++src) {
    const cplx a = in[static_cast<std::size_t>(src)];
    if (a == cplx{}) continue;
    const int lo = std::max(-k.truncation, -src);
    const int hi = std::min(k.truncation, n - 1 - src);
    for (int l = lo; l <= hi; ++l) out[static_cast<std::size_t>(src + l)] += k.coeff(l) * a;
  }
  return out;
}

}  // namespace

ModulationParams ModulationParams::make(double gamma, double theta, double phi_h, double phi_v) {
  require_finite(gamma, "gamma");
  require_finite(theta, "theta");
  require_finite(phi_h, "phi_h");
  require_finite(phi_v, "phi_v");
  if (gamma < 0.0) throw ConfigError("modulation strength gamma must be >= 0");
  // R(theta) has period 4 pi; keep theta in (-2 pi, 2 pi].
  double t = -2.0 * wrap_angle(-theta / 2.0);
  if (t <= -2.0 * kPi) t += 4.0 * kPi;
  return ModulationParams{gamma, t, wrap_angle(phi_h), wrap_angle(phi_v)};
}

double TranslationKernel::weight() const noexcept {
  double w = 0.0;
  for (const auto& c : coeffs) w += std::norm(c);
  return w;
}

TranslationKernel translation_kernel(double gamma, double phi, double tol) {
  if (!(tol > 0.0 && tol <= 1e-6)) throw ConfigError("kernel tolerance must lie in (0, 1e-6]");
  if (!std::isfinite(gamma) || !std::isfinite(phi)) throw ConfigError("kernel parameters must be finite");

  const double ag = std::abs(gamma);
  const int max_order = static_cast<int>(ag + 20.0 + 6.0 * std::cbrt(ag + 1.0) + std::sqrt(40.0 * (ag + 1.0)));
  const auto j = bessel_j_sequence(gamma, max_order);

  // tail[L] = 2 sum_{l > L} J_l^2, summed from the far end to avoid cancellation.
  std::vector<double> tail(j.size(), 0.0);
  for (int l = max_order - 1; l >= 0; --l) {
    tail[static_cast<std::size_t>(l)] = tail[static_cast<std::size_t>(l) + 1] + 2.0 * j[static_cast<std::size_t>(l) + 1] * j[static_cast<std::size_t>(l) + 1];
  }
  int truncation = max_order;
  for (int l = 0; l <= max_order; ++l) {
    if (tail[static_cast<std::size_t>(l)] < tol) {
      truncation = l;
      break;
    }
  }

  TranslationKernel k;
  k.gamma = gamma;
  k.phi = phi;
  k.truncation = truncation;
  k.tail_bound = tail[static_cast<std::size_t>(truncation)];
  k.coeffs.resize(static_cast<std::size_t>(2 * truncation + 1));
  for (int l = -truncation; l <= truncation; ++l) {
    const double jl = (l < 0 && (-l) % 2 == 1) ? -j[static_cast<std::size_t>(-l)] : j[static_cast<std::size_t>(std::abs(l))];
    k.coeffs[static_cast<std::size_t>(l + truncation)] = i_power(l) * jl * std::polar(1.0, l * phi);
  }
  return k;
}

LatticeState apply_rotation(const LatticeState& s, double theta) {
  const double c = std::cos(theta / 2.0);
  const double sn = std::sin(theta / 2.0);
  const auto h = s.component(Polarization::H);
  const auto v = s.component(Polarization::V);
  std::vector<cplx> nh(h.size()), nv(v.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    nh[i] = c * h[i] - sn * v[i];
    nv[i] = sn * h[i] + c * v[i];
  }
  return LatticeState::from_amplitudes(s.config(), std::move(nh), std::move(nv));
}

LatticeState apply_spin_operator(const LatticeState& s, const Eigen::Matrix2cd& op) {
  const auto h = s.component(Polarization::H);
  const auto v = s.component(Polarization::V);
  std::vector<cplx> nh(h.size()), nv(v.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    nh[i] = op(0, 0) * h[i] + op(0, 1) * v[i];
    nv[i] = op(1, 0) * h[i] + op(1, 1) * v[i];
  }
  return LatticeState::from_amplitudes(s.config(), std::move(nh), std::move(nv));
}

DirectTranslation apply_kernels_direct(const LatticeState& s, const TranslationKernel& kernel_h,
                                       const TranslationKernel& kernel_v) {
  const double norm_in = s.norm_squared();
  auto out = LatticeState::from_amplitudes(s.config(), convolve_open(s.component(Polarization::H), kernel_h),
                                           convolve_open(s.component(Polarization::V), kernel_v));
  const double leak = std::max(0.0, norm_in - out.norm_squared());
  return DirectTranslation{std::move(out), leak, leak > kLeakFlag, s.boundary_mass() > kBoundaryWarn};
}

DirectTranslation apply_translation_direct(const LatticeState& s, const ModulationParams& p, double tol) {
  return apply_kernels_direct(s, translation_kernel(p.gamma, p.phi_h, tol), translation_kernel(p.gamma, p.phi_v, tol));
}

struct SpectralPropagator::Impl {
  int n = 0;
  fftw_complex* buffer = nullptr;
  fftw_plan to_q = nullptr;    // sum_m a_m exp(+i q_j m)
  fftw_plan from_q = nullptr;  // inverse, up to 1/N
  struct Multiplier {
    std::optional<std::pair<double, double>> key;  // (gamma, phi)
    std::vector<cplx> values;
  };
  std::array<Multiplier, 2> multipliers;  // one per polarization

  explicit Impl(int size) : n(size) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(static_cast<std::size_t>(n));
    to_q = fftw_plan_dft_1d(n, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    from_q = fftw_plan_dft_1d(n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(to_q);
    fftw_destroy_plan(from_q);
    fftw_free(buffer);
  }

  cplx* data() { return reinterpret_cast<cplx*>(buffer); }

  // Lattice index i (site i - M) sits at buffer slot (site mod N).
  std::size_t slot(std::size_t i) const {
    const int m = static_cast<int>(i) - (n - 1) / 2;
    return static_cast<std::size_t>(((m % n) + n) % n);
  }

  void load(std::span<const cplx> a) {
    for (std::size_t i = 0; i < a.size(); ++i) data()[slot(i)] = a[i];
  }

  const std::vector<cplx>& multiplier_for(Polarization pol, double gamma, double phi) {
    auto& cache = multipliers[static_cast<std::size_t>(pol)];
    if (cache.key && cache.key->first == gamma && cache.key->second == phi) return cache.values;
    auto& multiplier = cache.values;
    multiplier.resize(static_cast<std::size_t>(n));
    const int half = (n - 1) / 2;
    for (int j = 0; j < n; ++j) {
      const int js = j <= half ? j : j - n;
      const double q = 2.0 * kPi * js / n;
      multiplier[static_cast<std::size_t>(j)] = std::polar(1.0, gamma * std::cos(q + phi));
    }
    cache.key = std::make_pair(gamma, phi);
    return multiplier;
  }

  std::vector<cplx> translate(std::span<const cplx> a, Polarization pol, double gamma, double phi) {
    load(a);
    fftw_execute(to_q);
    const auto& mult = multiplier_for(pol, gamma, phi);
    for (int j = 0; j < n; ++j) data()[j] *= mult[static_cast<std::size_t>(j)];
    fftw_execute(from_q);
    std::vector<cplx> out(a.size());
    const double inv_n = 1.0 / n;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data()[slot(i)] * inv_n;
    return out;
  }
};

SpectralPropagator::SpectralPropagator(int size) {
  if (size < 1) throw ConfigError("spectral propagator size must be positive");
  impl_ = std::make_unique<Impl>(size);
}
SpectralPropagator::~SpectralPropagator() = default;
SpectralPropagator::SpectralPropagator(SpectralPropagator&&) noexcept = default;
SpectralPropagator& SpectralPropagator::operator=(SpectralPropagator&&) noexcept = default;

LatticeState SpectralPropagator::translate(const LatticeState& s, const ModulationParams& p) {
  if (s.size() != impl_->n) throw ConfigError("lattice size does not match the spectral propagator");
  auto h = impl_->translate(s.component(Polarization::H), Polarization::H, p.gamma, p.phi_h);
  auto v = impl_->translate(s.component(Polarization::V), Polarization::V, p.gamma, p.phi_v);
  return LatticeState::from_amplitudes(s.config(), std::move(h), std::move(v));
}

std::vector<cplx> SpectralPropagator::to_quasimomentum(const LatticeState& s, Polarization pol) {
  if (s.size() != impl_->n) throw ConfigError("lattice size does not match the spectral propagator");
  impl_->load(s.component(pol));
  fftw_execute(impl_->to_q);
  return std::vector<cplx>(impl_->data(), impl_->data() + impl_->n);
}

LatticeState apply_translation_spectral(const LatticeState& s, const ModulationParams& p) {
  SpectralPropagator prop(s.size());
  return prop.translate(s, p);
}

LatticeState step(const LatticeState& s, const ModulationParams& p, Engine engine) {
  const auto rotated = apply_rotation(s, p.theta);
  if (engine == Engine::direct) return apply_translation_direct(rotated, p).state;
  return apply_translation_spectral(rotated, p);
}

namespace {

Snapshot observe(const LatticeState& s, const LatticeState& initial, std::size_t n, const RecordSet& record) {
  Snapshot snap;
  snap.step = n;
  snap.boundary_mass = s.boundary_mass();
  if (record.distribution || record.diffusion || record.centroid) {
    auto p = probability_distribution(s);
    if (record.diffusion) snap.diffusion_distance = diffusion_distance(p, s.half_width());
    if (record.centroid) {
      double c = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) c += s.config().site(i) * p[i];
      snap.centroid = c;
    }
    if (record.distribution) snap.distribution = std::move(p);
  }
  if (record.return_probability) snap.return_probability = return_probability(s, initial);
  if (record.norm) snap.norm = s.norm_squared();
  return snap;
}

}  // namespace

Trajectory evolve(const LatticeState& initial, const Schedule& schedule, const EvolveOptions& options) {
  Trajectory traj{{}, initial, 0.0};
  traj.snapshots.reserve(schedule.size() + 1);
  traj.snapshots.push_back(observe(initial, initial, 0, options.record));
  if (traj.snapshots.back().boundary_mass > options.boundary_limit) {
    throw BoundaryError(0, traj.snapshots.back().boundary_mass);
  }

  std::optional<SpectralPropagator> prop;
  if (options.engine == Engine::spectral && !schedule.empty()) prop.emplace(initial.size());

  LatticeState current = initial;
  for (std::size_t n = 0; n < schedule.size(); ++n) {
    const auto& p = schedule[n];
    auto rotated = apply_rotation(current, p.theta);
    if (options.engine == Engine::direct) {
      auto r = apply_translation_direct(rotated, p, options.kernel_tol);
      traj.total_norm_leak += r.norm_leak;
      current = std::move(r.state);
    } else {
      current = prop->translate(rotated, p);
    }
    traj.snapshots.push_back(observe(current, initial, n + 1, options.record));
    if (traj.snapshots.back().boundary_mass > options.boundary_limit) {
      throw BoundaryError(n + 1, traj.snapshots.back().boundary_mass);
    }
  }
  traj.final_state = std::move(current);
  return traj;
}

Trajectory evolve(const LatticeState& initial, const ModulationParams& p, std::size_t steps,
                  const EvolveOptions& options) {
  return evolve(initial, Schedule(steps, p), options);
}

}  // namespace synthwalk
