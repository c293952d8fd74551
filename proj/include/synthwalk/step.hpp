#pragma once

// One roundtrip of the walk, U = T R(theta): a polarization rotation followed
// by the polarization-dependent Bessel-weighted translation. Two engines apply
// T: direct convolution with the truncated kernel (open boundary) and exact
// phase multiplication in quasimomentum space (periodic boundary).

#include <cstddef>
#include <memory>
#include <vector>

#include "synthwalk/lattice.hpp"

namespace synthwalk {

struct ModulationParams {
  double gamma = 0.0;  // modulation strength
  double theta = 0.0;  // polarization rotation angle
  double phi_h = 0.0;  // modulation phase on H
  double phi_v = 0.0;  // modulation phase on V

  // Validated constructor: finite values, gamma >= 0, phases wrapped into
  // [-pi, pi), theta wrapped into (-2pi, 2pi].
  static ModulationParams make(double gamma, double theta, double phi_h, double phi_v);

  friend bool operator==(const ModulationParams&, const ModulationParams&) = default;
};

// One entry per roundtrip, applied front to back.
using Schedule = std::vector<ModulationParams>;

enum class Engine { direct, spectral };

inline constexpr double kDefaultKernelTolerance = 1e-20;

// Hop amplitudes c_l = i^l J_l(gamma) exp(i l phi), l in [-truncation, truncation].
struct TranslationKernel {
  double gamma = 0.0;
  double phi = 0.0;
  int truncation = 0;
  double tail_bound = 0.0;    // 1 - sum_l |c_l|^2 over the kept range
  std::vector<cplx> coeffs;   // coeffs[l + truncation]

  cplx coeff(int l) const noexcept {
    return (l < -truncation || l > truncation) ? cplx{} : coeffs[static_cast<std::size_t>(l + truncation)];
  }
  double weight() const noexcept;
};

// Smallest truncation whose discarded weight is below tol; tol in (0, 1e-6].
TranslationKernel translation_kernel(double gamma, double phi, double tol = kDefaultKernelTolerance);

LatticeState apply_rotation(const LatticeState& s, double theta);

// Applies the same 2x2 matrix to the (H, V) pair at every site.
LatticeState apply_spin_operator(const LatticeState& s, const Eigen::Matrix2cd& op);

struct DirectTranslation {
  LatticeState state;
  double norm_leak = 0.0;         // probability pushed past the lattice edge
  bool leak_flagged = false;      // norm_leak > 1e-6
  bool boundary_warning = false;  // input boundary mass above 1e-9
};

// Convolves H with kernel_h and V with kernel_v; amplitudes landing outside
// [-M, M] are dropped.
DirectTranslation apply_kernels_direct(const LatticeState& s, const TranslationKernel& kernel_h,
                                       const TranslationKernel& kernel_v);

DirectTranslation apply_translation_direct(const LatticeState& s, const ModulationParams& p,
                                           double tol = kDefaultKernelTolerance);

// Multiplies each polarization by exp(i gamma cos(q_j + phi_p)) on the grid
// q_j = 2 pi j / N. Exactly unitary; circular boundary.
LatticeState apply_translation_spectral(const LatticeState& s, const ModulationParams& p);

// Reusable FFT plans for one lattice size. Not thread-safe per instance;
// distinct instances may run concurrently.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(int size);
  ~SpectralPropagator();
  SpectralPropagator(SpectralPropagator&&) noexcept;
  SpectralPropagator& operator=(SpectralPropagator&&) noexcept;
  SpectralPropagator(const SpectralPropagator&) = delete;
  SpectralPropagator& operator=(const SpectralPropagator&) = delete;

  LatticeState translate(const LatticeState& s, const ModulationParams& p);

  // Fourier components psi(q_j) = sum_m amp(m, pol) exp(i q_j m), j = 0..N-1.
  std::vector<cplx> to_quasimomentum(const LatticeState& s, Polarization pol);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LatticeState step(const LatticeState& s, const ModulationParams& p, Engine engine = Engine::spectral);

struct RecordSet {
  bool distribution = false;
  bool diffusion = true;
  bool centroid = true;
  bool return_probability = false;  // overlap with the initial state
  bool norm = true;
};

struct Snapshot {
  std::size_t step = 0;
  std::vector<double> distribution;  // empty unless recorded
  double diffusion_distance = 0.0;
  double centroid = 0.0;
  double return_probability = 0.0;
  double norm = 0.0;
  double boundary_mass = 0.0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;  // snapshots[n].step == n
  LatticeState final_state;
  double total_norm_leak = 0.0;     // direct engine only
};

struct EvolveOptions {
  Engine engine = Engine::spectral;
  RecordSet record{};
  double boundary_limit = 1e-6;
  double kernel_tol = kDefaultKernelTolerance;
};

// Runs the schedule; throws BoundaryError (with the step index) as soon as
// the boundary mass exceeds options.boundary_limit.
Trajectory evolve(const LatticeState& initial, const Schedule& schedule, const EvolveOptions& options = {});
Trajectory evolve(const LatticeState& initial, const ModulationParams& p, std::size_t steps,
                  const EvolveOptions& options = {});

}  // namespace synthwalk
