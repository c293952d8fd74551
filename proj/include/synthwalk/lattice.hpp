#pragma once

// Walker state on a truncated synthetic frequency lattice.
//
// Sites m run over [-M, M] (N = 2M + 1 sites), each carrying an H and a V
// polarization amplitude. Units: free spectral range = 1, reference frequency
// = 0, hbar = 1. Quasimomentum q is dimensionless in [-pi, pi) and pairs with
// the site index through exp(+i q m).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace synthwalk {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector2cd;

enum class Polarization { H = 0, V = 1 };

enum class Boundary { periodic, truncated };

// Probability closer than this many sites to either edge counts as boundary mass.
inline constexpr int kBoundaryMonitorWidth = 5;

struct LatticeConfig {
  int half_width = 1;
  Boundary boundary = Boundary::periodic;

  int size() const noexcept { return 2 * half_width + 1; }
  bool contains(int m) const noexcept { return m >= -half_width && m <= half_width; }
  std::size_t index(int m) const noexcept { return static_cast<std::size_t>(m + half_width); }
  int site(std::size_t index) const noexcept { return static_cast<int>(index) - half_width; }

  // Throws ConfigError if half_width < 1.
  void validate() const;

  friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;
};

// Reduces an angle into [-pi, pi).
double wrap_angle(double angle);

struct WavepacketSpec {
  double delta = 1.0;  // envelope width in sites
  double q = 0.0;      // carrier quasimomentum
  Spinor spin = Spinor(1.0, 0.0);
};

class LatticeState {
 public:
  // Wraps amplitudes as given; no normalization. Sizes must equal cfg.size().
  static LatticeState from_amplitudes(const LatticeConfig& cfg, std::vector<cplx> h, std::vector<cplx> v);
  static LatticeState zeros(const LatticeConfig& cfg);

  const LatticeConfig& config() const noexcept { return cfg_; }
  int half_width() const noexcept { return cfg_.half_width; }
  int size() const noexcept { return cfg_.size(); }

  std::span<const cplx> component(Polarization p) const noexcept {
    return p == Polarization::H ? std::span<const cplx>(h_) : std::span<const cplx>(v_);
  }
  // Amplitude at site m (must be on the lattice).
  cplx amp(int m, Polarization p) const noexcept { return component(p)[cfg_.index(m)]; }

  double norm_squared() const noexcept;
  // Probability within kBoundaryMonitorWidth sites of either edge.
  double boundary_mass() const noexcept;

  LatticeState scaled(cplx factor) const;

 private:
  LatticeState(const LatticeConfig& cfg, std::vector<cplx> h, std::vector<cplx> v)
      : cfg_(cfg), h_(std::move(h)), v_(std::move(v)) {}

  LatticeConfig cfg_;
  std::vector<cplx> h_;
  std::vector<cplx> v_;
};

// |m0, p>, amplitude 1.
LatticeState make_single_site(int m0, Polarization p, const LatticeConfig& cfg);

// Normalized Gaussian packet exp(-m^2/delta^2) exp(-i q m) spin[p]. The envelope
// must have decayed below 1e-8 at the lattice edge.
LatticeState make_gaussian(const WavepacketSpec& spec, const LatticeConfig& cfg);

// P(m) = sum_p |amp(m, p)|^2, indexed by m + M.
std::vector<double> probability_distribution(const LatticeState& s);

// sqrt(sum_m m^2 P(m)).
double diffusion_distance(const LatticeState& s);
double diffusion_distance(std::span<const double> probabilities, int half_width);

double centroid(const LatticeState& s);

// |<s0|s>|^2. Throws ConfigError when the lattices differ.
double return_probability(const LatticeState& s, const LatticeState& s0);

// Raw Fourier component sum_m amp(m, p) exp(+i q m) for both polarizations.
Spinor raw_projection_at_q(const LatticeState& s, double q);

// Normalized raw_projection_at_q. Throws NumericalError if the state has no
// amplitude at q.
Spinor spin_projection_at_q(const LatticeState& s, double q);

}  // namespace synthwalk
