#include "synthwalk/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "synthwalk/errors.hpp"

namespace synthwalk {

void LatticeConfig::validate() const {
  if (half_width < 1) {
    throw ConfigError("lattice half_width must be >= 1, got " + std::to_string(half_width));
  }
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle + std::numbers::pi, two_pi);
  if (r < 0.0) r += two_pi;
  r -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift back.
  if (r >= std::numbers::pi) r -= two_pi;
  return r;
}

LatticeState LatticeState::from_amplitudes(const LatticeConfig& cfg, std::vector<cplx> h, std::vector<cplx> v) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.size());
  if (h.size() != n || v.size() != n) {
    throw ConfigError("amplitude vectors must have " + std::to_string(n) + " entries");
  }
  return LatticeState(cfg, std::move(h), std::move(v));
}

LatticeState LatticeState::zeros(const LatticeConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.size());
  return LatticeState(cfg, std::vector<cplx>(n), std::vector<cplx>(n));
}

double LatticeState::norm_squared() const noexcept {
  double total = 0.0;
  for (std::size_t i = 0; i < h_.size(); ++i) total += std::norm(h_[i]) + std::norm(v_[i]);
  return total;
}

double LatticeState::boundary_mass() const noexcept {
  const std::size_t n = h_.size();
  const std::size_t w = std::min<std::size_t>(kBoundaryMonitorWidth, (n + 1) / 2);
  double total = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    total += std::norm(h_[i]) + std::norm(v_[i]);
    const std::size_t j = n - 1 - i;
    if (j != i) total += std::norm(h_[j]) + std::norm(v_[j]);
  }
  return total;
}

LatticeState LatticeState::scaled(cplx factor) const {
  LatticeState out = *this;
  for (auto& a : out.h_) a *= factor;
  for (auto& a : out.v_) a *= factor;
  return out;
}

LatticeState make_single_site(int m0, Polarization p, const LatticeConfig& cfg) {
  cfg.validate();
  if (!cfg.contains(m0)) {
    throw ConfigError("site " + std::to_string(m0) + " outside lattice [-" + std::to_string(cfg.half_width) + ", " +
                      std::to_string(cfg.half_width) + "]");
  }
  const auto n = static_cast<std::size_t>(cfg.size());
  std::vector<cplx> h(n), v(n);
  (p == Polarization::H ? h : v)[cfg.index(m0)] = 1.0;
  return LatticeState::from_amplitudes(cfg, std::move(h), std::move(v));
}

LatticeState make_gaussian(const WavepacketSpec& spec, const LatticeConfig& cfg) {
  cfg.validate();
  if (!(spec.delta > 0.0) || !std::isfinite(spec.delta)) {
    throw ConfigError("wave packet width must be positive");
  }
  const double spin_norm = spec.spin.norm();
  if (!(std::abs(spin_norm - 1.0) < 1e-9)) {
    throw ConfigError("wave packet spinor must have unit norm");
  }
  const double edge = static_cast<double>(cfg.half_width) / spec.delta;
  if (!(std::exp(-edge * edge) < 1e-8)) {
    throw ConfigError("wave packet width " + std::to_string(spec.delta) + " too large for half_width " +
                      std::to_string(cfg.half_width));
  }

  const double q = wrap_angle(spec.q);
  const auto n = static_cast<std::size_t>(cfg.size());
  std::vector<cplx> h(n), v(n);
  double total = 0.0;
  for (int m = -cfg.half_width; m <= cfg.half_width; ++m) {
    const double x = static_cast<double>(m) / spec.delta;
    const double envelope = std::exp(-x * x);
    const cplx carrier = std::polar(envelope, -q * m);
    h[cfg.index(m)] = carrier * spec.spin(0);
    v[cfg.index(m)] = carrier * spec.spin(1);
    total += envelope * envelope;
  }
  const double scale = 1.0 / (std::sqrt(total) * spin_norm);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] *= scale;
    v[i] *= scale;
  }
  return LatticeState::from_amplitudes(cfg, std::move(h), std::move(v));
}

std::vector<double> probability_distribution(const LatticeState& s) {
  const auto h = s.component(Polarization::H);
  const auto v = s.component(Polarization::V);
  std::vector<double> p(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) p[i] = std::norm(h[i]) + std::norm(v[i]);
  return p;
}

double diffusion_distance(std::span<const double> probabilities, int half_width) {
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double m = static_cast<double>(static_cast<int>(i) - half_width);
    total += m * m * probabilities[i];
  }
  return std::sqrt(total);
}

double diffusion_distance(const LatticeState& s) {
  return diffusion_distance(probability_distribution(s), s.half_width());
}

double centroid(const LatticeState& s) {
  const auto p = probability_distribution(s);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += s.config().site(i) * p[i];
  return total;
}

double return_probability(const LatticeState& s, const LatticeState& s0) {
  if (!(s.config() == s0.config())) throw ConfigError("return_probability: lattice configurations differ");
  cplx overlap = 0.0;
  for (auto p : {Polarization::H, Polarization::V}) {
    const auto a = s.component(p);
    const auto b = s0.component(p);
    for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(b[i]) * a[i];
  }
  return std::norm(overlap);
}

Spinor raw_projection_at_q(const LatticeState& s, double q) {
  Spinor out = Spinor::Zero();
  const auto h = s.component(Polarization::H);
  const auto v = s.component(Polarization::V);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const cplx phase = std::polar(1.0, q * s.config().site(i));
    out(0) += h[i] * phase;
    out(1) += v[i] * phase;
  }
  return out;
}

Spinor spin_projection_at_q(const LatticeState& s, double q) {
  const Spinor raw = raw_projection_at_q(s, q);
  const double n = raw.norm();
  if (!(n > 1e-300)) throw NumericalError("no amplitude at quasimomentum " + std::to_string(q));
  return raw / n;
}

}  // namespace synthwalk
