#include "synthwalk/baselines.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "synthwalk/errors.hpp"

namespace synthwalk {

ClassicalDistribution classical_walk_distribution(int steps) {
  if (steps < 0) throw ConfigError("classical walk needs steps >= 0");
  // Row n of Pascal's triangle scaled by 2^-n, built by repeated halving.
  std::vector<double> row{1.0};
  row.reserve(static_cast<std::size_t>(steps) + 1);
  for (int n = 1; n <= steps; ++n) {
    row.push_back(0.0);
    for (std::size_t k = row.size() - 1; k > 0; --k) row[k] = 0.5 * (row[k] + row[k - 1]);
    row[0] *= 0.5;
  }
  ClassicalDistribution d;
  d.steps = steps;
  d.probabilities.assign(2 * static_cast<std::size_t>(steps) + 1, 0.0);
  for (int k = 0; k <= steps; ++k) {
    d.probabilities[static_cast<std::size_t>(2 * k)] = row[static_cast<std::size_t>(k)];  // m = 2k - n
  }
  return d;
}

double diffusion_distance(const ClassicalDistribution& d) {
  return diffusion_distance(d.probabilities, d.steps);
}

LatticeState dtqw_step(const LatticeState& s) {
  const auto h = s.component(Polarization::H);
  const auto v = s.component(Polarization::V);
  const std::size_t n = h.size();
  const double r = std::numbers::sqrt2 / 2.0;
  std::vector<cplx> nh(n), nv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx ch = r * (h[i] + v[i]);
    const cplx cv = r * (h[i] - v[i]);
    if (i + 1 < n) nh[i + 1] = ch;
    if (i > 0) nv[i - 1] = cv;
  }
  const double lost = std::norm(r * (h[n - 1] + v[n - 1])) + std::norm(r * (h[0] - v[0]));
  if (lost > 1e-12) throw BoundaryError(1, lost);
  return LatticeState::from_amplitudes(s.config(), std::move(nh), std::move(nv));
}

std::vector<double> dtqw_diffusion(int steps) {
  if (steps < 0) throw ConfigError("dtqw_diffusion needs steps >= 0");
  const LatticeConfig cfg{steps + kBoundaryMonitorWidth + 1, Boundary::truncated};
  auto s = make_single_site(0, Polarization::H, cfg);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int n = 0; n < steps; ++n) {
    s = dtqw_step(s);
    out.push_back(diffusion_distance(s));
  }
  return out;
}

}  // namespace synthwalk
