#pragma once

// Reference walks for the diffusion comparison: the unbiased classical random
// walk and the conventional Hadamard-coined discrete-time quantum walk.

#include <cstddef>
#include <vector>

#include "synthwalk/lattice.hpp"

namespace synthwalk {

struct ClassicalDistribution {
  int steps = 0;
  std::vector<double> probabilities;  // index m + steps, m in [-steps, steps]

  double at(int m) const noexcept {
    return (m < -steps || m > steps) ? 0.0 : probabilities[static_cast<std::size_t>(m + steps)];
  }
};

// P(m) = C(n, (n + m) / 2) / 2^n for n + m even.
ClassicalDistribution classical_walk_distribution(int steps);

double diffusion_distance(const ClassicalDistribution& d);

// Hadamard coin, then |m, H> -> |m + 1, H> and |m, V> -> |m - 1, V>. Throws
// BoundaryError if more than 1e-12 probability would leave the lattice.
LatticeState dtqw_step(const LatticeState& s);

// M(1), ..., M(n) for the Hadamard walk started at |0, H>.
std::vector<double> dtqw_diffusion(int steps);

}  // namespace synthwalk
