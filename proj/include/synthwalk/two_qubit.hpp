#pragma once

// Two-qubit register: a path qubit (which of two synthetic lattices carries
// the light) and the polarization qubit at the working point q*. Basis order
// |0H>, |0V>, |1H>, |1V>.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "synthwalk/gates.hpp"
#include "synthwalk/lattice.hpp"
#include "synthwalk/step.hpp"

namespace synthwalk {

using TwoQubitOp = Eigen::Matrix4cd;

enum class TwoQubitGate { identity, cnot, path_x };

std::string_view two_qubit_gate_label(TwoQubitGate g);
// Accepts "identity"/"id", "cnot", "path_x"/"x". Throws ConfigError otherwise.
TwoQubitGate parse_two_qubit_gate(std::string_view tag);

TwoQubitOp cnot_matrix();
// X on the path qubit, identity on polarization.
TwoQubitOp path_x();
TwoQubitOp two_qubit_gate_matrix(TwoQubitGate g);

// Product of a sequence applied front to back (first entry rightmost).
TwoQubitOp sequence_matrix(std::span<const TwoQubitGate> sequence);

// path_x, cnot, path_x.
std::vector<TwoQubitGate> ms_sequence();
TwoQubitOp sequence_ms();

struct TwoQubitLatticeState {
  LatticeState path0;
  LatticeState path1;
};

struct TwoQubitOptions {
  double delta = 200.0;
  double q_star = kDefaultWorkingPoint;
  Engine engine = Engine::spectral;
  std::optional<double> gamma;  // gate modulation strength, default from solve_modulation
};

// Runs the sequence on the lattice realization: cnot drives path 1 with one
// X-gate roundtrip and path 0 with one identity roundtrip; path_x swaps the
// lattices. Returns the q*-readout of both paths divided by the input packet's
// projection magnitude.
Eigen::Vector4cd execute_two_qubit_lattice(std::span<const TwoQubitGate> sequence, int basis_index,
                                           const TwoQubitOptions& options = {});

struct TwoQubitReport {
  TwoQubitOp reconstructed;
  TwoQubitOp expected;
  double max_entry_error = 0.0;
  double hs_distance = 0.0;
  double gate_fidelity = 0.0;
};

TwoQubitReport reconstruct_4x4(std::span<const TwoQubitGate> sequence, const TwoQubitOptions& options = {});

}  // namespace synthwalk
