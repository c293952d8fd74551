#include "synthwalk/two_qubit.hpp"

#include <string>
#include <utility>

#include "synthwalk/errors.hpp"

namespace synthwalk {
namespace {

TwoQubitOp permutation(std::initializer_list<int> image) {
  TwoQubitOp m = TwoQubitOp::Zero();
  int col = 0;
  for (int row : image) m(row, col++) = 1.0;
  return m;
}

LatticeState roundtrip(const LatticeState& s, const ModulationParams& p, Engine engine) {
  EvolveOptions opts;
  opts.engine = engine;
  opts.record = RecordSet{false, false, false, false, false};
  return evolve(s, Schedule{p}, opts).final_state;
}

}  // namespace

std::string_view two_qubit_gate_label(TwoQubitGate g) {
  switch (g) {
    case TwoQubitGate::identity: return "identity";
    case TwoQubitGate::cnot: return "cnot";
    case TwoQubitGate::path_x: return "path_x";
  }
  return "?";
}

TwoQubitGate parse_two_qubit_gate(std::string_view tag) {
  if (tag == "identity" || tag == "id") return TwoQubitGate::identity;
  if (tag == "cnot" || tag == "CNOT") return TwoQubitGate::cnot;
  if (tag == "path_x" || tag == "x" || tag == "X") return TwoQubitGate::path_x;
  throw ConfigError("unknown two-qubit operation '" + std::string(tag) + "'");
}

// Column j holds the image of basis state j.
TwoQubitOp cnot_matrix() { return permutation({0, 1, 3, 2}); }
TwoQubitOp path_x() { return permutation({2, 3, 0, 1}); }

TwoQubitOp two_qubit_gate_matrix(TwoQubitGate g) {
  switch (g) {
    case TwoQubitGate::cnot: return cnot_matrix();
    case TwoQubitGate::path_x: return path_x();
    case TwoQubitGate::identity: break;
  }
  return TwoQubitOp::Identity();
}

TwoQubitOp sequence_matrix(std::span<const TwoQubitGate> sequence) {
  TwoQubitOp m = TwoQubitOp::Identity();
  for (auto g : sequence) m = two_qubit_gate_matrix(g) * m;
  return m;
}

std::vector<TwoQubitGate> ms_sequence() { return {TwoQubitGate::path_x, TwoQubitGate::cnot, TwoQubitGate::path_x}; }

TwoQubitOp sequence_ms() {
  const auto seq = ms_sequence();
  return sequence_matrix(seq);
}

Eigen::Vector4cd execute_two_qubit_lattice(std::span<const TwoQubitGate> sequence, int basis_index,
                                           const TwoQubitOptions& options) {
  if (basis_index < 0 || basis_index > 3) throw ConfigError("two-qubit basis index must be in [0, 3]");
  const LatticeConfig cfg{gate_half_width(options.delta),
                          options.engine == Engine::spectral ? Boundary::periodic : Boundary::truncated};
  const Spinor pol = basis_index % 2 == 0 ? Spinor(1.0, 0.0) : Spinor(0.0, 1.0);
  const auto packet = make_gaussian(WavepacketSpec{options.delta, options.q_star, pol}, cfg);
  const double reference = raw_projection_at_q(packet, options.q_star).norm();

  TwoQubitLatticeState state{LatticeState::zeros(cfg), LatticeState::zeros(cfg)};
  (basis_index < 2 ? state.path0 : state.path1) = packet;

  const auto x_params = solve_modulation(table_gate(GateName::X), options.q_star, options.gamma).params;
  const ModulationParams idle{};
  for (auto g : sequence) {
    switch (g) {
      case TwoQubitGate::identity:
        break;
      case TwoQubitGate::path_x:
        std::swap(state.path0, state.path1);
        break;
      case TwoQubitGate::cnot:
        state.path0 = roundtrip(state.path0, idle, options.engine);
        state.path1 = roundtrip(state.path1, x_params, options.engine);
        break;
    }
  }

  const Spinor p0 = raw_projection_at_q(state.path0, options.q_star) / reference;
  const Spinor p1 = raw_projection_at_q(state.path1, options.q_star) / reference;
  return Eigen::Vector4cd(p0(0), p0(1), p1(0), p1(1));
}

TwoQubitReport reconstruct_4x4(std::span<const TwoQubitGate> sequence, const TwoQubitOptions& options) {
  TwoQubitReport rep;
  rep.expected = sequence_matrix(sequence);
  for (int c = 0; c < 4; ++c) rep.reconstructed.col(c) = execute_two_qubit_lattice(sequence, c, options);
  rep.max_entry_error = (rep.reconstructed - rep.expected).cwiseAbs().maxCoeff();
  rep.hs_distance = hs_distance(rep.reconstructed, rep.expected);
  rep.gate_fidelity = gate_fidelity(rep.reconstructed, rep.expected);
  return rep;
}

}  // namespace synthwalk
