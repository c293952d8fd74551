#pragma once

// Single-qubit gates in quasimomentum space. A qubit is the polarization
// spinor of the Fourier component at a working point q*; one roundtrip with
// suitably chosen (theta, gamma, phi_h, phi_v) acts on it as the 2x2 matrix
// uk_matrix(params, q*). Gates are specified by theta and the two products
// a = gamma cos(q* + phi_h), b = gamma cos(q* + phi_v).

#include <array>
#include <numbers>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "synthwalk/lattice.hpp"
#include "synthwalk/step.hpp"

namespace synthwalk {

enum class GateName { X, Y, Z, H, Rz };

inline constexpr double kDefaultWorkingPoint = 2.0 * std::numbers::pi / 3.0;
inline constexpr double kDefaultGateGamma = std::numbers::pi;

struct GateSpec {
  GateName name = GateName::X;
  double theta = 0.0;
  double a = 0.0;       // target gamma cos(q* + phi_h)
  double b = 0.0;       // target gamma cos(q* + phi_v)
  double rz_phi = 0.0;  // only meaningful for Rz
  Eigen::Matrix2cd target;
};

std::string_view gate_label(GateName name);

// Gate table. The Hadamard target is the unitary (1/sqrt 2)[[1, 1], [1, -1]].
// Rz requires phi. Throws ConfigError otherwise.
GateSpec table_gate(GateName name, std::optional<double> phi = std::nullopt);
GateSpec table_gate(std::string_view name, std::optional<double> phi = std::nullopt);

struct SolvedParams {
  ModulationParams params;
  double q_star = kDefaultWorkingPoint;
};

enum class ArccosBranch { plus, minus };

// phi_h = -q* +- arccos(a / gamma), phi_v likewise with b. Default gamma is
// max(pi, |a|, |b|). Throws InfeasibleGate if |a| or |b| exceeds gamma.
SolvedParams solve_modulation(const GateSpec& spec, double q_star, std::optional<double> gamma = std::nullopt,
                              ArccosBranch branch = ArccosBranch::plus);

Eigen::Matrix2cd gate_matrix_analytic(const SolvedParams& sp);

struct QubitState {
  Spinor amplitudes = Spinor(1.0, 0.0);

  // cos(phi1/2)|H> + sin(phi1/2) exp(i phi2)|V>
  static QubitState from_angles(double phi1, double phi2);
};

// ||U_t - U_o||_HS^2 = Tr[(U_t - U_o)^dagger (U_t - U_o)]; zero at perfect agreement.
double hs_distance(const Eigen::MatrixXcd& u_o, const Eigen::MatrixXcd& u_t);
// |Tr(U_t^dagger U_o)|^2 / d^2, insensitive to global phase.
double gate_fidelity(const Eigen::MatrixXcd& u_o, const Eigen::MatrixXcd& u_t);
// |<psi_o|psi_t>|^2 for unit vectors; throws ConfigError otherwise.
double state_fidelity(const Eigen::VectorXcd& psi_o, const Eigen::VectorXcd& psi_t);

// Lattice half-width used for a packet of width delta: ceil(5 delta).
int gate_half_width(double delta);

// One roundtrip on a Gaussian packet (width delta, carrier q*, spinor input);
// returns the normalized spinor read out at q*.
Spinor execute_gate_lattice(const SolvedParams& sp, double delta, const Spinor& input,
                            Engine engine = Engine::spectral);

struct GateReport {
  Eigen::Matrix2cd reconstructed;
  Eigen::Matrix2cd target;
  double hs_distance = 0.0;
  double gate_fidelity = 0.0;
  double avg_gate_fidelity = 0.0;  // (d F + 1) / (d + 1)
  std::array<double, 2> column_fidelities{};
  // sum over input columns of ||psi_out - (target x 1) psi_in||^2: the HS
  // distance averaged over the packet's quasimomentum spread.
  double packet_hs_distance = 0.0;
};

// Columns are the q*-projections of the outputs for inputs (1,0) and (0,1),
// each divided by the magnitude of its input projection.
GateReport reconstruct_matrix(const SolvedParams& sp, const Eigen::Matrix2cd& target, double delta,
                              Engine engine = Engine::spectral);

// [H, Rz(phi1), H, Rz(phi2 + pi/2)] in application order, each solved at q*.
// Rz angles are wrapped into [-pi, pi) first.
Schedule prepare_state_sequence(double phi1, double phi2, double q_star = kDefaultWorkingPoint,
                                std::optional<double> gamma = std::nullopt);

// Product of uk_matrix(entry, q*) over a schedule, last entry leftmost.
Eigen::Matrix2cd schedule_matrix(const Schedule& schedule, double q_star);

struct PreparationResult {
  QubitState output;
  QubitState target;
  double fidelity = 0.0;
};

PreparationResult run_preparation(double phi1, double phi2, double delta, double q_star = kDefaultWorkingPoint,
                                  Engine engine = Engine::spectral);

}  // namespace synthwalk
