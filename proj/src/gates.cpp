#include "synthwalk/gates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synthwalk/band.hpp"
#include "synthwalk/errors.hpp"

namespace synthwalk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConstraintTol = 1e-12;

Eigen::Matrix2cd mat(cplx a, cplx b, cplx c, cplx d) {
  Eigen::Matrix2cd m;
  m << a, b, c, d;
  return m;
}

LatticeConfig gate_lattice(double delta, Engine engine) {
  return LatticeConfig{gate_half_width(delta), engine == Engine::spectral ? Boundary::periodic : Boundary::truncated};
}

LatticeState one_roundtrip(const LatticeState& s, const ModulationParams& p, Engine engine) {
  EvolveOptions opts;
  opts.engine = engine;
  opts.record = RecordSet{false, false, false, false, false};
  return evolve(s, Schedule{p}, opts).final_state;
}

}  // namespace

std::string_view gate_label(GateName name) {
  switch (name) {
    case GateName::X: return "X";
    case GateName::Y: return "Y";
    case GateName::Z: return "Z";
    case GateName::H: return "H";
    case GateName::Rz: return "Rz";
  }
  return "?";
}

GateSpec table_gate(GateName name, std::optional<double> phi) {
  const cplx i{0.0, 1.0};
  const double r = std::numbers::sqrt2 / 2.0;
  GateSpec g;
  g.name = name;
  switch (name) {
    case GateName::X:
      g.theta = kPi, g.a = kPi, g.b = 0.0;
      g.target = mat(0, 1, 1, 0);
      break;
    case GateName::Y:
      g.theta = kPi, g.a = kPi / 2, g.b = kPi / 2;
      g.target = mat(0, -i, i, 0);
      break;
    case GateName::Z:
      g.theta = 0.0, g.a = 0.0, g.b = kPi;
      g.target = mat(1, 0, 0, -1);
      break;
    case GateName::H:
      g.theta = -kPi / 2, g.a = 0.0, g.b = kPi;
      g.target = mat(r, r, r, -r);
      break;
    case GateName::Rz:
      if (!phi || !std::isfinite(*phi)) throw ConfigError("Rz gate requires a finite phase angle");
      g.theta = 0.0, g.a = 0.0, g.b = *phi, g.rz_phi = *phi;
      g.target = mat(1, 0, 0, std::polar(1.0, *phi));
      break;
  }
  return g;
}

GateSpec table_gate(std::string_view name, std::optional<double> phi) {
  for (auto g : {GateName::X, GateName::Y, GateName::Z, GateName::H, GateName::Rz}) {
    if (name == gate_label(g)) return table_gate(g, phi);
  }
  if (name == "RZ" || name == "rz") return table_gate(GateName::Rz, phi);
  throw ConfigError("unknown gate '" + std::string(name) + "'");
}

SolvedParams solve_modulation(const GateSpec& spec, double q_star, std::optional<double> gamma, ArccosBranch branch) {
  const double g = gamma.value_or(std::max({kPi, std::abs(spec.a), std::abs(spec.b)}));
  if (!std::isfinite(g) || !std::isfinite(q_star)) throw ConfigError("gate solve needs finite gamma and q*");
  if (g < 1e-9 || std::abs(spec.a) > g || std::abs(spec.b) > g) {
    throw InfeasibleGate("gate " + std::string(gate_label(spec.name)) + " infeasible: |a|, |b| must not exceed gamma = " +
                         std::to_string(g));
  }
  const double sign = branch == ArccosBranch::plus ? 1.0 : -1.0;
  const double phi_h = -q_star + sign * std::acos(std::clamp(spec.a / g, -1.0, 1.0));
  const double phi_v = -q_star + sign * std::acos(std::clamp(spec.b / g, -1.0, 1.0));
  SolvedParams sp{ModulationParams::make(g, spec.theta, phi_h, phi_v), q_star};

  const double got_a = sp.params.gamma * std::cos(q_star + sp.params.phi_h);
  const double got_b = sp.params.gamma * std::cos(q_star + sp.params.phi_v);
  if (std::abs(got_a - spec.a) > kConstraintTol * std::max(1.0, g) ||
      std::abs(got_b - spec.b) > kConstraintTol * std::max(1.0, g)) {
    throw NumericalError("gate constraint residual above tolerance");
  }
  return sp;
}

Eigen::Matrix2cd gate_matrix_analytic(const SolvedParams& sp) { return uk_matrix(sp.params, sp.q_star).m; }

QubitState QubitState::from_angles(double phi1, double phi2) {
  return QubitState{Spinor(std::cos(phi1 / 2.0), std::polar(std::sin(phi1 / 2.0), phi2))};
}

double hs_distance(const Eigen::MatrixXcd& u_o, const Eigen::MatrixXcd& u_t) {
  if (u_o.rows() != u_t.rows() || u_o.cols() != u_t.cols()) throw ConfigError("hs_distance: dimension mismatch");
  const Eigen::MatrixXcd d = u_t - u_o;
  return (d.adjoint() * d).trace().real();
}

double gate_fidelity(const Eigen::MatrixXcd& u_o, const Eigen::MatrixXcd& u_t) {
  if (u_o.rows() != u_t.rows() || u_o.cols() != u_t.cols() || u_o.rows() != u_o.cols()) {
    throw ConfigError("gate_fidelity: dimension mismatch");
  }
  const double d = static_cast<double>(u_o.rows());
  return std::norm((u_t.adjoint() * u_o).trace()) / (d * d);
}

double state_fidelity(const Eigen::VectorXcd& psi_o, const Eigen::VectorXcd& psi_t) {
  if (psi_o.size() != psi_t.size()) throw ConfigError("state_fidelity: dimension mismatch");
  if (std::abs(psi_o.norm() - 1.0) > 1e-9 || std::abs(psi_t.norm() - 1.0) > 1e-9) {
    throw ConfigError("state_fidelity: inputs must be unit vectors");
  }
  return std::min(1.0, std::norm(psi_o.dot(psi_t)));
}

int gate_half_width(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("packet width must be positive");
  return static_cast<int>(std::ceil(5.0 * delta));
}

Spinor execute_gate_lattice(const SolvedParams& sp, double delta, const Spinor& input, Engine engine) {
  const auto cfg = gate_lattice(delta, engine);
  const auto in = make_gaussian(WavepacketSpec{delta, sp.q_star, input.normalized()}, cfg);
  return spin_projection_at_q(one_roundtrip(in, sp.params, engine), sp.q_star);
}

GateReport reconstruct_matrix(const SolvedParams& sp, const Eigen::Matrix2cd& target, double delta, Engine engine) {
  const auto cfg = gate_lattice(delta, engine);
  GateReport rep;
  rep.target = target;
  for (int c = 0; c < 2; ++c) {
    const Spinor basis = c == 0 ? Spinor(1.0, 0.0) : Spinor(0.0, 1.0);
    const auto in = make_gaussian(WavepacketSpec{delta, sp.q_star, basis}, cfg);
    const auto out = one_roundtrip(in, sp.params, engine);

    const double reference = raw_projection_at_q(in, sp.q_star).norm();
    const Spinor column = raw_projection_at_q(out, sp.q_star) / reference;
    rep.reconstructed.col(c) = column;
    rep.column_fidelities[static_cast<std::size_t>(c)] =
        std::norm(column.normalized().dot(target.col(c).normalized()));

    const auto ideal = apply_spin_operator(in, target);
    for (auto p : {Polarization::H, Polarization::V}) {
      const auto a = out.component(p);
      const auto b = ideal.component(p);
      for (std::size_t i = 0; i < a.size(); ++i) rep.packet_hs_distance += std::norm(a[i] - b[i]);
    }
  }
  rep.hs_distance = hs_distance(rep.reconstructed, target);
  rep.gate_fidelity = gate_fidelity(rep.reconstructed, target);
  rep.avg_gate_fidelity = (2.0 * rep.gate_fidelity + 1.0) / 3.0;
  return rep;
}

Schedule prepare_state_sequence(double phi1, double phi2, double q_star, std::optional<double> gamma) {
  const auto h = solve_modulation(table_gate(GateName::H), q_star, gamma).params;
  const auto rz1 = solve_modulation(table_gate(GateName::Rz, wrap_angle(phi1)), q_star, gamma).params;
  const auto rz2 = solve_modulation(table_gate(GateName::Rz, wrap_angle(phi2 + kPi / 2.0)), q_star, gamma).params;
  return Schedule{h, rz1, h, rz2};
}

Eigen::Matrix2cd schedule_matrix(const Schedule& schedule, double q_star) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  for (const auto& p : schedule) m = uk_matrix(p, q_star).m * m;
  return m;
}

PreparationResult run_preparation(double phi1, double phi2, double delta, double q_star, Engine engine) {
  const auto schedule = prepare_state_sequence(phi1, phi2, q_star);
  const auto cfg = gate_lattice(delta, engine);
  const auto in = make_gaussian(WavepacketSpec{delta, q_star, Spinor(1.0, 0.0)}, cfg);

  EvolveOptions opts;
  opts.engine = engine;
  opts.record = RecordSet{false, false, false, false, false};
  const auto out = evolve(in, schedule, opts).final_state;

  PreparationResult res;
  res.output = QubitState{spin_projection_at_q(out, q_star)};
  res.target = QubitState::from_angles(phi1, phi2);
  res.fidelity = state_fidelity(res.output.amplitudes, res.target.amplitudes);
  return res;
}

}  // namespace synthwalk
