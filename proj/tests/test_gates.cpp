#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "synthwalk/errors.hpp"
#include "synthwalk/gates.hpp"

using namespace synthwalk;

namespace {
constexpr double kPi = std::numbers::pi;
const GateName kAll[] = {GateName::X, GateName::Y, GateName::Z, GateName::H, GateName::Rz};

GateSpec spec_for(GateName g) { return table_gate(g, g == GateName::Rz ? std::optional<double>(0.7) : std::nullopt); }
}  // namespace

TEST_CASE("table targets are unitary") {
  for (auto g : kAll) {
    const auto t = spec_for(g).target;
    CHECK((t.adjoint() * t - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
  }
}

TEST_CASE("solved parameters reproduce the targets") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const double q = trial == 0 ? kDefaultWorkingPoint : u(gen);
    for (auto g : kAll) {
      for (auto branch : {ArccosBranch::plus, ArccosBranch::minus}) {
        const auto spec = spec_for(g);
        const auto sp = solve_modulation(spec, q, std::nullopt, branch);
        const Eigen::Matrix2cd m = oracle::roundtrip_matrix(sp.params.gamma, sp.params.theta, sp.params.phi_h,
                                                            sp.params.phi_v, q);
        CHECK((m - spec.target).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((gate_matrix_analytic(sp) - spec.target).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("Rz over arbitrary phases") {
  for (double phi = -3.0; phi < 3.1; phi += 0.5) {
    const auto spec = table_gate(GateName::Rz, phi);
    const auto sp = solve_modulation(spec, 0.4);
    CHECK((gate_matrix_analytic(sp) - spec.target).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gate table errors") {
  CHECK_THROWS_AS(table_gate("CNOT"), ConfigError);
  CHECK_THROWS_AS(table_gate(GateName::Rz), ConfigError);
  CHECK(table_gate("rz", 0.3).name == GateName::Rz);
  CHECK_THROWS_AS(solve_modulation(table_gate(GateName::X), 0.0, 1.0), InfeasibleGate);
  CHECK_THROWS_AS(solve_modulation(table_gate(GateName::Z), 0.0, 0.0), InfeasibleGate);
  CHECK_NOTHROW(solve_modulation(table_gate(GateName::Y), 0.0, kPi / 2));
}

TEST_CASE("distance and fidelity metrics") {
  const auto h = table_gate(GateName::H).target;
  CHECK(hs_distance(h, h) == 0.0);
  CHECK(gate_fidelity(h, h) == doctest::Approx(1.0));
  CHECK(gate_fidelity(std::polar(1.0, 0.8) * h, h) == doctest::Approx(1.0));
  CHECK(hs_distance(-h, h) == doctest::Approx(8.0));
  CHECK(gate_fidelity(table_gate(GateName::X).target, table_gate(GateName::Z).target) == doctest::Approx(0.0));
  CHECK_THROWS_AS(hs_distance(Eigen::Matrix2cd::Identity(), Eigen::Matrix4cd::Identity()), ConfigError);
  CHECK_THROWS_AS(state_fidelity(Spinor(1.0, 1.0), Spinor(1.0, 0.0)), ConfigError);
  CHECK(state_fidelity(Spinor(1.0, 0.0), Spinor(0.0, 1.0)) == 0.0);
}

TEST_CASE("qubit state angles") {
  const auto s = QubitState::from_angles(kPi / 2, kPi / 2).amplitudes;
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s(0) - r) < 1e-15);
  CHECK(std::abs(s(1) - cplx(0, r)) < 1e-15);
}

TEST_CASE("lattice reconstruction on both engines") {
  for (auto engine : {Engine::spectral, Engine::direct}) {
    for (auto g : kAll) {
      const auto spec = spec_for(g);
      const auto rep = reconstruct_matrix(solve_modulation(spec, kDefaultWorkingPoint), spec.target, 40.0, engine);
      CHECK(rep.hs_distance < 1e-10);
      CHECK(rep.gate_fidelity == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(rep.avg_gate_fidelity == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(rep.column_fidelities[0] == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  const auto sp = solve_modulation(table_gate(GateName::X), kDefaultWorkingPoint);
  const Spinor out = execute_gate_lattice(sp, 30.0, Spinor(1.0, 0.0));
  CHECK(std::abs(out(1)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("packet-level gate error shrinks as the packet widens") {
  for (auto g : kAll) {
    const auto spec = spec_for(g);
    const auto sp = solve_modulation(spec, kDefaultWorkingPoint);
    double prev = INFINITY;
    for (double delta : {5.0, 10.0, 20.0, 40.0, 80.0}) {
      const double d = reconstruct_matrix(sp, spec.target, delta).packet_hs_distance;
      CHECK(d < prev);
      prev = d;
    }
    CHECK(prev < 0.01);
  }
}

TEST_CASE("preparation schedule at the matrix level") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int i = 0; i < 50; ++i) {
    const double a = u(gen) / 2, b = u(gen);
    const auto sched = prepare_state_sequence(a, b);
    REQUIRE(sched.size() == 4);
    const Spinor out = (schedule_matrix(sched, kDefaultWorkingPoint) * Spinor(1.0, 0.0)).normalized();
    CHECK(state_fidelity(out, QubitState::from_angles(a, b).amplitudes) > 1.0 - 1e-12);
  }
  const auto res = run_preparation(kPi / 2, kPi / 2, 40.0);
  CHECK(res.fidelity > 0.999999);
}
