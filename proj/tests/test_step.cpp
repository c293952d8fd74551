#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "synthwalk/errors.hpp"
#include "synthwalk/step.hpp"

using namespace synthwalk;

namespace {

constexpr double kPi = std::numbers::pi;

LatticeState random_interior_state(std::mt19937_64& gen, int half_width, int support) {
  std::normal_distribution<double> g;
  const LatticeConfig cfg{half_width};
  std::vector<cplx> h(cfg.size()), v(cfg.size());
  for (int m = -support; m <= support; ++m) {
    h[cfg.index(m)] = cplx(g(gen), g(gen));
    v[cfg.index(m)] = cplx(g(gen), g(gen));
  }
  auto s = LatticeState::from_amplitudes(cfg, h, v);
  return s.scaled(1.0 / std::sqrt(s.norm_squared()));
}

double max_diff(const LatticeState& a, const LatticeState& b) {
  double d = 0.0;
  for (auto p : {Polarization::H, Polarization::V}) {
    const auto x = a.component(p);
    const auto y = b.component(p);
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  }
  return d;
}

}  // namespace

TEST_CASE("parameter validation and wrapping") {
  CHECK_THROWS_AS(ModulationParams::make(-0.1, 0, 0, 0), ConfigError);
  CHECK_THROWS_AS(ModulationParams::make(1.0, std::nan(""), 0, 0), ConfigError);
  CHECK_THROWS_AS(ModulationParams::make(1.0, 0, INFINITY, 0), ConfigError);
  const auto p = ModulationParams::make(1.0, 3 * kPi, 5 * kPi / 2, -kPi);
  CHECK(p.phi_h == doctest::Approx(kPi / 2));
  CHECK(p.phi_v == doctest::Approx(-kPi));
  CHECK(p.theta == doctest::Approx(-kPi));
  CHECK(ModulationParams::make(1.0, 2 * kPi, 0, 0).theta == doctest::Approx(2 * kPi));
}

TEST_CASE("translation kernel coefficients and truncation") {
  for (double gamma : {0.0, 0.06 * kPi, 1.0, kPi, 3 * kPi}) {
    const auto k = translation_kernel(gamma, 0.7, 1e-12);
    CHECK(translation_kernel(gamma, 0.7).tail_bound < 1e-20);
    CHECK(k.tail_bound < 1e-12);
    CHECK(k.weight() == doctest::Approx(1.0).epsilon(1e-12));
    for (int l = -k.truncation; l <= k.truncation; ++l) {
      const cplx ref = std::pow(cplx(0, 1), l) * oracle::bessel_quadrature(l, gamma) * std::polar(1.0, 0.7 * l);
      CHECK(std::abs(k.coeff(l) - ref) < 1e-13);
    }
    if (k.truncation > 0) {
      double tail = 0.0;
      for (int l = k.truncation; l < k.truncation + 60; ++l) tail += 2 * std::pow(oracle::bessel_quadrature(l, gamma), 2);
      CHECK(tail >= 1e-12);
    }
  }
  CHECK(translation_kernel(0.0, 0.0).truncation == 0);
  CHECK_THROWS_AS(translation_kernel(1.0, 0.0, 1e-3), ConfigError);
  CHECK_THROWS_AS(translation_kernel(1.0, 0.0, 0.0), ConfigError);
}

TEST_CASE("zero modulation reduces to the rotation") {
  std::mt19937_64 gen(11);
  const auto s = random_interior_state(gen, 20, 5);
  const auto p = ModulationParams::make(0.0, 0.8, 0.3, -1.1);
  const auto rotated = apply_rotation(s, 0.8);
  CHECK(max_diff(step(s, p, Engine::spectral), rotated) < 1e-14);
  CHECK(max_diff(step(s, p, Engine::direct), rotated) < 1e-15);
  const double c = std::cos(0.4), sn = std::sin(0.4);
  CHECK(std::abs(rotated.amp(0, Polarization::H) - (c * s.amp(0, Polarization::H) - sn * s.amp(0, Polarization::V))) <
        1e-15);
}

TEST_CASE("single-site hop amplitudes follow the kernel") {
  const LatticeConfig cfg{40};
  const auto p = ModulationParams::make(2.3, -kPi / 2, 0.4, -2.0);
  const auto out = step(make_single_site(0, Polarization::H, cfg), p, Engine::direct);
  // R(-pi/2)|H> = (|H> - |V>)/sqrt(2)
  const double r = 1.0 / std::sqrt(2.0);
  const int L = translation_kernel(2.3, 0.4).truncation;
  CHECK(out.amp(L + 1, Polarization::H) == cplx(0.0));
  for (int l = -L; l <= L; ++l) {
    const cplx i_l = std::pow(cplx(0, 1), l);
    const double j = oracle::bessel_quadrature(l, 2.3);
    CHECK(std::abs(out.amp(l, Polarization::H) - r * i_l * j * std::polar(1.0, 0.4 * l)) < 1e-13);
    CHECK(std::abs(out.amp(l, Polarization::V) + r * i_l * j * std::polar(1.0, -2.0 * l)) < 1e-13);
  }
}

TEST_CASE("spectral step equals the dense plane-wave operator") {
  const int half = 6;
  const auto u = oracle::ring_operator(half, 1.7, 0.9, -0.3, 2.1);
  std::mt19937_64 gen(5);
  const auto s = random_interior_state(gen, half, half);
  Eigen::VectorXcd x(2 * s.size());
  for (int i = 0; i < s.size(); ++i) {
    x(2 * i) = s.component(Polarization::H)[i];
    x(2 * i + 1) = s.component(Polarization::V)[i];
  }
  const Eigen::VectorXcd y = u * x;
  const auto out = step(s, ModulationParams::make(1.7, 0.9, -0.3, 2.1), Engine::spectral);
  for (int i = 0; i < s.size(); ++i) {
    CHECK(std::abs(out.component(Polarization::H)[i] - y(2 * i)) < 1e-13);
    CHECK(std::abs(out.component(Polarization::V)[i] - y(2 * i + 1)) < 1e-13);
  }
}

TEST_CASE("plane waves keep their quasimomentum") {
  const LatticeConfig cfg{32};
  const int n = cfg.size();
  const double q = 2 * kPi * 7 / n;
  const Spinor spin = Spinor(0.6, cplx(0, 0.8));
  std::vector<cplx> h(n), v(n);
  for (int m = -cfg.half_width; m <= cfg.half_width; ++m) {
    h[cfg.index(m)] = spin(0) * std::polar(1.0, -q * m);
    v[cfg.index(m)] = spin(1) * std::polar(1.0, -q * m);
  }
  const auto s = LatticeState::from_amplitudes(cfg, h, v);
  const auto p = ModulationParams::make(2.5, 1.2, 0.2, -0.9);
  const auto out = step(s, p, Engine::spectral);
  const Spinor expected = oracle::roundtrip_matrix(2.5, 1.2, 0.2, -0.9, q) * spin;
  for (int m = -cfg.half_width; m <= cfg.half_width; ++m) {
    CHECK(std::abs(out.amp(m, Polarization::H) - expected(0) * std::polar(1.0, -q * m)) < 1e-12);
    CHECK(std::abs(out.amp(m, Polarization::V) - expected(1) * std::polar(1.0, -q * m)) < 1e-12);
  }
}

TEST_CASE("engines agree on interior states") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::uniform_real_distribution<double> g(0.0, 3 * kPi);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_interior_state(gen, 120, 30);
    const auto p = ModulationParams::make(g(gen), u(gen), u(gen), u(gen));
    CHECK(max_diff(step(s, p, Engine::direct), step(s, p, Engine::spectral)) < 1e-8);
  }
}

TEST_CASE("spectral evolution conserves the norm") {
  std::mt19937_64 gen(7);
  const auto s = random_interior_state(gen, 300, 10);
  const auto p = ModulationParams::make(1.3, -kPi / 2, 0.0, 3 * kPi / 4);
  EvolveOptions opts;
  opts.boundary_limit = 1.0;
  const auto traj = evolve(s, p, 100, opts);
  REQUIRE(traj.snapshots.size() == 101);
  for (std::size_t n = 1; n < traj.snapshots.size(); ++n) {
    CHECK(traj.snapshots[n].step == n);
    CHECK(std::abs(traj.snapshots[n].norm - traj.snapshots[n - 1].norm) < 1e-12);
  }
}

TEST_CASE("schedule composition") {
  std::mt19937_64 gen(3);
  const auto s = random_interior_state(gen, 100, 8);
  const auto p1 = ModulationParams::make(0.7, 0.3, 1.0, -0.5);
  const auto p2 = ModulationParams::make(2.2, -1.4, 2.9, 0.1);
  for (auto engine : {Engine::direct, Engine::spectral}) {
    EvolveOptions opts;
    opts.engine = engine;
    const auto traj = evolve(s, Schedule{p1, p2, p1}, opts);
    CHECK(max_diff(traj.final_state, step(step(step(s, p1, engine), p2, engine), p1, engine)) < 1e-14);
  }
}

TEST_CASE("direct engine reports leakage") {
  const LatticeConfig cfg{10};
  const auto edge = make_single_site(10, Polarization::H, cfg);
  const auto res = apply_translation_direct(edge, ModulationParams::make(2.0, 0, 0, 0));
  CHECK(res.boundary_warning);
  CHECK(res.leak_flagged);
  CHECK(res.norm_leak + res.state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve stops at the boundary with the step index") {
  const LatticeConfig cfg{30};
  const auto s = make_single_site(0, Polarization::H, cfg);
  const auto p = ModulationParams::make(kPi, -kPi / 2, 0.0, 3 * kPi / 4);
  try {
    evolve(s, p, 50);
    FAIL("expected BoundaryError");
  } catch (const BoundaryError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.step() < 50);
    CHECK(e.boundary_mass() > 1e-6);
  }
  CHECK_THROWS_AS(evolve(make_single_site(29, Polarization::H, cfg), p, 1), BoundaryError);
}

TEST_CASE("spectral propagator rejects a mismatched lattice") {
  SpectralPropagator prop(21);
  CHECK_THROWS_AS(prop.translate(LatticeState::zeros(LatticeConfig{3}), ModulationParams{}), ConfigError);
  CHECK_THROWS_AS(SpectralPropagator(0), ConfigError);
}
