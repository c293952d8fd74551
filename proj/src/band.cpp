#include "synthwalk/band.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "synthwalk/errors.hpp"

namespace synthwalk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateGap = 1e-10;
constexpr double kVelocityGap = 1e-6;

Spinor fix_phase(Spinor v) {
  v.normalize();
  const int k = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
  const double mag = std::abs(v(k));
  if (mag > 0.0) v *= std::conj(v(k)) / mag;
  return v;
}

double eigenphase(const BandPoint& pt, Branch b) {
  return -std::arg(b == Branch::plus ? pt.eigenvalue_plus : pt.eigenvalue_minus);
}

}  // namespace

UkMatrix uk_matrix(const ModulationParams& p, double q) {
  UkMatrix u;
  u.alpha = std::cos(q + p.phi_h);
  u.beta = std::cos(q + p.phi_v);
  const double c = std::cos(p.theta / 2.0);
  const double s = std::sin(p.theta / 2.0);
  const cplx eh = std::polar(1.0, p.gamma * u.alpha);
  const cplx ev = std::polar(1.0, p.gamma * u.beta);
  u.m << eh * c, -eh * s, ev * s, ev * c;
  return u;
}

double fold_quasienergy(double eps) {
  double f = eps - std::floor(eps);  // [0, 1)
  if (f > 0.5) f -= 1.0;
  return f;
}

BranchPair band_cosines(const ModulationParams& p, double q) {
  const double alpha = std::cos(q + p.phi_h);
  const double beta = std::cos(q + p.phi_v);
  const double sum = 0.5 * p.gamma * (alpha + beta);
  const double diff = 0.5 * p.gamma * (alpha - beta);
  const double su2_cos = std::cos(diff) * std::cos(p.theta / 2.0);
  const double su2_sin = std::sqrt(std::max(0.0, 1.0 - su2_cos * su2_cos));
  return {std::cos(sum) * su2_cos - std::sin(sum) * su2_sin, std::cos(sum) * su2_cos + std::sin(sum) * su2_sin};
}

BranchPair quasienergy_closed_form(const ModulationParams& p, double q) {
  const double alpha = std::cos(q + p.phi_h);
  const double beta = std::cos(q + p.phi_v);
  const double sum = 0.5 * p.gamma * (alpha + beta);
  const double diff = 0.5 * p.gamma * (alpha - beta);
  const double su2_cos = std::cos(diff) * std::cos(p.theta / 2.0);
  const double su2_sin = std::sqrt(std::max(0.0, 1.0 - su2_cos * su2_cos));
  const double eta = std::atan2(su2_sin, su2_cos);
  return {fold_quasienergy(-(sum + eta) / (2.0 * kPi)), fold_quasienergy(-(sum - eta) / (2.0 * kPi))};
}

double polarization_projection(const Spinor& s) { return std::norm(s(0)) - std::norm(s(1)); }

BandPoint quasienergy_numeric(const ModulationParams& p, double q) {
  const UkMatrix u = uk_matrix(p, q);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(u.m, true);
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();

  // Remove the determinant phase; what is left is exp(+-i eta), eta in [0, pi].
  const cplx unphase = std::polar(1.0, -0.5 * p.gamma * (u.alpha + u.beta));
  const int plus = (vals(0) * unphase).imag() >= (vals(1) * unphase).imag() ? 0 : 1;
  const int minus = 1 - plus;

  BandPoint pt;
  pt.q = q;
  pt.eigenvalue_plus = vals(plus);
  pt.eigenvalue_minus = vals(minus);
  pt.eps_plus = fold_quasienergy(-std::arg(vals(plus)) / (2.0 * kPi));
  pt.eps_minus = fold_quasienergy(-std::arg(vals(minus)) / (2.0 * kPi));
  pt.spinor_plus = fix_phase(vecs.col(plus));
  pt.spinor_minus = fix_phase(vecs.col(minus));
  pt.nz_plus = polarization_projection(pt.spinor_plus);
  pt.nz_minus = polarization_projection(pt.spinor_minus);
  pt.gap = std::abs(std::arg(vals(plus) * std::conj(vals(minus))));
  return pt;
}

BandGrid band_grid(const ModulationParams& p, int n_k) {
  if (n_k < 16) throw ConfigError("band grid needs at least 16 points, got " + std::to_string(n_k));
  BandGrid grid{p, {}};
  grid.points.reserve(static_cast<std::size_t>(n_k));
  for (int j = 0; j < n_k; ++j) {
    const double q = -kPi + 2.0 * kPi * j / n_k;
    BandPoint pt = quasienergy_numeric(p, q);
    if (!grid.points.empty()) {
      const BandPoint& prev = grid.points.back();
      const double keep = std::abs(prev.spinor_plus.dot(pt.spinor_plus));
      const double swap = std::abs(prev.spinor_plus.dot(pt.spinor_minus));
      if (swap > keep) {
        std::swap(pt.eps_plus, pt.eps_minus);
        std::swap(pt.nz_plus, pt.nz_minus);
        std::swap(pt.spinor_plus, pt.spinor_minus);
        std::swap(pt.eigenvalue_plus, pt.eigenvalue_minus);
      }
    }
    grid.points.push_back(std::move(pt));
  }
  return grid;
}

double branch_width(const BandGrid& grid, Branch b) {
  double lo = 1.0;
  double hi = -1.0;
  for (const auto& pt : grid.points) {
    const double e = b == Branch::plus ? pt.eps_plus : pt.eps_minus;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return hi - lo;
}

double group_velocity(const ModulationParams& p, double q, Branch b, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  const BandPoint lo = quasienergy_numeric(p, q - h);
  const BandPoint hi = quasienergy_numeric(p, q + h);
  if (lo.gap < kVelocityGap || hi.gap < kVelocityGap || quasienergy_numeric(p, q).gap < kVelocityGap) {
    throw NumericalError("group velocity undefined at band crossing near q = " + std::to_string(q));
  }
  const double dchi = wrap_angle(eigenphase(hi, b) - eigenphase(lo, b));
  return -dchi / (2.0 * h);
}

Spinor eigen_spinor(const ModulationParams& p, double q, Branch b) {
  const BandPoint pt = quasienergy_numeric(p, q);
  if (pt.gap <= kDegenerateGap) {
    throw NumericalError("degenerate band point at q = " + std::to_string(q) + "; eigen spinor undefined");
  }
  return b == Branch::plus ? pt.spinor_plus : pt.spinor_minus;
}

}  // namespace synthwalk
