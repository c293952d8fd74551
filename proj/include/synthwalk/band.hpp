#pragma once

// Floquet bands of the walk. In quasimomentum space one roundtrip acts on the
// polarization spinor at each q through a 2x2 unitary; its eigenphases are the
// quasienergies and its eigenvectors the band spinors.
//
// Conventions: eigenvalue = exp(-i chi), quasienergy eps = chi / 2pi folded
// into (-0.5, 0.5]. With a = gamma (alpha + beta) / 2 and eta in [0, pi] the
// eigenphase of the SU(2) part, the "plus" branch has eigenvalue
// exp(i (a + eta)) and the "minus" branch exp(i (a - eta)).

#include <Eigen/Core>
#include <vector>

#include "synthwalk/lattice.hpp"
#include "synthwalk/step.hpp"

namespace synthwalk {

enum class Branch { plus, minus };

struct UkMatrix {
  Eigen::Matrix2cd m;
  double alpha = 0.0;  // cos(q + phi_h)
  double beta = 0.0;   // cos(q + phi_v)
};

UkMatrix uk_matrix(const ModulationParams& p, double q);

// Folds a quasienergy into (-0.5, 0.5].
double fold_quasienergy(double eps);

struct BranchPair {
  double plus = 0.0;
  double minus = 0.0;
};

// cos(2 pi eps) for both branches straight from the trigonometric band formula.
BranchPair band_cosines(const ModulationParams& p, double q);

// Folded quasienergies from the same closed form.
BranchPair quasienergy_closed_form(const ModulationParams& p, double q);

struct BandPoint {
  double q = 0.0;
  double eps_plus = 0.0;
  double eps_minus = 0.0;
  double nz_plus = 0.0;
  double nz_minus = 0.0;
  Spinor spinor_plus = Spinor(1.0, 0.0);
  Spinor spinor_minus = Spinor(0.0, 1.0);
  cplx eigenvalue_plus{1.0, 0.0};
  cplx eigenvalue_minus{1.0, 0.0};
  double gap = 0.0;  // eigenphase separation in [0, pi]
};

// Numerical diagonalization of uk_matrix; spinor phases fixed so the larger
// component is real positive.
BandPoint quasienergy_numeric(const ModulationParams& p, double q);

// <sigma_z> = |s_H|^2 - |s_V|^2.
double polarization_projection(const Spinor& s);

struct BandGrid {
  ModulationParams params;
  std::vector<BandPoint> points;  // q_j = -pi + 2 pi j / n_k
};

// Branch labels follow spinor continuity along q starting from the first point.
BandGrid band_grid(const ModulationParams& p, int n_k);

// max - min of the folded quasienergy of one branch.
double branch_width(const BandGrid& grid, Branch b);

// Drift of a narrow packet on branch b, in sites per roundtrip: -d(2 pi eps)/dq
// by central differences. Throws NumericalError near a band crossing.
double group_velocity(const ModulationParams& p, double q, Branch b, double h = 1e-4);

// Unit eigenvector for branch b. Throws NumericalError at degenerate points.
Spinor eigen_spinor(const ModulationParams& p, double q, Branch b);

}  // namespace synthwalk
