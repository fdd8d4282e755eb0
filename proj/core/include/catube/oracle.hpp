#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "catube/matfun.hpp"
#include "catube/spaceform.hpp"

// Independent numerical verification of closed-form hypersurface data:
// finite-difference Weingarten matrices from explicit charts, Runge-Kutta
// integration of the Jacobi equation, Brioschi Gauss curvature of induced
// metrics, and spectra comparison reports. Everything here works from a
// chart and the ambient embedding alone; the only closed-form input is the
// normal used to fix an orientation sign.

namespace catube {

using Chart = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using Chart2 = std::function<Eigen::VectorXd(double, double)>;

struct FdOptions {
  double h = 1e-4;                 // central-difference step
  double frame_cond_limit = 1e8;   // reject charts with worse-conditioned frames
};

struct FdPointResult {
  Eigen::MatrixXd frame;    // ambient_dim x m, orthonormal w.r.t. the ambient form
  Eigen::VectorXd normal;   // oracle unit normal, sign-aligned with the hint
  SymMatrix shape;          // FD Weingarten matrix in `frame`
  SymMatrix normal_jacobi;  // ambient curvature operator in `frame` for `normal`
};

// Differentiates the chart around t = 0: tangent frame by central
// differences, unit normal as the metric complement inside the tangent space
// of X (membership constraints projected out), then dN along the frame,
// tangential projection and symmetrization. normal_hint only fixes the sign.
FdPointResult fd_shape_operator(const Space& X, const Chart& chart, int m,
                                const Eigen::VectorXd& normal_hint,
                                const FdOptions& opt = {});

// Jacobi equation Y'' + R(Y, gamma')gamma' = 0 along the geodesic from p with
// unit velocity v, integrated with classical RK4 in a parallel-transported
// orthonormal frame. Needs steps >= 10.
TangentVector ode_jacobi(const AmbientPoint& p, const TangentVector& v,
                         const TangentVector& y0, const TangentVector& y0_prime,
                         double s_end, int steps);

// Gauss curvature of the surface chart at (s1, s2) from finite-difference
// fundamental quantities via the Brioschi formula.
double fd_gauss_curvature(const Space& X, const Chart2& chart, double s1, double s2,
                          double h = 4e-3);

struct ComparisonRow {
  double lambda_closed = 0.0;
  double lambda_numeric = 0.0;
  double mu_closed = 0.0;
  double mu_numeric = 0.0;
  double err = 0.0;  // max of the two absolute errors
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  // one per tangent dimension
  double commutator_residual = 0.0;
  double max_error = 0.0;
  double tolerance = 0.0;
  double fd_step = 0.0;
  bool pass = false;
};

// Matches the numeric pair's joint eigenvalues (clustered at 1e-6) against
// the closed-form spectral data by sorted assignment honoring multiplicities.
ComparisonReport compare_spectra(const SpectralData& closed, const SymMatrix& shape_numeric,
                                 const SymMatrix& jacobi_numeric, double tol,
                                 double fd_step = 0.0);

}  // namespace catube
