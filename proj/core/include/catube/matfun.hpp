#pragma once

#include <Eigen/Dense>
#include <vector>

// Spectral calculus for dense symmetric matrices: eigendecomposition,
// the generalized trigonometric matrix functions
//
//   cos(s sqrt(S))             per eigenvalue m:  cos(s sqrt(m))   (m > 0)
//                                                 cosh(s sqrt(-m)) (m < 0)
//                                                 1                (m = 0)
//   sin(s sqrt(S))/sqrt(S)     per eigenvalue m:  sin(s sqrt(m))/sqrt(m)
//                                                 sinh(s sqrt(-m))/sqrt(-m)
//                                                 s
//
// and the common-eigenspace decomposition of a commuting symmetric pair.
// These are the scalar solutions of y'' + m y = 0 with (1,0) and (0,1)
// initial data, which is how they enter Jacobi-field formulas.

namespace catube {

// Symmetric matrix with checked construction: square, finite entries,
// entries(i,j) == entries(j,i) exactly.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m);

  // Exact symmetrization (m + m^T)/2; addition commutes, so the result
  // is bitwise symmetric.
  static SymMatrix symmetrized(const Eigen::MatrixXd& m);
  static SymMatrix identity(int dim);
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  double fro_norm() const { return mat_.norm(); }
  double operator()(int i, int j) const { return mat_(i, j); }

 private:
  Eigen::MatrixXd mat_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns, matching order
};

// One common eigenspace: shape eigenvalue lambda, normal-Jacobi eigenvalue mu.
struct JointEigenpair {
  double lambda = 0.0;
  double mu = 0.0;
  int multiplicity = 0;
  Eigen::MatrixXd basis;  // dim x multiplicity, orthonormal columns
};

// Common eigenspace decomposition of a commuting symmetric pair.
// Pairs are sorted lexicographically by (lambda, mu); the multiplicities
// sum to dim and the bases assemble to an orthonormal basis of R^dim.
struct SpectralData {
  int dim = 0;
  std::vector<JointEigenpair> pairs;

  int total_multiplicity() const;
  // One (lambda, mu) row per dimension, in pair order (already sorted).
  std::vector<std::pair<double, double>> expanded_rows() const;
};

// Eigendecomposition with deterministic output: ascending eigenvalues and
// sign-fixed eigenvectors (largest-magnitude component positive, ties
// broken by lowest index).
EigenDecomposition sym_eigen(const SymMatrix& s);

// Scalar branches of the generalized trig functions above. Near mu = 0
// (|mu| s^2 < 1e-8) a 12-term series in mu s^2 is used to avoid
// cancellation; both branches are continuous across mu = 0.
double jacobi_cos(double mu, double s);
double jacobi_sinc(double mu, double s);

SymMatrix spectral_cos(const SymMatrix& s, double t);
SymMatrix spectral_sinc(const SymMatrix& s, double t);

// Frobenius norm of AB - BA.
double commutator_residual(const SymMatrix& a, const SymMatrix& b);

// Common eigenspaces of a commuting pair (a, r). Eigenvalues closer than
// tol * (1 + |matrix|_F) are clustered. Precondition: the commutator
// residual is at most tol * (|a|_F + |r|_F + 1); otherwise the pair is
// not simultaneously diagonalizable and a diagnostic error is thrown.
SpectralData joint_eigenspaces(const SymMatrix& a, const SymMatrix& r,
                               double tol = 1e-9);

// Clustering-only variant without the commutator precondition, for
// comparing against finite-difference matrices whose commutator is noise.
SpectralData joint_eigenspaces_unchecked(const SymMatrix& a, const SymMatrix& r,
                                         double cluster_tol);

}  // namespace catube
