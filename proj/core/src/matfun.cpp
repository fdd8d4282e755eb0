#include "catube/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace catube {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* who) {
  if (!m.allFinite()) {
    throw std::domain_error(std::string(who) + ": non-finite entries");
  }
}

// Fix eigenvector signs: largest-magnitude component positive, ties broken
// by the lowest index. Makes decompositions reproducible run to run.
void fix_column_signs(Eigen::MatrixXd& cols) {
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < cols.rows(); ++i) {
      const double a = std::abs(cols(i, j));
      if (a > best_abs + 1e-15) {
        best_abs = a;
        best = i;
      }
    }
    if (cols(best, j) < 0.0) cols.col(j) = -cols.col(j);
  }
}

// Cluster a sorted eigenvalue list: indices [begin, end) belong together
// when consecutive values differ by less than threshold.
std::vector<std::pair<int, int>> cluster_sorted(const Eigen::VectorXd& values,
                                                double threshold) {
  std::vector<std::pair<int, int>> out;
  int begin = 0;
  for (int i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values(i) - values(i - 1) >= threshold) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols()) {
    throw std::invalid_argument("SymMatrix: matrix must be square");
  }
  require_finite(mat_, "SymMatrix");
  for (Eigen::Index i = 0; i < mat_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < mat_.cols(); ++j) {
      if (mat_(i, j) != mat_(j, i)) {
        throw std::invalid_argument("SymMatrix: matrix is not symmetric");
      }
    }
  }
}

SymMatrix SymMatrix::symmetrized(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("SymMatrix::symmetrized: matrix must be square");
  }
  Eigen::MatrixXd s(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      s(i, j) = 0.5 * (m(i, j) + m(j, i));
    }
  }
  return SymMatrix(std::move(s));
}

SymMatrix SymMatrix::identity(int dim) {
  return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

int SpectralData::total_multiplicity() const {
  int n = 0;
  for (const auto& p : pairs) n += p.multiplicity;
  return n;
}

std::vector<std::pair<double, double>> SpectralData::expanded_rows() const {
  std::vector<std::pair<double, double>> rows;
  rows.reserve(dim);
  for (const auto& p : pairs) {
    for (int k = 0; k < p.multiplicity; ++k) rows.emplace_back(p.lambda, p.mu);
  }
  return rows;
}

EigenDecomposition sym_eigen(const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.mat());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_eigen: eigensolver failed to converge");
  }
  EigenDecomposition d{solver.eigenvalues(), solver.eigenvectors()};
  fix_column_signs(d.vectors);
  return d;
}

double jacobi_cos(double mu, double s) {
  const double x = mu * s * s;
  if (std::abs(x) < 1e-8) {
    // sum_j (-x)^j / (2j)!
    double term = 1.0, sum = 1.0;
    for (int j = 1; j <= 12; ++j) {
      term *= -x / ((2.0 * j - 1.0) * (2.0 * j));
      sum += term;
    }
    return sum;
  }
  if (mu > 0.0) return std::cos(s * std::sqrt(mu));
  return std::cosh(s * std::sqrt(-mu));
}

double jacobi_sinc(double mu, double s) {
  const double x = mu * s * s;
  if (std::abs(x) < 1e-8) {
    // s * sum_j (-x)^j / (2j+1)!
    double term = 1.0, sum = 1.0;
    for (int j = 1; j <= 12; ++j) {
      term *= -x / ((2.0 * j) * (2.0 * j + 1.0));
      sum += term;
    }
    return s * sum;
  }
  if (mu > 0.0) {
    const double k = std::sqrt(mu);
    return std::sin(s * k) / k;
  }
  const double k = std::sqrt(-mu);
  return std::sinh(s * k) / k;
}

namespace {

SymMatrix spectral_apply(const SymMatrix& s, double t, double (*f)(double, double)) {
  const EigenDecomposition d = sym_eigen(s);
  Eigen::VectorXd fv(d.values.size());
  for (Eigen::Index i = 0; i < d.values.size(); ++i) fv(i) = f(d.values(i), t);
  const Eigen::MatrixXd m = d.vectors * fv.asDiagonal() * d.vectors.transpose();
  return SymMatrix::symmetrized(m);
}

}  // namespace

SymMatrix spectral_cos(const SymMatrix& s, double t) {
  return spectral_apply(s, t, &jacobi_cos);
}

SymMatrix spectral_sinc(const SymMatrix& s, double t) {
  return spectral_apply(s, t, &jacobi_sinc);
}

double commutator_residual(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("commutator_residual: dimension mismatch");
  }
  return (a.mat() * b.mat() - b.mat() * a.mat()).norm();
}

SpectralData joint_eigenspaces_unchecked(const SymMatrix& a, const SymMatrix& r,
                                         double cluster_tol) {
  if (a.dim() != r.dim()) {
    throw std::invalid_argument("joint_eigenspaces: dimension mismatch");
  }
  const int n = a.dim();
  const double r_thresh = cluster_tol * (1.0 + r.fro_norm());
  const double a_thresh = cluster_tol * (1.0 + a.fro_norm());

  const EigenDecomposition er = sym_eigen(r);
  SpectralData out;
  out.dim = n;

  for (const auto& [rb, re] : cluster_sorted(er.values, r_thresh)) {
    const int rdim = re - rb;
    const double mu = er.values.segment(rb, rdim).mean();
    const Eigen::MatrixXd q = er.vectors.middleCols(rb, rdim);
    // Restrict a to this mu-eigenspace and split it by a-eigenvalues.
    const SymMatrix restricted = SymMatrix::symmetrized(q.transpose() * a.mat() * q);
    const EigenDecomposition ea = sym_eigen(restricted);
    for (const auto& [ab, ae] : cluster_sorted(ea.values, a_thresh)) {
      const int adim = ae - ab;
      JointEigenpair pair;
      pair.lambda = ea.values.segment(ab, adim).mean();
      pair.mu = mu;
      pair.multiplicity = adim;
      pair.basis = q * ea.vectors.middleCols(ab, adim);
      out.pairs.push_back(std::move(pair));
    }
  }

  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const JointEigenpair& x, const JointEigenpair& y) {
              if (x.lambda != y.lambda) return x.lambda < y.lambda;
              return x.mu < y.mu;
            });
  for (auto& p : out.pairs) fix_column_signs(p.basis);
  return out;
}

SpectralData joint_eigenspaces(const SymMatrix& a, const SymMatrix& r, double tol) {
  const double residual = commutator_residual(a, r);
  const double threshold = tol * (a.fro_norm() + r.fro_norm() + 1.0);
  if (residual > threshold) {
    std::ostringstream msg;
    msg << "joint_eigenspaces: not curvature-adapted, commutator residual "
        << residual << " exceeds " << threshold;
    throw std::runtime_error(msg.str());
  }
  return joint_eigenspaces_unchecked(a, r, tol);
}

}  // namespace catube
