#include "catube/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace catube {

namespace {

// Form-orthonormalize the columns of raw (modified Gram-Schmidt, two passes).
// Returns the orthonormal frame E and the triangular factor L with raw = E L.
void mgs_orthonormalize(const Space& X, const Eigen::MatrixXd& raw,
                        Eigen::MatrixXd& e, Eigen::MatrixXd& l) {
  const int m = static_cast<int>(raw.cols());
  e = raw;
  l = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd v = raw.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const double c = X.form(e.col(i), v);
        l(i, j) += c;
        v -= c * e.col(i);
      }
    }
    const double n2 = X.form(v, v);
    if (!(n2 > 1e-24)) {
      throw std::runtime_error("fd_shape_operator: degenerate tangent frame");
    }
    l(j, j) = std::sqrt(n2);
    e.col(j) = v / l(j, j);
  }
}

Eigen::MatrixXd fd_tangent_columns(const Chart& chart, const Eigen::VectorXd& t0,
                                   int m, double h) {
  Eigen::MatrixXd cols;
  for (int a = 0; a < m; ++a) {
    Eigen::VectorXd tp = t0, tm = t0;
    tp(a) += h;
    tm(a) -= h;
    const Eigen::VectorXd xp = chart(tp);
    const Eigen::VectorXd xm = chart(tm);
    if (cols.size() == 0) cols.resize(xp.size(), m);
    cols.col(a) = (xp - xm) / (2.0 * h);
  }
  return cols;
}

// Unit normal of the chart at t: the direction of T_xX form-orthogonal to all
// tangent columns. Deterministic pivot over the full tangent frame of X.
Eigen::VectorXd oracle_normal(const Space& X, const Eigen::VectorXd& x,
                              const Eigen::MatrixXd& tangent_cols) {
  Eigen::MatrixXd e, l;
  mgs_orthonormalize(X, tangent_cols, e, l);
  const Eigen::MatrixXd full = tangent_frame(AmbientPoint{X, x});
  int best = -1;
  double best_n2 = 1e-20;
  Eigen::VectorXd best_res;
  for (int k = 0; k < full.cols(); ++k) {
    Eigen::VectorXd res = full.col(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < e.cols(); ++i) res -= e.col(i) * X.form(e.col(i), res);
    }
    const double n2 = X.form(res, res);
    if (n2 > best_n2) {
      best_n2 = n2;
      best = k;
      best_res = std::move(res);
    }
  }
  if (best < 0) {
    throw std::runtime_error("fd_shape_operator: no normal complement found");
  }
  return best_res / std::sqrt(best_n2);
}

}  // namespace

FdPointResult fd_shape_operator(const Space& X, const Chart& chart, int m,
                                const Eigen::VectorXd& normal_hint,
                                const FdOptions& opt) {
  const double h = opt.h;
  const Eigen::VectorXd t0 = Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd x0 = chart(t0);
  if (x0.size() != X.ambient_dim()) {
    throw std::invalid_argument("fd_shape_operator: chart/ambient size mismatch");
  }

  const Eigen::MatrixXd cols0 = fd_tangent_columns(chart, t0, m, h);
  Eigen::MatrixXd e0, l0;
  mgs_orthonormalize(X, cols0, e0, l0);

  // Frame conditioning from the Gram matrix of the raw FD columns.
  {
    Eigen::MatrixXd gram(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) gram(i, j) = X.form(cols0.col(i), cols0.col(j));
    }
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues();
    if (!(ev.minCoeff() > 0.0) ||
        std::sqrt(ev.maxCoeff() / ev.minCoeff()) > opt.frame_cond_limit) {
      throw std::runtime_error("fd_shape_operator: degenerate frame (condition limit)");
    }
  }

  Eigen::VectorXd n0 = oracle_normal(X, x0, cols0);
  if (X.form(n0, normal_hint) < 0.0) n0 = -n0;

  // dN/dt_a by central differences of the oracle normal field; displaced
  // normals are sign-aligned with the center normal.
  Eigen::MatrixXd dn(x0.size(), m);
  for (int a = 0; a < m; ++a) {
    Eigen::VectorXd tp = t0, tm = t0;
    tp(a) += h;
    tm(a) -= h;
    const Eigen::VectorXd xp = chart(tp);
    const Eigen::VectorXd xm = chart(tm);
    Eigen::VectorXd np = oracle_normal(X, xp, fd_tangent_columns(chart, tp, m, h));
    Eigen::VectorXd nm = oracle_normal(X, xm, fd_tangent_columns(chart, tm, m, h));
    if (X.form(np, n0) < 0.0) np = -np;
    if (X.form(nm, n0) < 0.0) nm = -nm;
    dn.col(a) = (np - nm) / (2.0 * h);
  }

  // Weingarten matrix: A(e_b) = -sum_a (L^-1)_{ab} P_tan(dN/dt_a); pairing
  // against tangent frame vectors absorbs the projection.
  Eigen::MatrixXd g(m, m);
  for (int a = 0; a < m; ++a) {
    for (int c = 0; c < m; ++c) g(c, a) = X.form(dn.col(a), e0.col(c));
  }
  const Eigen::MatrixXd w = -g * l0.inverse();

  FdPointResult out{e0, n0, SymMatrix::symmetrized(w), SymMatrix::identity(m)};
  out.normal_jacobi =
      curvature_normal_operator(AmbientPoint{X, x0}, TangentVector{X, x0, n0}, e0);
  return out;
}

TangentVector ode_jacobi(const AmbientPoint& p, const TangentVector& v,
                         const TangentVector& y0, const TangentVector& y0_prime,
                         double s_end, int steps) {
  if (steps < 10) {
    throw std::invalid_argument("ode_jacobi: needs at least 10 steps");
  }
  require_tangent(y0, "ode_jacobi");
  require_tangent(y0_prime, "ode_jacobi");
  const Space& X = p.space;
  const int n = X.dim();
  const Eigen::MatrixXd frame0 = tangent_frame(p);

  // Parallel frames, velocities and curvature matrices at the half-step grid.
  const int nodes = 2 * steps + 1;
  const double h = s_end / steps;
  std::vector<Eigen::MatrixXd> rhat(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double s = 0.5 * h * j;
    Eigen::MatrixXd ef(X.ambient_dim(), n);
    for (int i = 0; i < n; ++i) {
      ef.col(i) = parallel_transport(p, v, s,
                                     TangentVector{X, p.x, frame0.col(i)}).v;
    }
    const Eigen::VectorXd vel = geodesic_tangent(p, v, s).v;
    Eigen::MatrixXd r(n, n);
    for (int a = 0; a < n; ++a) {
      const Eigen::VectorXd rv = curvature_vector(X, ef.col(a), vel);
      for (int b = 0; b < n; ++b) r(b, a) = X.form(ef.col(b), rv);
    }
    rhat[j] = r;
  }

  Eigen::VectorXd y(n), yp(n);
  for (int i = 0; i < n; ++i) {
    y(i) = X.form(y0.v, frame0.col(i));
    yp(i) = X.form(y0_prime.v, frame0.col(i));
  }

  // Classical RK4 on (y, y'), y'' = -R(s) y.
  for (int step = 0; step < steps; ++step) {
    const Eigen::MatrixXd& r0 = rhat[2 * step];
    const Eigen::MatrixXd& rm = rhat[2 * step + 1];
    const Eigen::MatrixXd& r1 = rhat[2 * step + 2];

    const Eigen::VectorXd k1y = yp;
    const Eigen::VectorXd k1p = -r0 * y;
    const Eigen::VectorXd k2y = yp + 0.5 * h * k1p;
    const Eigen::VectorXd k2p = -rm * (y + 0.5 * h * k1y);
    const Eigen::VectorXd k3y = yp + 0.5 * h * k2p;
    const Eigen::VectorXd k3p = -rm * (y + 0.5 * h * k2y);
    const Eigen::VectorXd k4y = yp + h * k3p;
    const Eigen::VectorXd k4p = -r1 * (y + h * k3y);

    y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    yp += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(X.ambient_dim());
  const AmbientPoint end = geodesic(p, v, s_end);
  for (int i = 0; i < n; ++i) {
    out += y(i) * parallel_transport(p, v, s_end,
                                     TangentVector{X, p.x, frame0.col(i)}).v;
  }
  return {X, end.x, out};
}

double fd_gauss_curvature(const Space& X, const Chart2& chart, double s1, double s2,
                          double h) {
  // First fundamental form by central differences of the chart.
  auto fundamental = [&](double u, double v, double& E, double& F, double& G) {
    const Eigen::VectorXd xu = (chart(u + h, v) - chart(u - h, v)) / (2.0 * h);
    const Eigen::VectorXd xv = (chart(u, v + h) - chart(u, v - h)) / (2.0 * h);
    E = X.form(xu, xu);
    F = X.form(xu, xv);
    G = X.form(xv, xv);
  };

  double E, F, G;
  fundamental(s1, s2, E, F, G);
  double Eu_p, Fu_p, Gu_p, Eu_m, Fu_m, Gu_m;
  fundamental(s1 + h, s2, Eu_p, Fu_p, Gu_p);
  fundamental(s1 - h, s2, Eu_m, Fu_m, Gu_m);
  double Ev_p, Fv_p, Gv_p, Ev_m, Fv_m, Gv_m;
  fundamental(s1, s2 + h, Ev_p, Fv_p, Gv_p);
  fundamental(s1, s2 - h, Ev_m, Fv_m, Gv_m);

  const double E_u = (Eu_p - Eu_m) / (2.0 * h);
  const double E_v = (Ev_p - Ev_m) / (2.0 * h);
  const double G_u = (Gu_p - Gu_m) / (2.0 * h);
  const double G_v = (Gv_p - Gv_m) / (2.0 * h);
  const double F_u = (Fu_p - Fu_m) / (2.0 * h);
  const double F_v = (Fv_p - Fv_m) / (2.0 * h);

  const double E_vv = (Ev_p - 2.0 * E + Ev_m) / (h * h);
  const double G_uu = (Gu_p - 2.0 * G + Gu_m) / (h * h);

  double Fpp, Fpm, Fmp, Fmm, dum1, dum2;
  fundamental(s1 + h, s2 + h, dum1, Fpp, dum2);
  fundamental(s1 + h, s2 - h, dum1, Fpm, dum2);
  fundamental(s1 - h, s2 + h, dum1, Fmp, dum2);
  fundamental(s1 - h, s2 - h, dum1, Fmm, dum2);
  const double F_uv = (Fpp - Fpm - Fmp + Fmm) / (4.0 * h * h);

  const double det = E * G - F * F;
  if (!(det > 1e-12 * (E + G) * (E + G))) {
    throw std::runtime_error("fd_gauss_curvature: degenerate induced metric");
  }

  Eigen::Matrix3d m1, m2;
  m1 << -0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v,
        F_v - 0.5 * G_u, E, F,
        0.5 * G_v, F, G;
  m2 << 0.0, 0.5 * E_v, 0.5 * G_u,
        0.5 * E_v, E, F,
        0.5 * G_u, F, G;
  return (m1.determinant() - m2.determinant()) / (det * det);
}

ComparisonReport compare_spectra(const SpectralData& closed, const SymMatrix& shape_numeric,
                                 const SymMatrix& jacobi_numeric, double tol,
                                 double fd_step) {
  if (shape_numeric.dim() != closed.dim || jacobi_numeric.dim() != closed.dim) {
    throw std::invalid_argument("compare_spectra: dimension mismatch");
  }
  const SpectralData numeric =
      joint_eigenspaces_unchecked(shape_numeric, jacobi_numeric, 1e-6);

  const auto closed_rows = closed.expanded_rows();
  const auto numeric_rows = numeric.expanded_rows();
  if (closed_rows.size() != numeric_rows.size()) {
    throw std::invalid_argument("compare_spectra: row count mismatch");
  }

  ComparisonReport report;
  report.tolerance = tol;
  report.fd_step = fd_step;
  report.commutator_residual = commutator_residual(shape_numeric, jacobi_numeric);
  for (std::size_t i = 0; i < closed_rows.size(); ++i) {
    ComparisonRow row;
    row.lambda_closed = closed_rows[i].first;
    row.mu_closed = closed_rows[i].second;
    row.lambda_numeric = numeric_rows[i].first;
    row.mu_numeric = numeric_rows[i].second;
    row.err = std::max(std::abs(row.lambda_closed - row.lambda_numeric),
                       std::abs(row.mu_closed - row.mu_numeric));
    report.max_error = std::max(report.max_error, row.err);
    report.rows.push_back(row);
  }
  report.pass = report.max_error <= tol && report.commutator_residual <= tol;
  return report;
}

}  // namespace catube
