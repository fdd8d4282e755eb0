#include "catube/spaceform.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace catube {

namespace {

// cos-type branch minus one, computed without cancellation near mu = 0.
double jacobi_cosm1(double mu, double s) {
  const double x = mu * s * s;
  if (std::abs(x) < 1e-8) {
    double term = 1.0, sum = 0.0;
    for (int j = 1; j <= 12; ++j) {
      term *= -x / ((2.0 * j - 1.0) * (2.0 * j));
      sum += term;
    }
    return sum;
  }
  if (mu > 0.0) {
    const double h = std::sin(0.5 * s * std::sqrt(mu));
    return -2.0 * h * h;
  }
  const double h = std::sinh(0.5 * s * std::sqrt(-mu));
  return 2.0 * h * h;
}

std::string number_str(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

struct Space::Node {
  SpaceKind kind = SpaceKind::euclidean;
  int dim = 0;
  double curvature = 0.0;
  std::vector<Space> factors;
  int ambient_dim = 0;
  std::vector<int> offsets;
  Eigen::VectorXd form_diag;
};

Space Space::sphere(int dim, double curvature) {
  if (dim < 1) throw std::invalid_argument("Space::sphere: dim must be >= 1");
  if (!(curvature > 0.0)) throw std::invalid_argument("Space::sphere: curvature must be > 0");
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::sphere;
  n->dim = dim;
  n->curvature = curvature;
  n->ambient_dim = dim + 1;
  n->form_diag = Eigen::VectorXd::Ones(dim + 1);
  return Space(std::move(n));
}

Space Space::hyperbolic(int dim, double curvature) {
  if (dim < 1) throw std::invalid_argument("Space::hyperbolic: dim must be >= 1");
  if (!(curvature < 0.0)) throw std::invalid_argument("Space::hyperbolic: curvature must be < 0");
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::hyperbolic;
  n->dim = dim;
  n->curvature = curvature;
  n->ambient_dim = dim + 1;
  n->form_diag = Eigen::VectorXd::Ones(dim + 1);
  n->form_diag(0) = -1.0;  // Minkowski time coordinate
  return Space(std::move(n));
}

Space Space::euclidean(int dim) {
  if (dim < 1) throw std::invalid_argument("Space::euclidean: dim must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::euclidean;
  n->dim = dim;
  n->curvature = 0.0;
  n->ambient_dim = dim;
  n->form_diag = Eigen::VectorXd::Ones(dim);
  return Space(std::move(n));
}

Space Space::product(std::vector<Space> factors) {
  if (factors.empty()) throw std::invalid_argument("Space::product: no factors");
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::product;
  n->factors = std::move(factors);
  n->dim = 0;
  n->ambient_dim = 0;
  for (const Space& f : n->factors) {
    n->offsets.push_back(n->ambient_dim);
    n->dim += f.dim();
    n->ambient_dim += f.ambient_dim();
  }
  n->form_diag.resize(n->ambient_dim);
  for (std::size_t i = 0; i < n->factors.size(); ++i) {
    n->form_diag.segment(n->offsets[i], n->factors[i].ambient_dim()) =
        n->factors[i].form_diag();
  }
  return Space(std::move(n));
}

SpaceKind Space::kind() const { return node_->kind; }
int Space::dim() const { return node_->dim; }
int Space::ambient_dim() const { return node_->ambient_dim; }

double Space::curvature() const {
  if (is_product()) throw std::logic_error("Space::curvature: product space");
  return node_->curvature;
}

const std::vector<Space>& Space::factors() const {
  if (!is_product()) throw std::logic_error("Space::factors: not a product");
  return node_->factors;
}

int Space::factor_offset(int i) const {
  if (!is_product()) throw std::logic_error("Space::factor_offset: not a product");
  return node_->offsets.at(static_cast<std::size_t>(i));
}

const Eigen::VectorXd& Space::form_diag() const { return node_->form_diag; }

double Space::form(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (a.size() != ambient_dim() || b.size() != ambient_dim()) {
    throw std::invalid_argument("Space::form: coordinate size mismatch");
  }
  return a.cwiseProduct(node_->form_diag).dot(b);
}

double Space::membership_residual(const Eigen::VectorXd& x) const {
  if (x.size() != ambient_dim()) return std::numeric_limits<double>::infinity();
  switch (kind()) {
    case SpaceKind::euclidean:
      return 0.0;
    case SpaceKind::sphere:
      // Scale-invariant quadric residual; far hyperbolic points reach
      // coordinates ~e^s where the raw form cancels at eps * |x|^2.
      return std::abs(form(x, x) - 1.0 / curvature()) / (1.0 + x.squaredNorm());
    case SpaceKind::hyperbolic: {
      if (!(x(0) > 0.0)) return std::numeric_limits<double>::infinity();
      return std::abs(form(x, x) - 1.0 / curvature()) / (1.0 + x.squaredNorm());
    }
    case SpaceKind::product: {
      double worst = 0.0;
      for (std::size_t i = 0; i < node_->factors.size(); ++i) {
        const Space& f = node_->factors[i];
        worst = std::max(worst, f.membership_residual(
                                    x.segment(node_->offsets[i], f.ambient_dim())));
      }
      return worst;
    }
  }
  return std::numeric_limits<double>::infinity();
}

bool Space::contains(const Eigen::VectorXd& x, double tol) const {
  return membership_residual(x) <= tol;
}

double Space::tangency_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
  switch (kind()) {
    case SpaceKind::euclidean:
      return 0.0;
    case SpaceKind::sphere:
    case SpaceKind::hyperbolic:
      return std::abs(form(x, v)) / (1.0 + x.norm() * v.norm());
    case SpaceKind::product: {
      double worst = 0.0;
      for (std::size_t i = 0; i < node_->factors.size(); ++i) {
        const Space& f = node_->factors[i];
        worst = std::max(worst, f.tangency_residual(
                                    x.segment(node_->offsets[i], f.ambient_dim()),
                                    v.segment(node_->offsets[i], f.ambient_dim())));
      }
      return worst;
    }
  }
  return std::numeric_limits<double>::infinity();
}

Eigen::VectorXd Space::project_to_tangent(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& v) const {
  switch (kind()) {
    case SpaceKind::euclidean:
      return v;
    case SpaceKind::sphere:
    case SpaceKind::hyperbolic:
      // <x,x> = 1/c is never zero on the quadric.
      return v - x * (form(x, v) / form(x, x));
    case SpaceKind::product: {
      Eigen::VectorXd out(ambient_dim());
      for (std::size_t i = 0; i < node_->factors.size(); ++i) {
        const Space& f = node_->factors[i];
        out.segment(node_->offsets[i], f.ambient_dim()) = f.project_to_tangent(
            x.segment(node_->offsets[i], f.ambient_dim()),
            v.segment(node_->offsets[i], f.ambient_dim()));
      }
      return out;
    }
  }
  throw std::logic_error("Space::project_to_tangent: bad kind");
}

Eigen::VectorXd Space::pole() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ambient_dim());
  switch (kind()) {
    case SpaceKind::euclidean:
      break;
    case SpaceKind::sphere:
    case SpaceKind::hyperbolic:
      out(0) = 1.0 / std::sqrt(std::abs(curvature()));
      break;
    case SpaceKind::product:
      for (std::size_t i = 0; i < node_->factors.size(); ++i) {
        const Space& f = node_->factors[i];
        out.segment(node_->offsets[i], f.ambient_dim()) = f.pole();
      }
      break;
  }
  return out;
}

bool Space::same_as(const Space& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind() || dim() != other.dim()) return false;
  if (is_product()) {
    if (factors().size() != other.factors().size()) return false;
    for (std::size_t i = 0; i < factors().size(); ++i) {
      if (!factors()[i].same_as(other.factors()[i])) return false;
    }
    return true;
  }
  return curvature() == other.curvature();
}

std::string Space::describe() const {
  switch (kind()) {
    case SpaceKind::sphere:
      return "S^" + std::to_string(dim()) + "(" + number_str(curvature()) + ")";
    case SpaceKind::hyperbolic:
      return "H^" + std::to_string(dim()) + "(" + number_str(curvature()) + ")";
    case SpaceKind::euclidean:
      return "E^" + std::to_string(dim());
    case SpaceKind::product: {
      std::string s = "(";
      for (std::size_t i = 0; i < factors().size(); ++i) {
        if (i) s += " x ";
        s += factors()[i].describe();
      }
      return s + ")";
    }
  }
  return "?";
}

void require_member(const AmbientPoint& p, const char* who, double tol) {
  const double r = p.space.membership_residual(p.x);
  if (!(r <= tol)) {
    std::ostringstream msg;
    msg << who << ": point off " << p.space.describe() << " (residual " << r << ")";
    throw std::invalid_argument(msg.str());
  }
}

void require_tangent(const TangentVector& v, const char* who, double tol) {
  require_member({v.space, v.base}, who, tol);
  const double r = v.space.tangency_residual(v.base, v.v);
  if (!(r <= tol)) {
    std::ostringstream msg;
    msg << who << ": vector not tangent (residual " << r << ")";
    throw std::invalid_argument(msg.str());
  }
}

void require_unit_tangent(const TangentVector& v, const char* who, double tol) {
  require_tangent(v, who, tol);
  const double n = v.space.form(v.v, v.v);
  if (!(std::abs(n - 1.0) <= tol * (1.0 + v.v.squaredNorm()))) {
    std::ostringstream msg;
    msg << who << ": vector not unit (|v|^2 = " << n << ")";
    throw std::invalid_argument(msg.str());
  }
}

double metric(const TangentVector& v, const TangentVector& w) {
  if (!v.space.same_as(w.space)) {
    throw std::invalid_argument("metric: vectors live in different spaces");
  }
  const double scale = 1.0 + v.base.norm() + w.base.norm();
  if ((v.base - w.base).norm() > 1e-10 * scale) {
    throw std::invalid_argument("metric: base points differ");
  }
  return v.space.form(v.v, w.v);
}

namespace {

// Per-factor closed forms. A non-unit block v runs at speed |v|; with
// m = c <v,v> the unit-speed formulas collapse to
//   gamma(s)  = jacobi_cos(m, s) x + jacobi_sinc(m, s) v
//   gamma'(s) = -c <v,v> jacobi_sinc(m, s) x + jacobi_cos(m, s) v
// which are smooth through |v| = 0.
Eigen::VectorXd geodesic_coords(const Space& X, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& v, double s) {
  if (X.is_product()) {
    Eigen::VectorXd out(X.ambient_dim());
    for (std::size_t i = 0; i < X.factors().size(); ++i) {
      const Space& f = X.factors()[i];
      const int off = X.factor_offset(static_cast<int>(i));
      out.segment(off, f.ambient_dim()) =
          geodesic_coords(f, x.segment(off, f.ambient_dim()),
                          v.segment(off, f.ambient_dim()), s);
    }
    return out;
  }
  const double m = X.curvature() * X.form(v, v);
  return jacobi_cos(m, s) * x + jacobi_sinc(m, s) * v;
}

Eigen::VectorXd geodesic_velocity_coords(const Space& X, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& v, double s) {
  if (X.is_product()) {
    Eigen::VectorXd out(X.ambient_dim());
    for (std::size_t i = 0; i < X.factors().size(); ++i) {
      const Space& f = X.factors()[i];
      const int off = X.factor_offset(static_cast<int>(i));
      out.segment(off, f.ambient_dim()) =
          geodesic_velocity_coords(f, x.segment(off, f.ambient_dim()),
                                   v.segment(off, f.ambient_dim()), s);
    }
    return out;
  }
  const double vv = X.form(v, v);
  const double m = X.curvature() * vv;
  return -X.curvature() * vv * jacobi_sinc(m, s) * x + jacobi_cos(m, s) * v;
}

Eigen::VectorXd transport_coords(const Space& X, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& v, double s,
                                 const Eigen::VectorXd& w) {
  if (X.is_product()) {
    Eigen::VectorXd out(X.ambient_dim());
    for (std::size_t i = 0; i < X.factors().size(); ++i) {
      const Space& f = X.factors()[i];
      const int off = X.factor_offset(static_cast<int>(i));
      out.segment(off, f.ambient_dim()) =
          transport_coords(f, x.segment(off, f.ambient_dim()),
                           v.segment(off, f.ambient_dim()), s,
                           w.segment(off, f.ambient_dim()));
    }
    return out;
  }
  const double vv = X.form(v, v);
  if (vv == 0.0) return w;  // factor at rest
  const double m = X.curvature() * vv;
  const double beta = X.form(w, v);
  return w - X.curvature() * beta * jacobi_sinc(m, s) * x +
         (beta / vv) * jacobi_cosm1(m, s) * v;
}

void check_geodesic_inputs(const AmbientPoint& p, const TangentVector& v,
                           const char* who) {
  if (!p.space.same_as(v.space)) {
    throw std::invalid_argument(std::string(who) + ": point and vector spaces differ");
  }
  if ((p.x - v.base).norm() > 1e-10 * (1.0 + p.x.norm())) {
    throw std::invalid_argument(std::string(who) + ": vector not based at the point");
  }
  require_member(p, who);
  require_unit_tangent(v, who);
}

}  // namespace

AmbientPoint geodesic(const AmbientPoint& p, const TangentVector& v, double s) {
  check_geodesic_inputs(p, v, "geodesic");
  return {p.space, geodesic_coords(p.space, p.x, v.v, s)};
}

TangentVector geodesic_tangent(const AmbientPoint& p, const TangentVector& v, double s) {
  check_geodesic_inputs(p, v, "geodesic_tangent");
  return {p.space, geodesic_coords(p.space, p.x, v.v, s),
          geodesic_velocity_coords(p.space, p.x, v.v, s)};
}

TangentVector parallel_transport(const AmbientPoint& p, const TangentVector& v,
                                 double s, const TangentVector& w) {
  check_geodesic_inputs(p, v, "parallel_transport");
  require_tangent(w, "parallel_transport");
  if ((p.x - w.base).norm() > 1e-10 * (1.0 + p.x.norm())) {
    throw std::invalid_argument("parallel_transport: w not based at the point");
  }
  return {p.space, geodesic_coords(p.space, p.x, v.v, s),
          transport_coords(p.space, p.x, v.v, s, w.v)};
}

TangentVector apply_product_structure(const TangentVector& v) {
  if (!v.space.is_product() || v.space.factors().size() != 2) {
    throw std::invalid_argument(
        "apply_product_structure: needs a two-factor product space");
  }
  const int off = v.space.factor_offset(1);
  TangentVector out = v;
  out.v.segment(off, v.space.ambient_dim() - off) =
      -v.v.segment(off, v.space.ambient_dim() - off);
  return out;
}

Eigen::VectorXd curvature_vector(const Space& X, const Eigen::VectorXd& v,
                                 const Eigen::VectorXd& n) {
  if (X.is_product()) {
    Eigen::VectorXd out(X.ambient_dim());
    for (std::size_t i = 0; i < X.factors().size(); ++i) {
      const Space& f = X.factors()[i];
      const int off = X.factor_offset(static_cast<int>(i));
      out.segment(off, f.ambient_dim()) =
          curvature_vector(f, v.segment(off, f.ambient_dim()),
                           n.segment(off, f.ambient_dim()));
    }
    return out;
  }
  return X.curvature() * (X.form(n, n) * v - X.form(v, n) * n);
}

SymMatrix curvature_normal_operator(const AmbientPoint& p, const TangentVector& n,
                                    const Eigen::MatrixXd& frame) {
  require_unit_tangent(n, "curvature_normal_operator", 1e-9);
  if (frame.rows() != p.space.ambient_dim()) {
    throw std::invalid_argument("curvature_normal_operator: bad frame row count");
  }
  const int m = static_cast<int>(frame.cols());
  if (!p.space.is_product()) {
    // On a single space form the operator is c I on n-perp, exactly.
    return SymMatrix(p.space.curvature() * Eigen::MatrixXd::Identity(m, m));
  }
  Eigen::MatrixXd out(m, m);
  for (int a = 0; a < m; ++a) {
    const Eigen::VectorXd rv = curvature_vector(p.space, frame.col(a), n.v);
    for (int b = 0; b < m; ++b) out(b, a) = p.space.form(frame.col(b), rv);
  }
  return SymMatrix::symmetrized(out);
}

SymMatrix curvature_normal_operator(const AmbientPoint& p, const TangentVector& n) {
  return curvature_normal_operator(p, n, tangent_frame(p, n.v));
}

namespace {

Eigen::MatrixXd tangent_frame_impl(const AmbientPoint& p,
                                   const Eigen::VectorXd* normal) {
  require_member(p, "tangent_frame");
  const Space& X = p.space;
  const int D = X.ambient_dim();
  const int target = X.dim() - (normal ? 1 : 0);

  std::vector<Eigen::VectorXd> base;
  if (normal) base.push_back(*normal);

  std::vector<Eigen::VectorXd> cands;
  cands.reserve(D);
  for (int k = 0; k < D; ++k) {
    cands.push_back(X.project_to_tangent(p.x, Eigen::VectorXd::Unit(D, k)));
  }

  Eigen::MatrixXd out(D, target);
  std::vector<bool> used(cands.size(), false);
  for (int col = 0; col < target; ++col) {
    // Pivot on the candidate with the largest residual; ties keep the
    // lowest index, so the frame is reproducible.
    int best = -1;
    double best_norm2 = 1e-20;
    Eigen::VectorXd best_res;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      if (used[k]) continue;
      Eigen::VectorXd res = cands[k];
      for (int pass = 0; pass < 2; ++pass) {
        for (const Eigen::VectorXd& u : base) res -= u * X.form(u, res);
      }
      const double n2 = X.form(res, res);
      if (n2 > best_norm2) {
        best_norm2 = n2;
        best = static_cast<int>(k);
        best_res = std::move(res);
      }
    }
    if (best < 0) {
      throw std::runtime_error("tangent_frame: degenerate candidate set");
    }
    used[static_cast<std::size_t>(best)] = true;
    best_res /= std::sqrt(best_norm2);
    base.push_back(best_res);
    out.col(col) = best_res;
  }
  return out;
}

}  // namespace

Eigen::MatrixXd tangent_frame(const AmbientPoint& p) {
  return tangent_frame_impl(p, nullptr);
}

Eigen::MatrixXd tangent_frame(const AmbientPoint& p, const Eigen::VectorXd& normal) {
  return tangent_frame_impl(p, &normal);
}

}  // namespace catube
