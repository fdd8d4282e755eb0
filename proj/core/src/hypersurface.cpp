#include "catube/hypersurface.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace catube {

namespace {

double geodesic_distance(const Space& X, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b) {
  switch (X.kind()) {
    case SpaceKind::euclidean:
      return (a - b).norm();
    case SpaceKind::sphere: {
      const double k = std::sqrt(X.curvature());
      const double ca = std::clamp(X.curvature() * X.form(a, b), -1.0, 1.0);
      return std::acos(ca) / k;
    }
    case SpaceKind::hyperbolic: {
      const double k = std::sqrt(-X.curvature());
      const double ch = std::max(1.0, X.curvature() * X.form(a, b));
      return std::acosh(ch) / k;
    }
    case SpaceKind::product:
      break;
  }
  throw std::logic_error("geodesic_distance: leaf spaces only");
}

// Rescale v onto the quadric <x,x> = 1/c (identity on E^n).
Eigen::VectorXd rescale_to_quadric(const Space& X, const Eigen::VectorXd& v) {
  if (X.kind() == SpaceKind::euclidean) return v;
  const double q = X.form(v, v) * X.curvature();
  if (!(q > 0.0)) {
    throw std::invalid_argument("rescale_to_quadric: vector off the quadric cone");
  }
  return v / std::sqrt(q);
}

// Shared pointwise assembly for homogeneous catalog seeds: A = lambda I and
// the normal Jacobi operator is the ambient curvature operator (c I exactly
// on a single space form).
HypersurfacePointData homogeneous_point_data(const PointNormal& pn, double lambda) {
  HypersurfacePointData out{pn.point,
                            tangent_frame(pn.point, pn.normal.v),
                            pn.normal,
                            SymMatrix::identity(1),
                            SymMatrix::identity(1),
                            SpectralData{}};
  const int m = static_cast<int>(out.frame.cols());
  out.shape = SymMatrix(lambda * Eigen::MatrixXd::Identity(m, m));
  out.normal_jacobi = curvature_normal_operator(pn.point, pn.normal, out.frame);
  out.spectra = joint_eigenspaces(out.shape, out.normal_jacobi);
  return out;
}

void require_leaf_ambient(const Space& ambient, const char* who) {
  if (ambient.is_product()) {
    throw std::invalid_argument(std::string(who) +
                                ": catalog seeds need a single space form ambient");
  }
  if (ambient.dim() < 2) {
    throw std::invalid_argument(std::string(who) +
                                ": ambient dimension must be at least 2");
  }
}

}  // namespace

TangentVector HypersurfacePointData::to_ambient(const Eigen::VectorXd& frame_coords) const {
  if (frame_coords.size() != frame.cols()) {
    throw std::invalid_argument("to_ambient: coordinate size mismatch");
  }
  return {point.space, point.x, frame * frame_coords};
}

Eigen::VectorXd Hypersurface::param_near(const AmbientPoint&, double) const {
  throw std::runtime_error(describe() + ": ambient-point parameter lookup not supported");
}

HypersurfacePointData Hypersurface::point_data_at(const AmbientPoint& p, double tol) const {
  return point_data(param_near(p, tol));
}

AmbientPoint Hypersurface::normal_offset(const Eigen::VectorXd& param, double r) const {
  const PointNormal pn = chart_eval(param, Eigen::VectorXd::Zero(dim()));
  return geodesic(pn.point, pn.normal, r);
}

std::function<Eigen::VectorXd(const Eigen::VectorXd&)> Hypersurface::local_chart(
    const Eigen::VectorXd& param) const {
  return [this, param](const Eigen::VectorXd& t) { return chart_eval(param, t).point.x; };
}

// ---------------------------------------------------------------------------
// Geodesic sphere: points at distance r from a center, parametrized by the
// unit direction at the center. Inward normal (toward the center).

namespace {

class GeodesicSphere final : public Hypersurface {
 public:
  GeodesicSphere(Space ambient, double radius, AmbientPoint center)
      : Hypersurface(ambient), radius_(radius), center_(std::move(center)) {
    require_leaf_ambient(ambient, "geodesic_sphere");
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw std::invalid_argument("geodesic_sphere: radius must be positive");
    }
    if (ambient.kind() == SpaceKind::sphere) {
      const double limit = std::numbers::pi / std::sqrt(ambient.curvature());
      if (!(radius < limit)) {
        std::ostringstream msg;
        msg << "geodesic_sphere: radius " << radius << " not in (0, " << limit
            << ") for " << ambient.describe();
        throw std::invalid_argument(msg.str());
      }
    }
    require_member(center_, "geodesic_sphere center");
    const double c = ambient.curvature();
    if (ambient.kind() == SpaceKind::sphere) {
      const double k = std::sqrt(c);
      lambda_ = k * std::cos(k * radius) / std::sin(k * radius);
    } else if (ambient.kind() == SpaceKind::hyperbolic) {
      const double k = std::sqrt(-c);
      lambda_ = k * std::cosh(k * radius) / std::sinh(k * radius);
    } else {
      lambda_ = 1.0 / radius;
    }
  }

  int param_dim() const override { return space_.ambient_dim(); }

  std::string describe() const override {
    std::ostringstream os;
    os << "geodesic_sphere(r=" << radius_ << ") in " << space_.describe();
    return os.str();
  }

  Eigen::VectorXd random_param(CounterRng& rng) const override {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Eigen::VectorXd g(space_.ambient_dim());
      for (int i = 0; i < g.size(); ++i) g(i) = rng.next_gauss();
      const Eigen::VectorXd w = space_.project_to_tangent(center_.x, g);
      if (space_.form(w, w) > 1e-12) return w;
    }
    throw std::runtime_error("geodesic_sphere: failed to sample a direction");
  }

  PointNormal chart_eval(const Eigen::VectorXd& param,
                         const Eigen::VectorXd& t) const override {
    const Eigen::VectorXd w0 = unit_direction(param);
    Eigen::VectorXd w = w0;
    if (t.size() != dim()) {
      throw std::invalid_argument("geodesic_sphere: chart offset has wrong size");
    }
    if (!t.isZero(0.0)) {
      const Eigen::MatrixXd basis =
          tangent_frame(AmbientPoint{space_, center_.x}, w0);
      w += basis * t;
      w /= std::sqrt(space_.form(w, w));
    }
    const TangentVector dir{space_, center_.x, w};
    const TangentVector vel = geodesic_tangent(center_, dir, radius_);
    return {AmbientPoint{space_, vel.base}, TangentVector{space_, vel.base, -vel.v}};
  }

  HypersurfacePointData point_data(const Eigen::VectorXd& param) const override {
    return homogeneous_point_data(chart_eval(param, Eigen::VectorXd::Zero(dim())),
                                  lambda_);
  }

  Eigen::VectorXd param_near(const AmbientPoint& p, double tol) const override {
    require_member(p, "geodesic_sphere::param_near");
    const double d = geodesic_distance(space_, center_.x, p.x);
    if (std::abs(d - radius_) > tol) {
      std::ostringstream msg;
      msg << "geodesic_sphere::param_near: point at distance " << d
          << " from the center, surface radius " << radius_ << " (off by "
          << std::abs(d - radius_) << ")";
      throw std::invalid_argument(msg.str());
    }
    Eigen::VectorXd w;
    if (space_.kind() == SpaceKind::euclidean) {
      w = p.x - center_.x;
    } else {
      w = space_.project_to_tangent(center_.x, p.x);
    }
    return w;
  }

 private:
  Eigen::VectorXd unit_direction(const Eigen::VectorXd& raw) const {
    if (raw.size() != space_.ambient_dim()) {
      throw std::invalid_argument("geodesic_sphere: parameter size mismatch");
    }
    const Eigen::VectorXd w = space_.project_to_tangent(center_.x, raw);
    const double n2 = space_.form(w, w);
    if (!(n2 > 1e-16)) {
      throw std::invalid_argument("geodesic_sphere: degenerate direction parameter");
    }
    return w / std::sqrt(n2);
  }

  double radius_;
  AmbientPoint center_;
  double lambda_ = 0.0;
};

// ---------------------------------------------------------------------------
// Horosphere in H^n(c), level surface of the Busemann function of the null
// direction xi = (1, d). Chart over R^{n-1}: with a = |z|^2 / (2 R^2),
//   x(z) = R (1 + a) e_time + R a d + sum_j z_j b_j,
// where {b_j} is a spatial orthonormal basis of d-perp. Normal points at the
// ideal point: N = -k x - xi / (k <xi, x>).

class Horosphere final : public Hypersurface {
 public:
  Horosphere(Space ambient, Eigen::VectorXd spatial_direction)
      : Hypersurface(ambient) {
    require_leaf_ambient(ambient, "horosphere");
    if (ambient.kind() != SpaceKind::hyperbolic) {
      throw std::invalid_argument("horosphere: ambient must be hyperbolic");
    }
    const int n = ambient.dim();
    if (spatial_direction.size() != n) {
      throw std::invalid_argument("horosphere: direction must have spatial size n");
    }
    const double dn = spatial_direction.norm();
    if (!(dn > 1e-12)) {
      throw std::invalid_argument("horosphere: direction must be nonzero");
    }
    spatial_direction /= dn;

    k_ = std::sqrt(-ambient.curvature());
    radius_scale_ = 1.0 / k_;
    xi_ = Eigen::VectorXd::Zero(n + 1);
    xi_(0) = 1.0;
    xi_.tail(n) = spatial_direction;
    dir_ambient_ = Eigen::VectorXd::Zero(n + 1);
    dir_ambient_.tail(n) = spatial_direction;

    // Deterministic spatial basis of d-perp.
    basis_ = Eigen::MatrixXd::Zero(n + 1, n - 1);
    int col = 0;
    std::vector<Eigen::VectorXd> base{spatial_direction};
    for (int axis = 0; axis < n && col < n - 1; ++axis) {
      Eigen::VectorXd r = Eigen::VectorXd::Unit(n, axis);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : base) r -= u * u.dot(r);
      }
      const double rn = r.norm();
      if (rn > 1e-8) {
        r /= rn;
        base.push_back(r);
        basis_.col(col).tail(n) = r;
        ++col;
      }
    }
    if (col != n - 1) throw std::runtime_error("horosphere: basis construction failed");
  }

  int param_dim() const override { return dim(); }

  std::string describe() const override {
    return "horosphere in " + space_.describe();
  }

  Eigen::VectorXd random_param(CounterRng& rng) const override {
    Eigen::VectorXd z(dim());
    for (int i = 0; i < z.size(); ++i) z(i) = radius_scale_ * rng.next_gauss();
    return z;
  }

  PointNormal chart_eval(const Eigen::VectorXd& param,
                         const Eigen::VectorXd& t) const override {
    if (param.size() != dim() || t.size() != dim()) {
      throw std::invalid_argument("horosphere: parameter size mismatch");
    }
    const Eigen::VectorXd z = param + t;
    const double R = radius_scale_;
    const double a = z.squaredNorm() / (2.0 * R * R);
    Eigen::VectorXd x = R * (1.0 + a) * Eigen::VectorXd::Unit(space_.ambient_dim(), 0) +
                        R * a * dir_ambient_ + basis_ * z;
    const double pairing = space_.form(xi_, x);  // negative on the sheet
    Eigen::VectorXd nv = -k_ * x - xi_ / (k_ * pairing);
    return {AmbientPoint{space_, x}, TangentVector{space_, x, nv}};
  }

  HypersurfacePointData point_data(const Eigen::VectorXd& param) const override {
    return homogeneous_point_data(chart_eval(param, Eigen::VectorXd::Zero(dim())), k_);
  }

  Eigen::VectorXd param_near(const AmbientPoint& p, double tol) const override {
    require_member(p, "horosphere::param_near");
    Eigen::VectorXd z(dim());
    for (int j = 0; j < z.size(); ++j) z(j) = basis_.col(j).dot(p.x);
    const PointNormal pn = chart_eval(z, Eigen::VectorXd::Zero(dim()));
    const double d = geodesic_distance(space_, p.x, pn.point.x);
    if (d > tol) {
      std::ostringstream msg;
      msg << "horosphere::param_near: point off the surface by distance " << d;
      throw std::invalid_argument(msg.str());
    }
    return z;
  }

 private:
  double k_ = 1.0;
  double radius_scale_ = 1.0;
  Eigen::VectorXd xi_;          // null vector of the ideal point
  Eigen::VectorXd dir_ambient_; // spatial ideal direction, ambient coords
  Eigen::MatrixXd basis_;       // ambient columns spanning d-perp (spatial)
};

// ---------------------------------------------------------------------------
// Equidistant surface at distance d from the totally geodesic hyperplane
// orthogonal to the last axis w:
//   x(zeta) = cosh(k d) y(zeta) + R sinh(k d) w,
//   y(zeta) = (sqrt(R^2 + |zeta|^2), zeta, 0).
// Normal points back toward the hyperplane: N = -(k sinh(k d) y + cosh(k d) w).

class Equidistant final : public Hypersurface {
 public:
  Equidistant(Space ambient, double distance)
      : Hypersurface(ambient), distance_(distance) {
    require_leaf_ambient(ambient, "equidistant");
    if (ambient.kind() != SpaceKind::hyperbolic) {
      throw std::invalid_argument("equidistant: ambient must be hyperbolic");
    }
    if (!(distance >= 0.0) || !std::isfinite(distance)) {
      throw std::invalid_argument("equidistant: distance must be >= 0");
    }
    k_ = std::sqrt(-ambient.curvature());
    lambda_ = k_ * std::tanh(k_ * distance);
  }

  int param_dim() const override { return dim(); }

  std::string describe() const override {
    std::ostringstream os;
    os << "equidistant(d=" << distance_ << ") in " << space_.describe();
    return os.str();
  }

  Eigen::VectorXd random_param(CounterRng& rng) const override {
    Eigen::VectorXd z(dim());
    for (int i = 0; i < z.size(); ++i) z(i) = rng.next_gauss() / k_;
    return z;
  }

  PointNormal chart_eval(const Eigen::VectorXd& param,
                         const Eigen::VectorXd& t) const override {
    if (param.size() != dim() || t.size() != dim()) {
      throw std::invalid_argument("equidistant: parameter size mismatch");
    }
    const Eigen::VectorXd zeta = param + t;
    const int D = space_.ambient_dim();
    const double R = 1.0 / k_;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(D);
    y(0) = std::sqrt(R * R + zeta.squaredNorm());
    y.segment(1, dim()) = zeta;
    const Eigen::VectorXd w = Eigen::VectorXd::Unit(D, D - 1);
    const double ch = std::cosh(k_ * distance_);
    const double sh = std::sinh(k_ * distance_);
    Eigen::VectorXd x = ch * y + R * sh * w;
    Eigen::VectorXd nv = -(k_ * sh * y + ch * w);
    return {AmbientPoint{space_, x}, TangentVector{space_, x, nv}};
  }

  HypersurfacePointData point_data(const Eigen::VectorXd& param) const override {
    return homogeneous_point_data(chart_eval(param, Eigen::VectorXd::Zero(dim())),
                                  lambda_);
  }

  Eigen::VectorXd param_near(const AmbientPoint& p, double tol) const override {
    require_member(p, "equidistant::param_near");
    const int D = space_.ambient_dim();
    const double side = k_ * p.x(D - 1);  // k <x, w> = sinh(k s)
    const double s = std::asinh(side) / k_;
    if (std::abs(s - distance_) > tol) {
      std::ostringstream msg;
      msg << "equidistant::param_near: signed distance " << s
          << " from the hyperplane, surface at " << distance_ << " (off by "
          << std::abs(s - distance_) << ")";
      throw std::invalid_argument(msg.str());
    }
    const double ch = std::cosh(k_ * distance_);
    return p.x.segment(1, dim()) / ch;
  }

 private:
  double distance_;
  double k_ = 1.0;
  double lambda_ = 0.0;
};

// ---------------------------------------------------------------------------
// Equator: the totally geodesic hypersurface fixed by reflection across the
// hyperplane orthogonal to the last ambient axis. Constant normal w.

class Equator final : public Hypersurface {
 public:
  explicit Equator(Space ambient) : Hypersurface(ambient) {
    require_leaf_ambient(ambient, "equator");
  }

  int param_dim() const override { return space_.ambient_dim(); }

  std::string describe() const override {
    return "equator in " + space_.describe();
  }

  Eigen::VectorXd random_param(CounterRng& rng) const override {
    const int D = space_.ambient_dim();
    Eigen::VectorXd g(D);
    for (int i = 0; i < D; ++i) g(i) = rng.next_gauss();
    g(D - 1) = 0.0;
    if (space_.kind() == SpaceKind::hyperbolic) {
      const double R = 1.0 / std::sqrt(-space_.curvature());
      g(0) = std::sqrt(R * R + g.segment(1, dim()).squaredNorm());
      return g;
    }
    if (space_.kind() == SpaceKind::sphere) {
      if (g.norm() < 1e-8) g(0) = 1.0;
      return rescale_to_quadric(space_, g);
    }
    return g;
  }

  PointNormal chart_eval(const Eigen::VectorXd& param,
                         const Eigen::VectorXd& t) const override {
    const int D = space_.ambient_dim();
    if (param.size() != D || t.size() != dim()) {
      throw std::invalid_argument("equator: parameter size mismatch");
    }
    const Eigen::VectorXd w = Eigen::VectorXd::Unit(D, D - 1);
    Eigen::VectorXd x0 = param;
    x0(D - 1) = 0.0;
    x0 = rescale_to_quadric(space_, x0);
    Eigen::VectorXd x = x0;
    if (!t.isZero(0.0)) {
      const Eigen::MatrixXd basis = tangent_frame(AmbientPoint{space_, x0}, w);
      x = rescale_to_quadric(space_, x0 + basis * t);
    }
    return {AmbientPoint{space_, x}, TangentVector{space_, x, w}};
  }

  HypersurfacePointData point_data(const Eigen::VectorXd& param) const override {
    return homogeneous_point_data(chart_eval(param, Eigen::VectorXd::Zero(dim())), 0.0);
  }

  Eigen::VectorXd param_near(const AmbientPoint& p, double tol) const override {
    require_member(p, "equator::param_near");
    const int D = space_.ambient_dim();
    Eigen::VectorXd x0 = p.x;
    x0(D - 1) = 0.0;
    x0 = rescale_to_quadric(space_, x0);
    const double d = geodesic_distance(space_, p.x, x0);
    if (d > tol) {
      std::ostringstream msg;
      msg << "equator::param_near: point off the surface by distance " << d;
      throw std::invalid_argument(msg.str());
    }
    return x0;
  }
};

}  // namespace

HypersurfacePtr make_geodesic_sphere(const Space& ambient, double radius) {
  return make_geodesic_sphere(ambient, radius, AmbientPoint{ambient, ambient.pole()});
}

HypersurfacePtr make_geodesic_sphere(const Space& ambient, double radius,
                                     const AmbientPoint& center) {
  return std::make_shared<GeodesicSphere>(ambient, radius, center);
}

HypersurfacePtr make_horosphere(const Space& ambient) {
  if (ambient.is_product() || ambient.dim() < 1) {
    throw std::invalid_argument("horosphere: ambient must be hyperbolic");
  }
  return std::make_shared<Horosphere>(ambient,
                                      Eigen::VectorXd::Unit(ambient.dim(), 0));
}

HypersurfacePtr make_horosphere(const Space& ambient,
                                const Eigen::VectorXd& spatial_direction) {
  return std::make_shared<Horosphere>(ambient, spatial_direction);
}

HypersurfacePtr make_equidistant(const Space& ambient, double distance) {
  return std::make_shared<Equidistant>(ambient, distance);
}

HypersurfacePtr make_equator(const Space& ambient) {
  return std::make_shared<Equator>(ambient);
}

}  // namespace catube
