#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>

#include "catube/matfun.hpp"
#include "catube/rng.hpp"
#include "catube/spaceform.hpp"

// Curvature-adapted seed hypersurfaces with closed-form pointwise data.
// Every surface provides, at a parametrized point: the embedded point, an
// orthonormal tangent frame, the unit normal N, the shape operator A, the
// normal Jacobi operator R(.,N)N and their common eigenspaces. The catalog
// (inward-normal convention, principal curvature lambda, Jacobi eigenvalue mu):
//
//   geodesic sphere, radius r   S^n(c): sqrt(c) cot(sqrt(c) r),  mu = c
//                               H^n(c): k coth(k r), k = sqrt(-c), mu = c
//                               E^n:    1/r,                      mu = 0
//   horosphere                  H^n(c): k,                        mu = c
//   equidistant, distance d     H^n(c): k tanh(k d),              mu = c
//   equator / hyperplane        any:    0,                        mu = c
//
// The shape operator follows the Weingarten convention A X = -(grad_X N)^T,
// so inward normals give positive sphere curvatures.

namespace catube {

struct PointNormal {
  AmbientPoint point;
  TangentVector normal;
};

struct HypersurfacePointData {
  AmbientPoint point;
  Eigen::MatrixXd frame;  // ambient_dim x m orthonormal tangent basis
  TangentVector normal;
  SymMatrix shape;          // in `frame`
  SymMatrix normal_jacobi;  // in `frame`
  SpectralData spectra;     // joint eigenspaces of the two, basis in frame coords

  // Map frame coordinates to an ambient tangent vector at `point`.
  TangentVector to_ambient(const Eigen::VectorXd& frame_coords) const;
};

class Hypersurface {
 public:
  virtual ~Hypersurface() = default;

  const Space& space() const { return space_; }
  int dim() const { return space_.dim() - 1; }

  virtual int param_dim() const = 0;
  virtual std::string describe() const = 0;
  virtual Eigen::VectorXd random_param(CounterRng& rng) const = 0;

  // Differentiable local parametrization around `param`: offset t ranges in
  // R^dim() with t = 0 giving the point itself. Returns the embedded point
  // and the unit normal there (closed form, no differencing).
  virtual PointNormal chart_eval(const Eigen::VectorXd& param,
                                 const Eigen::VectorXd& t) const = 0;

  virtual HypersurfacePointData point_data(const Eigen::VectorXd& param) const = 0;

  // Inverse lookup for catalog seeds: the parameter of an ambient point on
  // the surface. Throws with a distance diagnostic when p is off-surface.
  virtual Eigen::VectorXd param_near(const AmbientPoint& p, double tol = 1e-10) const;

  // Full pointwise data addressed by an ambient point (see param_near).
  HypersurfacePointData point_data_at(const AmbientPoint& p, double tol = 1e-10) const;

  // Normal exponential offset exp(r N) at the given parameter.
  AmbientPoint normal_offset(const Eigen::VectorXd& param, double r) const;

  // Chart as a plain coordinate map for finite-difference consumers.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> local_chart(
      const Eigen::VectorXd& param) const;

 protected:
  explicit Hypersurface(Space s) : space_(std::move(s)) {}
  Space space_;
};

using HypersurfacePtr = std::shared_ptr<const Hypersurface>;

// Catalog factories. Geodesic spheres default to the center at the pole;
// spherical ambients require 0 < radius < pi/sqrt(c). Horosphere and
// equidistant require a hyperbolic ambient; the horosphere's ideal direction
// is a spatial unit vector (default: first spatial axis) and equidistant /
// equator reflect across the hyperplane orthogonal to the last axis.
HypersurfacePtr make_geodesic_sphere(const Space& ambient, double radius);
HypersurfacePtr make_geodesic_sphere(const Space& ambient, double radius,
                                     const AmbientPoint& center);
HypersurfacePtr make_horosphere(const Space& ambient);
HypersurfacePtr make_horosphere(const Space& ambient,
                                const Eigen::VectorXd& spatial_direction);
HypersurfacePtr make_equidistant(const Space& ambient, double distance);
HypersurfacePtr make_equator(const Space& ambient);

}  // namespace catube
