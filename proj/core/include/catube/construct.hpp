#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "catube/hypersurface.hpp"

// Tube-style construction of curvature-adapted hypersurfaces in a product
// of two ambient spaces. Given curvature-adapted seeds M1 in X1, M2 in X2
// and a simple closed regular profile curve u(theta) = (u1, u2) around the
// origin, the map
//
//   f(p1, p2, theta) = (exp_1(u1(theta) N1), exp_2(u2(theta) N2))
//
// immerses M1 x M2 x S^1 into X1 x X2, with unit normal
//
//   N = (-u2' P1(N1), u1' P2(N2)) / |u'|
//
// (P_i parallel transport along the seed normal geodesics). The shape and
// normal Jacobi operators of the image diagonalize over the seeds' common
// eigenspaces: per factor-1 pair (lambda, mu) of M1,
//
//   A     : -(u2'/|u'|) (mu js + lambda jc) / (jc - lambda js)   at u1,
//   R(N)N :  u2'^2 mu / |u'|^2,
//
// symmetrically for factor 2 with a +u1'/|u'| prefix at u2, and on the
// theta direction the plane curvature (u1'u2'' - u1''u2') / |u'|^3 with
// Jacobi eigenvalue 0. jc/js are the matfun scalar branches; the scale
// jc - lambda js vanishing marks a focal point of the offset.

namespace catube {

class ProfileCurve {
 public:
  // u_i(theta) = constant + sum_m cos_coeffs[m-1] cos(m theta)
  //                       + sum_m sin_coeffs[m-1] sin(m theta)
  struct Component {
    double constant = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;
  };

  static ProfileCurve circle(double radius);
  static ProfileCurve ellipse(double a, double b);
  static ProfileCurve fourier(Component u1, Component u2);

  Eigen::Vector2d value(double theta) const;
  Eigen::Vector2d d1(double theta) const;
  Eigen::Vector2d d2(double theta) const;
  double max_radius_hint() const;  // coarse upper bound from coefficients
  const std::string& describe() const { return describe_; }

 private:
  ProfileCurve() = default;
  Component c1_, c2_;
  std::string describe_;
};

struct CurveDiagnostics {
  double closure_value = 0.0;  // |u(0) - u(2pi)|
  double closure_d1 = 0.0;
  double closure_d2 = 0.0;
  double min_speed = 0.0;      // min |u'| over the sample grid
  double max_radius = 0.0;     // max |u| over the sample grid
  int winding = 0;
  double focal_bound = 0.0;    // sampled infimum of seed focal radii
  double admissible = 0.0;     // 0.9 * focal_bound
  bool ok = false;
  std::string message;         // empty when ok
};

// Smallest |s| (either sign) with jc(mu,s) = lambda js(mu,s); +infinity when
// the offset never focalizes (e.g. horospheres).
double focal_radius(double lambda, double mu);

struct SampleOptions {
  int point_samples = 8;    // seed points sampled for the focal infimum
  int theta_samples = 256;
  std::uint64_t rng_seed = 0;
};

// Sampled infimum of focal_radius over the joint eigenpairs of both seeds,
// and the working bound 0.9 x that infimum.
double focal_infimum(const Hypersurface& m1, const Hypersurface& m2,
                     const SampleOptions& opt = {});
double admissible_radius(const Hypersurface& m1, const Hypersurface& m2,
                         const SampleOptions& opt = {});

// Closure at the seam (through the second derivative), regularity, winding
// number +1 about the origin (wrapped-angle sum over 4096 samples), and the
// admissibility margin. Does not throw; inspect `ok` / `message`.
CurveDiagnostics validate_curve(const ProfileCurve& curve, const Hypersurface& m1,
                                const Hypersurface& m2, const SampleOptions& opt = {});

// Scalar spectral pieces of the offset hypersurfaces.
double immersion_scale(double lambda, double mu, double offset);       // jc - lambda js
double shape_eigenvalue_scalar(double lambda, double mu, double offset);

struct NormalDecomposition {
  double rho1 = 0.0;  // = -u2'/|u'|
  double rho2 = 0.0;  // =  u1'/|u'|
};

// One row of the constructed spectra in stable order: factor-1 pairs in the
// seed's spectral order, then factor-2 pairs, then the theta direction.
struct TubeRow {
  int source = 0;       // 0: factor one, 1: factor two, 2: theta
  int seed_pair = -1;   // index into the seed's spectra; -1 for theta
  double seed_lambda = 0.0;
  double seed_mu = 0.0;
  double lambda = 0.0;  // constructed shape eigenvalue
  double mu = 0.0;      // constructed normal-Jacobi eigenvalue
  int multiplicity = 1;
};

class ConstructedHypersurface final : public Hypersurface {
 public:
  // Validates the curve against the seeds (throws std::invalid_argument with
  // the failing diagnostic). create_unchecked skips enforcement but still
  // records diagnostics.
  static std::shared_ptr<const ConstructedHypersurface> create(
      HypersurfacePtr m1, HypersurfacePtr m2, ProfileCurve curve,
      const SampleOptions& opt = {});
  static std::shared_ptr<const ConstructedHypersurface> create_unchecked(
      HypersurfacePtr m1, HypersurfacePtr m2, ProfileCurve curve);

  const Hypersurface& factor1() const { return *m1_; }
  const Hypersurface& factor2() const { return *m2_; }
  const ProfileCurve& profile() const { return curve_; }
  const CurveDiagnostics& diagnostics() const { return diag_; }

  // Parameters are concat(q1, q2, theta).
  Eigen::VectorXd make_param(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2,
                             double theta) const;
  void split_param(const Eigen::VectorXd& param, Eigen::VectorXd& q1,
                   Eigen::VectorXd& q2, double& theta) const;

  AmbientPoint tube_map(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2,
                        double theta) const;

  // Images of the canonical tangent directions (seed joint eigenvectors and
  // d/dtheta), unnormalized: factor columns carry the immersion scale, the
  // theta column has norm |u'|. Column order matches spectrum_rows.
  Eigen::MatrixXd tube_differential(const Eigen::VectorXd& q1,
                                    const Eigen::VectorXd& q2, double theta) const;

  std::pair<TangentVector, NormalDecomposition> unit_normal(
      const Eigen::VectorXd& q1, const Eigen::VectorXd& q2, double theta) const;

  // Product angle, closed form -(u1'^2 - u2'^2)/(u1'^2 + u2'^2), and the
  // independent route g(P N, N) through the product structure.
  double product_angle(double theta) const;
  double product_angle_via_structure(const Eigen::VectorXd& q1,
                                     const Eigen::VectorXd& q2, double theta) const;

  std::vector<TubeRow> spectrum_rows(const Eigen::VectorXd& q1,
                                     const Eigen::VectorXd& q2, double theta) const;

  // Joint spectral data of the constructed point: pairs carry the shape
  // eigenvalue in `lambda` and the normal-Jacobi eigenvalue in `mu`, so the
  // same decomposition serves both operators.
  SpectralData shape_spectrum(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2,
                              double theta) const;
  SpectralData normal_jacobi_spectrum(const Eigen::VectorXd& q1,
                                      const Eigen::VectorXd& q2, double theta) const;

  // Hypersurface interface (closure: the construction is itself a seed).
  int param_dim() const override;
  std::string describe() const override;
  Eigen::VectorXd random_param(CounterRng& rng) const override;
  PointNormal chart_eval(const Eigen::VectorXd& param,
                         const Eigen::VectorXd& t) const override;
  HypersurfacePointData point_data(const Eigen::VectorXd& param) const override;

 private:
  struct Assembly;
  ConstructedHypersurface(HypersurfacePtr m1, HypersurfacePtr m2, ProfileCurve curve);
  Assembly assemble(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2,
                    double theta) const;

  HypersurfacePtr m1_;
  HypersurfacePtr m2_;
  ProfileCurve curve_;
  CurveDiagnostics diag_;
};

HypersurfacePtr as_hypersurface(std::shared_ptr<const ConstructedHypersurface> c);

// Jacobi field along the normal geodesic of a seed hypersurface with initial
// data Y(0) = v0 tangent to the surface, Y'(0) = -A v0:
//   Y(s) = P( (spectral_cos(R,s) - spectral_sinc(R,s) A) v0 ).
TangentVector strongly_jacobi_field(const Hypersurface& h, const Eigen::VectorXd& param,
                                    const TangentVector& v0, double s);

// Totally geodesic flat section through (f1(p1), f2(p2)): the surface
// (s1, s2) -> (exp_1(s1 N1), exp_2(s2 N2)). Its induced metric is the flat
// ds1^2 + ds2^2, which the curvature oracle can confirm.
class FlatSectionChart {
 public:
  FlatSectionChart(PointNormal pn1, PointNormal pn2);
  AmbientPoint operator()(double s1, double s2) const;
  const Space& space() const { return product_; }

 private:
  PointNormal pn1_, pn2_;
  Space product_;
};

FlatSectionChart flat_section(const Hypersurface& m1, const Hypersurface& m2,
                              const Eigen::VectorXd& q1, const Eigen::VectorXd& q2);

}  // namespace catube
