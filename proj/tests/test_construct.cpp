#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "catube/construct.hpp"
#include "catube/oracle.hpp"
#include "catube/rng.hpp"

using namespace catube;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<const ConstructedHypersurface> sphere_sphere_scene(double r = 0.1) {
  const Space s2 = Space::sphere(2, 1.0);
  return ConstructedHypersurface::create(make_geodesic_sphere(s2, 0.5),
                                         make_geodesic_sphere(s2, 0.5),
                                         ProfileCurve::circle(r));
}

std::shared_ptr<const ConstructedHypersurface> sphere_hyperbolic_scene() {
  return ConstructedHypersurface::create(
      make_geodesic_sphere(Space::sphere(2, 1.0), 0.5),
      make_geodesic_sphere(Space::hyperbolic(2, -1.0), 0.5), ProfileCurve::circle(0.1));
}

}  // namespace

TEST_CASE("profile curves: circle and ellipse diagnostics") {
  const Space s2 = Space::sphere(2, 1.0);
  const HypersurfacePtr m = make_geodesic_sphere(s2, 0.5);

  const CurveDiagnostics dc = validate_curve(ProfileCurve::circle(0.1), *m, *m);
  CHECK(dc.ok);
  CHECK(dc.winding == 1);
  CHECK(dc.min_speed == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(dc.max_radius == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(dc.closure_value <= 1e-12);
  CHECK(dc.closure_d1 <= 1e-12);
  CHECK(dc.closure_d2 <= 1e-12);

  const CurveDiagnostics de = validate_curve(ProfileCurve::ellipse(0.1, 0.05), *m, *m);
  CHECK(de.ok);
  CHECK(de.winding == 1);
  CHECK(de.min_speed == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("curve admissibility: focal bound names the failure") {
  const Space s2 = Space::sphere(2, 1.0);
  const HypersurfacePtr m = make_geodesic_sphere(s2, 0.5);
  const CurveDiagnostics bad = validate_curve(ProfileCurve::circle(0.6), *m, *m);
  CHECK_FALSE(bad.ok);
  CHECK(bad.message.find("focal bound 0.5") != std::string::npos);
  CHECK(bad.message.find("0.6") != std::string::npos);
  CHECK(bad.focal_bound == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bad.admissible == doctest::Approx(0.45).epsilon(1e-12));

  CHECK(validate_curve(ProfileCurve::circle(0.44), *m, *m).ok);
  CHECK_THROWS_AS(ConstructedHypersurface::create(m, m, ProfileCurve::circle(0.6)),
                  std::invalid_argument);
  CHECK_NOTHROW(ConstructedHypersurface::create(m, m, ProfileCurve::circle(0.44)));
}

TEST_CASE("curve rejection: winding and regularity") {
  const Space s2 = Space::sphere(2, 1.0);
  const HypersurfacePtr m = make_geodesic_sphere(s2, 0.5);

  // Clockwise circle: winding -1.
  ProfileCurve::Component c1, c2;
  c1.cos_coeffs = {0.1};
  c2.sin_coeffs = {-0.1};
  const CurveDiagnostics rev = validate_curve(ProfileCurve::fourier(c1, c2), *m, *m);
  CHECK_FALSE(rev.ok);
  CHECK(rev.winding == -1);
  CHECK(rev.message.find("winding") != std::string::npos);

  // Off-center circle that misses the origin: winding 0.
  ProfileCurve::Component o1, o2;
  o1.constant = 0.3;
  o1.cos_coeffs = {0.1};
  o2.sin_coeffs = {0.1};
  const CurveDiagnostics off = validate_curve(ProfileCurve::fourier(o1, o2), *m, *m);
  CHECK_FALSE(off.ok);
  CHECK(off.winding == 0);
}

TEST_CASE("focal_radius closed forms") {
  const double cot_half = std::cos(0.5) / std::sin(0.5);
  const double coth_half = std::cosh(0.5) / std::sinh(0.5);
  CHECK(focal_radius(cot_half, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(focal_radius(coth_half, -1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(focal_radius(1.0, -1.0) == kInf);
  CHECK(focal_radius(0.5, -1.0) == kInf);
  CHECK(focal_radius(0.0, 1.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
  CHECK(focal_radius(10.0, 0.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(focal_radius(0.0, 0.0) == kInf);
  // Negative lambda: the nearest root sits on the negative side.
  const double cot_04 = std::cos(0.4) / std::sin(0.4);
  CHECK(focal_radius(-cot_04, 1.0) == doctest::Approx(0.4).epsilon(1e-13));
  CHECK_THROWS_AS(focal_radius(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("admissible_radius across seed pairs") {
  const HypersurfacePtr gs_s = make_geodesic_sphere(Space::sphere(2, 1.0), 0.5);
  const HypersurfacePtr gs_h = make_geodesic_sphere(Space::hyperbolic(2, -1.0), 0.5);
  CHECK(admissible_radius(*gs_s, *gs_h) == doctest::Approx(0.45).epsilon(1e-12));

  const HypersurfacePtr horo = make_horosphere(Space::hyperbolic(2, -1.0));
  CHECK(admissible_radius(*horo, *horo) == kInf);

  const HypersurfacePtr eq = make_equator(Space::sphere(2, 1.0));
  CHECK(admissible_radius(*eq, *eq) ==
        doctest::Approx(1.4137166941154069).epsilon(1e-14));
}

TEST_CASE("tube_map: offsets, zero components, membership") {
  const auto tube = sphere_sphere_scene();
  const Space s2 = Space::sphere(2, 1.0);
  CounterRng rng(41, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);

  const HypersurfacePointData pd1 = tube->factor1().point_data(q1);
  const HypersurfacePointData pd2 = tube->factor2().point_data(q2);

  for (double theta : {0.0, 0.8, 2.5}) {
    const Eigen::Vector2d u = tube->profile().value(theta);
    const AmbientPoint x = tube->tube_map(q1, q2, theta);
    const Eigen::Vector3d x1 = x.x.head(3);
    const Eigen::Vector3d x2 = x.x.tail(3);
    const double d1 = std::acos(std::clamp(s2.form(x1, pd1.point.x), -1.0, 1.0));
    const double d2 = std::acos(std::clamp(s2.form(x2, pd2.point.x), -1.0, 1.0));
    CHECK(d1 == doctest::Approx(std::abs(u(0))).epsilon(1e-10));
    CHECK(d2 == doctest::Approx(std::abs(u(1))).epsilon(1e-10));
  }

  // theta = pi/2 on the circle: u = (0, r), first factor untouched.
  const AmbientPoint x = tube->tube_map(q1, q2, M_PI / 2.0);
  CHECK((x.x.head(3) - pd1.point.x).norm() <= 1e-12);

  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd p = tube->random_param(rng);
    Eigen::VectorXd a, b;
    double theta;
    tube->split_param(p, a, b, theta);
    CHECK(tube->space().membership_residual(tube->tube_map(a, b, theta).x) <= 1e-10);
  }
}

TEST_CASE("tube_differential: scales, theta column norm") {
  CHECK(immersion_scale(1.7, 0.9, 0.0) == 1.0);
  CHECK(immersion_scale(-0.3, -2.0, 0.0) == 1.0);

  const double cot_half = std::cos(0.5) / std::sin(0.5);
  CHECK(immersion_scale(cot_half, 1.0, 0.1) ==
        doctest::Approx(0.81226032188940334).epsilon(1e-14));
  CHECK(immersion_scale(cot_half, 1.0, 0.1) ==
        doctest::Approx(std::sin(0.4) / std::sin(0.5)).epsilon(1e-14));

  const auto tube = sphere_sphere_scene();
  CounterRng rng(42, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);

  for (double theta : {0.0, 0.7, M_PI / 2.0, 4.0}) {
    const Eigen::MatrixXd diff = tube->tube_differential(q1, q2, theta);
    const Eigen::Vector2d u = tube->profile().value(theta);
    const Eigen::Vector2d du = tube->profile().d1(theta);
    REQUIRE(diff.cols() == 3);
    // Factor columns carry the immersion scale of their pair.
    CHECK(diff.col(0).norm() ==
          doctest::Approx(std::abs(immersion_scale(cot_half, 1.0, u(0)))).epsilon(1e-12));
    CHECK(diff.col(1).norm() ==
          doctest::Approx(std::abs(immersion_scale(cot_half, 1.0, u(1)))).epsilon(1e-12));
    CHECK(diff.col(2).norm() == doctest::Approx(du.norm()).epsilon(1e-12));
  }

  // At theta = pi/2 the first offset is ~0, so the first factor scale is ~1.
  const Eigen::MatrixXd diff = tube->tube_differential(q1, q2, M_PI / 2.0);
  CHECK(diff.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit_normal: decomposition, orthogonality, unit norm") {
  const auto tube = sphere_sphere_scene();
  CounterRng rng(43, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);

  const auto [n0, rho0] = tube->unit_normal(q1, q2, 0.0);
  CHECK(rho0.rho1 == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(rho0.rho2 == doctest::Approx(0.0).epsilon(1e-15));

  for (double theta : {0.0, 1.1, 3.9, 5.6}) {
    const auto [n, rho] = tube->unit_normal(q1, q2, theta);
    CHECK(std::abs(rho.rho1 * rho.rho1 + rho.rho2 * rho.rho2 - 1.0) <= 1e-12);
    const Eigen::Vector2d du = tube->profile().d1(theta);
    CHECK(std::abs(rho.rho1 * du(0) + rho.rho2 * du(1)) <= 1e-12);
    CHECK(std::abs(tube->space().form(n.v, n.v) - 1.0) <= 1e-12);
    const Eigen::MatrixXd diff = tube->tube_differential(q1, q2, theta);
    for (int j = 0; j < diff.cols(); ++j) {
      CHECK(std::abs(tube->space().form(n.v, diff.col(j))) <= 1e-10);
    }
  }
}

TEST_CASE("product angle: closed form and structural route") {
  const auto tube = sphere_sphere_scene();
  CounterRng rng(44, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);

  CHECK(tube->product_angle(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(tube->product_angle(M_PI / 4.0)) <= 1e-13);
  for (int i = 0; i < 64; ++i) {
    const double theta = kTwoPi * i / 64;
    CHECK(std::abs(tube->product_angle(theta) - std::cos(2.0 * theta)) <= 1e-12);
    CHECK(std::abs(tube->product_angle(theta) -
                   tube->product_angle_via_structure(q1, q2, theta)) <= 1e-10);
  }

  // |C| <= 1 for a non-circular curve too.
  const Space s2 = Space::sphere(2, 1.0);
  const auto ellipse_tube = ConstructedHypersurface::create(
      make_geodesic_sphere(s2, 0.5), make_geodesic_sphere(s2, 0.5),
      ProfileCurve::ellipse(0.1, 0.05));
  for (int i = 0; i < 64; ++i) {
    CHECK(std::abs(ellipse_tube->product_angle(kTwoPi * i / 64)) <= 1.0 + 1e-14);
  }
}

TEST_CASE("shape spectrum rows: frozen values on the reference scenes") {
  const auto tube = sphere_sphere_scene();
  CounterRng rng(45, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);

  const auto rows = tube->spectrum_rows(q1, q2, 0.0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].source == 0);
  CHECK(rows[0].lambda == doctest::Approx(-2.3652224200391103).epsilon(1e-12));
  CHECK(rows[0].mu == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rows[1].source == 1);
  CHECK(rows[1].lambda == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rows[1].mu == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rows[2].source == 2);
  CHECK(rows[2].lambda == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(rows[2].mu == 0.0);

  // Hyperbolic second factor at theta = pi/2: u = (0, 0.1), prefix -1.
  const auto mixed = sphere_hyperbolic_scene();
  const Eigen::VectorXd p1 = mixed->factor1().random_param(rng);
  const Eigen::VectorXd p2 = mixed->factor2().random_param(rng);
  const auto mrows = mixed->spectrum_rows(p1, p2, M_PI / 2.0);
  REQUIRE(mrows.size() == 3);
  CHECK(mrows[1].source == 1);
  CHECK(mrows[1].lambda == doctest::Approx(-2.6319324418321881).epsilon(1e-11));
}

TEST_CASE("normal Jacobi rows: transverse-speed weights") {
  const auto tube = sphere_sphere_scene();
  CounterRng rng(46, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);

  const auto rows0 = tube->spectrum_rows(q1, q2, 0.0);
  CHECK(rows0[0].mu == doctest::Approx(1.0).epsilon(1e-14));  // u2'^2 mu / |u'|^2
  CHECK(rows0[1].mu == doctest::Approx(0.0).epsilon(1e-15));

  // Equal split at theta = pi/4 where u1' = -u2' in magnitude.
  const auto rows45 = tube->spectrum_rows(q1, q2, M_PI / 4.0);
  CHECK(rows45[0].mu == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rows45[1].mu == doctest::Approx(0.5).epsilon(1e-12));

  for (int i = 0; i < 32; ++i) {
    const auto rows = tube->spectrum_rows(q1, q2, kTwoPi * i / 32);
    CHECK(rows.back().source == 2);
    CHECK(rows.back().mu == 0.0);
  }
}

TEST_CASE("strongly_jacobi_field: initial data, focal zero, scalar value") {
  const HypersurfacePtr gs = make_geodesic_sphere(Space::sphere(2, 1.0), 0.5);
  CounterRng rng(47, 0);
  const Eigen::VectorXd q = gs->random_param(rng);
  const HypersurfacePointData pd = gs->point_data(q);
  const TangentVector v0 = pd.to_ambient(Eigen::VectorXd::Ones(1));

  const TangentVector y0 = strongly_jacobi_field(*gs, q, v0, 0.0);
  CHECK((y0.v - v0.v).norm() <= 1e-14);

  // Focal point of the r = 0.5 geodesic sphere at the center.
  const TangentVector yfocal = strongly_jacobi_field(*gs, q, v0, 0.5);
  CHECK(yfocal.v.norm() <= 1e-12);

  const TangentVector y = strongly_jacobi_field(*gs, q, v0, 0.1);
  CHECK(y.v.norm() == doctest::Approx(0.81226032188940334).epsilon(1e-12));
}

TEST_CASE("strongly_jacobi_field satisfies the Jacobi equation (second differences)") {
  const HypersurfacePtr seeds[] = {make_geodesic_sphere(Space::sphere(2, 1.0), 0.5),
                                   make_geodesic_sphere(Space::hyperbolic(2, -1.0), 0.7)};
  CounterRng rng(48, 0);
  for (const HypersurfacePtr& h : seeds) {
    const Space& X = h->space();
    const Eigen::VectorXd q = h->random_param(rng);
    const HypersurfacePointData pd = h->point_data(q);
    const TangentVector v0 = pd.to_ambient(Eigen::VectorXd::Ones(1));

    const Eigen::MatrixXd frame0 = tangent_frame(pd.point);
    const double h_fd = 1e-4;
    for (double s : {0.2, 0.6}) {
      // Coordinates in the parallel frame make covariant derivatives plain.
      auto coords = [&](double at) {
        const TangentVector y = strongly_jacobi_field(*h, q, v0, at);
        Eigen::VectorXd c(frame0.cols());
        for (int i = 0; i < frame0.cols(); ++i) {
          const TangentVector ei =
              parallel_transport(pd.point, pd.normal, at,
                                 TangentVector{X, pd.point.x, frame0.col(i)});
          c(i) = X.form(y.v, ei.v);
        }
        return c;
      };
      const Eigen::VectorXd ym = coords(s - h_fd);
      const Eigen::VectorXd yc = coords(s);
      const Eigen::VectorXd yp = coords(s + h_fd);
      const Eigen::VectorXd ypp = (yp - 2.0 * yc + ym) / (h_fd * h_fd);

      // Curvature term in the same frame.
      const TangentVector vel = geodesic_tangent(pd.point, pd.normal, s);
      const TangentVector ys = strongly_jacobi_field(*h, q, v0, s);
      const Eigen::VectorXd rterm = curvature_vector(X, ys.v, vel.v);
      Eigen::VectorXd rc(frame0.cols());
      for (int i = 0; i < frame0.cols(); ++i) {
        const TangentVector ei = parallel_transport(
            pd.point, pd.normal, s, TangentVector{X, pd.point.x, frame0.col(i)});
        rc(i) = X.form(rterm, ei.v);
      }
      CHECK((ypp + rc).norm() <= 1e-6);
    }
  }
}

TEST_CASE("flat_section: basepoint, tube identity, flatness") {
  const auto tube = sphere_hyperbolic_scene();
  CounterRng rng(49, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);
  const FlatSectionChart sec = flat_section(tube->factor1(), tube->factor2(), q1, q2);

  const HypersurfacePointData pd1 = tube->factor1().point_data(q1);
  const HypersurfacePointData pd2 = tube->factor2().point_data(q2);
  const AmbientPoint base = sec(0.0, 0.0);
  CHECK((base.x.head(3) - pd1.point.x).norm() == 0.0);
  CHECK((base.x.tail(3) - pd2.point.x).norm() == 0.0);

  for (double theta : {0.3, 2.0, 5.0}) {
    const Eigen::Vector2d u = tube->profile().value(theta);
    const AmbientPoint via_section = sec(u(0), u(1));
    const AmbientPoint via_tube = tube->tube_map(q1, q2, theta);
    CHECK((via_section.x - via_tube.x).norm() <= 1e-15);
  }

  auto chart2 = [&sec](double a, double b) { return sec(a, b).x; };
  for (int trial = 0; trial < 10; ++trial) {
    const double a = 0.6 * rng.next_unit() - 0.3;
    const double b = 0.6 * rng.next_unit() - 0.3;
    CHECK(std::abs(fd_gauss_curvature(sec.space(), chart2, a, b)) <= 1e-5);
  }
}

TEST_CASE("point_data of the construction: adapted, consistent with rows") {
  const auto tube = sphere_hyperbolic_scene();
  CounterRng rng(50, 0);
  const Eigen::VectorXd param = tube->random_param(rng);
  const HypersurfacePointData pd = tube->point_data(param);
  const Space& X = tube->space();

  CHECK(commutator_residual(pd.shape, pd.normal_jacobi) <=
        1e-10 * (1.0 + pd.shape.fro_norm() + pd.normal_jacobi.fro_norm()));
  CHECK(std::abs(X.form(pd.normal.v, pd.normal.v) - 1.0) <= 1e-12);
  for (int i = 0; i < pd.frame.cols(); ++i) {
    CHECK(std::abs(X.form(pd.frame.col(i), pd.normal.v)) <= 1e-10);
    for (int j = 0; j < pd.frame.cols(); ++j) {
      const double expect = (i == j) ? 1.0 : 0.0;
      CHECK(std::abs(X.form(pd.frame.col(i), pd.frame.col(j)) - expect) <= 1e-10);
    }
  }

  Eigen::VectorXd q1, q2;
  double theta;
  tube->split_param(param, q1, q2, theta);
  const SpectralData sd = tube->shape_spectrum(q1, q2, theta);
  const auto lhs = pd.spectra.expanded_rows();
  const auto rhs = sd.expanded_rows();
  REQUIRE(lhs.size() == rhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    CHECK(lhs[i].first == doctest::Approx(rhs[i].first).epsilon(1e-13));
    CHECK(lhs[i].second == doctest::Approx(rhs[i].second).epsilon(1e-13));
  }
}

TEST_CASE("eigenvector images are FD shape eigenvectors (spectral consistency)") {
  const auto tube = sphere_sphere_scene();
  CounterRng rng(51, 0);
  const Eigen::VectorXd param = tube->random_param(rng);
  const HypersurfacePointData pd = tube->point_data(param);
  const Space& X = tube->space();

  const FdPointResult fd = fd_shape_operator(X, tube->local_chart(param), tube->dim(),
                                             pd.normal.v, FdOptions{});
  Eigen::VectorXd q1, q2;
  double theta;
  tube->split_param(param, q1, q2, theta);
  const Eigen::MatrixXd diff = tube->tube_differential(q1, q2, theta);
  const auto rows = tube->spectrum_rows(q1, q2, theta);

  int col = 0;
  for (const TubeRow& row : rows) {
    for (int k = 0; k < row.multiplicity; ++k, ++col) {
      const Eigen::VectorXd v = diff.col(col) / diff.col(col).norm();
      Eigen::VectorXd coords(fd.frame.cols());
      for (int i = 0; i < fd.frame.cols(); ++i) coords(i) = X.form(fd.frame.col(i), v);
      CHECK((fd.shape.mat() * coords - row.lambda * coords).norm() <= 1e-5);
    }
  }
}

TEST_CASE("orientation reversal flips the normal and negates shape eigenvalues") {
  const Space s2 = Space::sphere(2, 1.0);
  const HypersurfacePtr m = make_geodesic_sphere(s2, 0.5);
  const auto tube = ConstructedHypersurface::create(m, m, ProfileCurve::circle(0.1));

  ProfileCurve::Component c1, c2;
  c1.cos_coeffs = {0.1};
  c2.sin_coeffs = {-0.1};  // theta -> 2pi - theta
  const auto reversed =
      ConstructedHypersurface::create_unchecked(m, m, ProfileCurve::fourier(c1, c2));
  CHECK_FALSE(reversed->diagnostics().ok);

  CounterRng rng(52, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);
  for (double theta : {0.4, 1.7, 3.2}) {
    const double mirrored = kTwoPi - theta;
    const auto [n_fwd, rho_fwd] = tube->unit_normal(q1, q2, mirrored);
    const auto [n_rev, rho_rev] = reversed->unit_normal(q1, q2, theta);
    CHECK((n_rev.v + n_fwd.v).norm() <= 1e-12);

    const auto rows_fwd = tube->spectrum_rows(q1, q2, mirrored);
    const auto rows_rev = reversed->spectrum_rows(q1, q2, theta);
    REQUIRE(rows_fwd.size() == rows_rev.size());
    for (std::size_t i = 0; i < rows_fwd.size(); ++i) {
      CHECK(rows_rev[i].lambda == doctest::Approx(-rows_fwd[i].lambda).epsilon(1e-11));
      CHECK(rows_rev[i].mu == doctest::Approx(rows_fwd[i].mu).epsilon(1e-12));
    }
  }
}

TEST_CASE("circle specialization: theta row is 1/r and the seam matches") {
  const auto tube = sphere_sphere_scene(0.1);
  CounterRng rng(53, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);

  for (int i = 0; i < 32; ++i) {
    const auto rows = tube->spectrum_rows(q1, q2, kTwoPi * i / 32);
    CHECK(rows.back().lambda == doctest::Approx(10.0).epsilon(1e-12));
  }

  const auto rows0 = tube->spectrum_rows(q1, q2, 0.0);
  const auto rows2pi = tube->spectrum_rows(q1, q2, kTwoPi);
  REQUIRE(rows0.size() == rows2pi.size());
  for (std::size_t i = 0; i < rows0.size(); ++i) {
    CHECK(std::abs(rows0[i].lambda - rows2pi[i].lambda) <= 1e-12);
    CHECK(std::abs(rows0[i].mu - rows2pi[i].mu) <= 1e-12);
  }
}

TEST_CASE("immersion guard: admissible curves keep the scale away from zero") {
  const Space s2 = Space::sphere(2, 1.0);
  const HypersurfacePtr m = make_geodesic_sphere(s2, 0.5);
  const auto tube =
      ConstructedHypersurface::create(m, m, ProfileCurve::circle(0.44));
  CounterRng rng(54, 0);
  const Eigen::VectorXd q1 = tube->factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube->factor2().random_param(rng);
  for (int i = 0; i < 256; ++i) {
    CHECK_NOTHROW(tube->spectrum_rows(q1, q2, kTwoPi * i / 256));
  }

  // Past the focal distance the guard trips.
  const double cot_half = std::cos(0.5) / std::sin(0.5);
  CHECK_THROWS_WITH_AS(shape_eigenvalue_scalar(cot_half, 1.0, 0.5),
                       doctest::Contains("focal"), std::runtime_error);
}

TEST_CASE("seed eigenpairs with multiplicity expand into matching frame blocks") {
  // S^3 geodesic sphere: one pair of multiplicity 2 in the first factor.
  const auto tube = ConstructedHypersurface::create(
      make_geodesic_sphere(Space::sphere(3, 1.0), 0.5),
      make_geodesic_sphere(Space::sphere(2, 1.0), 0.5), ProfileCurve::circle(0.1));
  CHECK(tube->dim() == 4);
  CounterRng rng(55, 0);
  const Eigen::VectorXd param = tube->random_param(rng);
  const HypersurfacePointData pd = tube->point_data(param);

  Eigen::VectorXd q1, q2;
  double theta;
  tube->split_param(param, q1, q2, theta);
  const auto rows = tube->spectrum_rows(q1, q2, theta);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].multiplicity == 2);
  CHECK(rows[1].multiplicity == 1);

  const FdPointResult fd = fd_shape_operator(tube->space(), tube->local_chart(param),
                                             tube->dim(), pd.normal.v, FdOptions{});
  const ComparisonReport rep =
      compare_spectra(pd.spectra, fd.shape, fd.normal_jacobi, 1e-5, 1e-4);
  CHECK(rep.pass);
}

TEST_CASE("mu -> 0 continuity of the eigenvalue scalar") {
  // Euclidean-factor rows: exact rational limit lambda / (1 - lambda u).
  for (double lambda : {0.5, 4.0, -2.0}) {
    for (double u : {0.0, 0.05, -0.08}) {
      const double exact = lambda / (1.0 - lambda * u);
      CHECK(shape_eigenvalue_scalar(lambda, 0.0, u) ==
            doctest::Approx(exact).epsilon(1e-14));
      CHECK(std::abs(shape_eigenvalue_scalar(lambda, 1e-12, u) - exact) <= 1e-7);
    }
  }
}
