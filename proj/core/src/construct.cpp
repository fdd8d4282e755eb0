#include "catube/construct.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace catube {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFocalGuard = 1e-10;

double eval_component(const ProfileCurve::Component& c, double theta, int deriv) {
  double out = (deriv == 0) ? c.constant : 0.0;
  for (std::size_t i = 0; i < c.cos_coeffs.size(); ++i) {
    const double m = static_cast<double>(i + 1);
    const double a = c.cos_coeffs[i];
    switch (deriv) {
      case 0: out += a * std::cos(m * theta); break;
      case 1: out += -a * m * std::sin(m * theta); break;
      default: out += -a * m * m * std::cos(m * theta); break;
    }
  }
  for (std::size_t i = 0; i < c.sin_coeffs.size(); ++i) {
    const double m = static_cast<double>(i + 1);
    const double b = c.sin_coeffs[i];
    switch (deriv) {
      case 0: out += b * std::sin(m * theta); break;
      case 1: out += b * m * std::cos(m * theta); break;
      default: out += -b * m * m * std::sin(m * theta); break;
    }
  }
  return out;
}

double component_radius_bound(const ProfileCurve::Component& c) {
  double r = std::abs(c.constant);
  for (double a : c.cos_coeffs) r += std::abs(a);
  for (double b : c.sin_coeffs) r += std::abs(b);
  return r;
}

void require_finite_component(const ProfileCurve::Component& c, const char* who) {
  auto check = [&](double v) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite coefficient");
  };
  check(c.constant);
  for (double a : c.cos_coeffs) check(a);
  for (double b : c.sin_coeffs) check(b);
}

Eigen::VectorXd product_coords(const Space& X, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  Eigen::VectorXd out(X.ambient_dim());
  out.head(a.size()) = a;
  out.tail(b.size()) = b;
  return out;
}

}  // namespace

ProfileCurve ProfileCurve::circle(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ProfileCurve::circle: radius must be positive");
  }
  ProfileCurve c;
  c.c1_.cos_coeffs = {radius};
  c.c2_.sin_coeffs = {radius};
  std::ostringstream os;
  os << "circle(" << radius << ")";
  c.describe_ = os.str();
  return c;
}

ProfileCurve ProfileCurve::ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("ProfileCurve::ellipse: semi-axes must be positive");
  }
  ProfileCurve c;
  c.c1_.cos_coeffs = {a};
  c.c2_.sin_coeffs = {b};
  std::ostringstream os;
  os << "ellipse(" << a << ", " << b << ")";
  c.describe_ = os.str();
  return c;
}

ProfileCurve ProfileCurve::fourier(Component u1, Component u2) {
  require_finite_component(u1, "ProfileCurve::fourier");
  require_finite_component(u2, "ProfileCurve::fourier");
  ProfileCurve c;
  c.c1_ = std::move(u1);
  c.c2_ = std::move(u2);
  c.describe_ = "fourier";
  return c;
}

Eigen::Vector2d ProfileCurve::value(double theta) const {
  return {eval_component(c1_, theta, 0), eval_component(c2_, theta, 0)};
}

Eigen::Vector2d ProfileCurve::d1(double theta) const {
  return {eval_component(c1_, theta, 1), eval_component(c2_, theta, 1)};
}

Eigen::Vector2d ProfileCurve::d2(double theta) const {
  return {eval_component(c1_, theta, 2), eval_component(c2_, theta, 2)};
}

double ProfileCurve::max_radius_hint() const {
  return std::hypot(component_radius_bound(c1_), component_radius_bound(c2_));
}

double focal_radius(double lambda, double mu) {
  if (!std::isfinite(lambda) || !std::isfinite(mu)) {
    throw std::invalid_argument("focal_radius: non-finite input");
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (mu > 0.0) {
    // jc = lambda js  <=>  tan(k s) = k / lambda; nearest roots on each side.
    const double k = std::sqrt(mu);
    const double a = std::atan2(k, lambda);  // in (0, pi)
    return std::min(a, std::numbers::pi - a) / k;
  }
  if (mu < 0.0) {
    // tanh(k s) = k / lambda; a root exists only for |lambda| > k.
    const double k = std::sqrt(-mu);
    if (std::abs(lambda) <= k) return inf;
    return std::abs(std::atanh(k / lambda)) / k;
  }
  if (lambda == 0.0) return inf;
  return std::abs(1.0 / lambda);
}

double focal_infimum(const Hypersurface& m1, const Hypersurface& m2,
                     const SampleOptions& opt) {
  double inf = std::numeric_limits<double>::infinity();
  const Hypersurface* seeds[2] = {&m1, &m2};
  for (int si = 0; si < 2; ++si) {
    CounterRng rng(opt.rng_seed, 0x5eed0000ULL + static_cast<std::uint64_t>(si));
    for (int i = 0; i < opt.point_samples; ++i) {
      const Eigen::VectorXd q = seeds[si]->random_param(rng);
      const HypersurfacePointData pd = seeds[si]->point_data(q);
      for (const JointEigenpair& pr : pd.spectra.pairs) {
        inf = std::min(inf, focal_radius(pr.lambda, pr.mu));
      }
    }
  }
  return inf;
}

double admissible_radius(const Hypersurface& m1, const Hypersurface& m2,
                         const SampleOptions& opt) {
  return 0.9 * focal_infimum(m1, m2, opt);
}

CurveDiagnostics validate_curve(const ProfileCurve& curve, const Hypersurface& m1,
                                const Hypersurface& m2, const SampleOptions& opt) {
  CurveDiagnostics d;
  d.closure_value = (curve.value(0.0) - curve.value(kTwoPi)).norm();
  d.closure_d1 = (curve.d1(0.0) - curve.d1(kTwoPi)).norm();
  d.closure_d2 = (curve.d2(0.0) - curve.d2(kTwoPi)).norm();

  const int n = 4096;
  double min_speed = std::numeric_limits<double>::infinity();
  double max_radius = 0.0;
  double min_radius = std::numeric_limits<double>::infinity();
  double angle_sum = 0.0;
  double prev_angle = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double theta = kTwoPi * static_cast<double>(i) / n;
    const Eigen::Vector2d u = curve.value(theta);
    min_speed = std::min(min_speed, curve.d1(theta).norm());
    max_radius = std::max(max_radius, u.norm());
    min_radius = std::min(min_radius, u.norm());
    const double a = std::atan2(u(1), u(0));
    if (i > 0) {
      double delta = a - prev_angle;
      if (delta > std::numbers::pi) delta -= kTwoPi;
      if (delta <= -std::numbers::pi) delta += kTwoPi;
      angle_sum += delta;
    }
    prev_angle = a;
  }
  d.min_speed = min_speed;
  d.max_radius = max_radius;
  d.winding = static_cast<int>(std::lround(angle_sum / kTwoPi));

  d.focal_bound = focal_infimum(m1, m2, opt);
  d.admissible = 0.9 * d.focal_bound;

  std::ostringstream msg;
  if (d.closure_value > 1e-9 || d.closure_d1 > 1e-9 || d.closure_d2 > 1e-9) {
    msg << "curve does not close smoothly at the seam (residuals " << d.closure_value
        << ", " << d.closure_d1 << ", " << d.closure_d2 << ")";
  } else if (!(d.min_speed > 1e-9)) {
    msg << "curve is not regular: min |u'| = " << d.min_speed;
  } else if (!(min_radius > 1e-9)) {
    msg << "curve passes through the origin: min |u| = " << min_radius;
  } else if (d.winding != 1) {
    msg << "winding number about the origin is " << d.winding << ", expected +1";
  } else if (!(d.max_radius < d.admissible)) {
    msg << "max |u| = " << d.max_radius << " exceeds admissible radius " << d.admissible
        << " (focal bound " << d.focal_bound << ")";
  }
  d.message = msg.str();
  d.ok = d.message.empty();
  return d;
}

double immersion_scale(double lambda, double mu, double offset) {
  return jacobi_cos(mu, offset) - lambda * jacobi_sinc(mu, offset);
}

double shape_eigenvalue_scalar(double lambda, double mu, double offset) {
  const double den = immersion_scale(lambda, mu, offset);
  if (std::abs(den) <= kFocalGuard) {
    std::ostringstream msg;
    msg << "focal point reached: immersion scale " << den << " at offset " << offset
        << " for (lambda, mu) = (" << lambda << ", " << mu << ")";
    throw std::runtime_error(msg.str());
  }
  const double num = mu * jacobi_sinc(mu, offset) + lambda * jacobi_cos(mu, offset);
  return num / den;
}

// ---------------------------------------------------------------------------

struct ConstructedHypersurface::Assembly {
  HypersurfacePointData pd1, pd2;
  double theta = 0.0;
  Eigen::Vector2d u, du, ddu;
  double speed = 0.0;
  Eigen::VectorXd x;         // tube point, product ambient coords
  Eigen::VectorXd normal_v;  // unit normal coords at x
  NormalDecomposition rho;
  std::vector<TubeRow> rows;
  Eigen::MatrixXd frame;         // orthonormal columns
  Eigen::MatrixXd differential;  // scaled columns (tube differential images)
  Eigen::VectorXd col_lambda, col_mu;
};

ConstructedHypersurface::ConstructedHypersurface(HypersurfacePtr m1, HypersurfacePtr m2,
                                                 ProfileCurve curve)
    : Hypersurface(Space::product({m1->space(), m2->space()})),
      m1_(std::move(m1)),
      m2_(std::move(m2)),
      curve_(std::move(curve)) {}

std::shared_ptr<const ConstructedHypersurface> ConstructedHypersurface::create(
    HypersurfacePtr m1, HypersurfacePtr m2, ProfileCurve curve,
    const SampleOptions& opt) {
  std::shared_ptr<ConstructedHypersurface> c(
      new ConstructedHypersurface(std::move(m1), std::move(m2), std::move(curve)));
  c->diag_ = validate_curve(c->curve_, *c->m1_, *c->m2_, opt);
  if (!c->diag_.ok) {
    throw std::invalid_argument("ConstructedHypersurface: " + c->diag_.message);
  }
  return c;
}

std::shared_ptr<const ConstructedHypersurface> ConstructedHypersurface::create_unchecked(
    HypersurfacePtr m1, HypersurfacePtr m2, ProfileCurve curve) {
  std::shared_ptr<ConstructedHypersurface> c(
      new ConstructedHypersurface(std::move(m1), std::move(m2), std::move(curve)));
  c->diag_ = validate_curve(c->curve_, *c->m1_, *c->m2_, SampleOptions{});
  return c;
}

int ConstructedHypersurface::param_dim() const {
  return m1_->param_dim() + m2_->param_dim() + 1;
}

std::string ConstructedHypersurface::describe() const {
  return "tube[" + m1_->describe() + ", " + m2_->describe() + "; " +
         curve_.describe() + "]";
}

Eigen::VectorXd ConstructedHypersurface::make_param(const Eigen::VectorXd& q1,
                                                    const Eigen::VectorXd& q2,
                                                    double theta) const {
  if (q1.size() != m1_->param_dim() || q2.size() != m2_->param_dim()) {
    throw std::invalid_argument("make_param: factor parameter size mismatch");
  }
  Eigen::VectorXd p(param_dim());
  p.head(q1.size()) = q1;
  p.segment(q1.size(), q2.size()) = q2;
  p(p.size() - 1) = theta;
  return p;
}

void ConstructedHypersurface::split_param(const Eigen::VectorXd& param,
                                          Eigen::VectorXd& q1, Eigen::VectorXd& q2,
                                          double& theta) const {
  if (param.size() != param_dim()) {
    throw std::invalid_argument("split_param: parameter size mismatch");
  }
  q1 = param.head(m1_->param_dim());
  q2 = param.segment(m1_->param_dim(), m2_->param_dim());
  theta = param(param.size() - 1);
}

Eigen::VectorXd ConstructedHypersurface::random_param(CounterRng& rng) const {
  const Eigen::VectorXd q1 = m1_->random_param(rng);
  const Eigen::VectorXd q2 = m2_->random_param(rng);
  return make_param(q1, q2, kTwoPi * rng.next_unit());
}

PointNormal ConstructedHypersurface::chart_eval(const Eigen::VectorXd& param,
                                                const Eigen::VectorXd& t) const {
  if (t.size() != dim()) {
    throw std::invalid_argument("ConstructedHypersurface: chart offset size mismatch");
  }
  Eigen::VectorXd q1, q2;
  double theta = 0.0;
  split_param(param, q1, q2, theta);

  const int d1 = m1_->dim();
  const int d2 = m2_->dim();
  const PointNormal pn1 = m1_->chart_eval(q1, t.head(d1));
  const PointNormal pn2 = m2_->chart_eval(q2, t.segment(d1, d2));
  const double th = theta + t(t.size() - 1);

  const Eigen::Vector2d u = curve_.value(th);
  const Eigen::Vector2d du = curve_.d1(th);
  const double speed = du.norm();
  if (!(speed > 1e-12)) {
    throw std::runtime_error("ConstructedHypersurface: curve not regular at theta");
  }

  const TangentVector g1 = geodesic_tangent(pn1.point, pn1.normal, u(0));
  const TangentVector g2 = geodesic_tangent(pn2.point, pn2.normal, u(1));

  const Eigen::VectorXd x = product_coords(space_, g1.base, g2.base);
  const Eigen::VectorXd nv =
      product_coords(space_, (-du(1) / speed) * g1.v, (du(0) / speed) * g2.v);
  return {AmbientPoint{space_, x}, TangentVector{space_, x, nv}};
}

ConstructedHypersurface::Assembly ConstructedHypersurface::assemble(
    const Eigen::VectorXd& q1, const Eigen::VectorXd& q2, double theta) const {
  Assembly a{m1_->point_data(q1), m2_->point_data(q2)};
  a.theta = theta;
  a.u = curve_.value(theta);
  a.du = curve_.d1(theta);
  a.ddu = curve_.d2(theta);
  a.speed = a.du.norm();
  if (!(a.speed > 1e-12)) {
    throw std::runtime_error("ConstructedHypersurface: curve not regular at theta");
  }

  const TangentVector g1 = geodesic_tangent(a.pd1.point, a.pd1.normal, a.u(0));
  const TangentVector g2 = geodesic_tangent(a.pd2.point, a.pd2.normal, a.u(1));
  a.x = product_coords(space_, g1.base, g2.base);

  const int D = space_.ambient_dim();
  const int D1 = m1_->space().ambient_dim();
  const int D2 = m2_->space().ambient_dim();
  const int m = m1_->dim() + m2_->dim() + 1;
  a.frame = Eigen::MatrixXd::Zero(D, m);
  a.differential = Eigen::MatrixXd::Zero(D, m);
  a.col_lambda.resize(m);
  a.col_mu.resize(m);

  int col = 0;
  const HypersurfacePointData* pds[2] = {&a.pd1, &a.pd2};
  const Hypersurface* seeds[2] = {m1_.get(), m2_.get()};
  for (int side = 0; side < 2; ++side) {
    const HypersurfacePointData& pd = *pds[side];
    const double offset = a.u(side);
    const double prefix = (side == 0) ? -a.du(1) / a.speed : a.du(0) / a.speed;
    const double trans = (side == 0) ? a.du(1) : a.du(0);  // transverse speed
    const int block_off = (side == 0) ? 0 : D1;
    const int block_len = (side == 0) ? D1 : D2;
    const Space& Xi = seeds[side]->space();

    for (std::size_t pi = 0; pi < pd.spectra.pairs.size(); ++pi) {
      const JointEigenpair& pr = pd.spectra.pairs[pi];
      const double scale = immersion_scale(pr.lambda, pr.mu, offset);
      if (std::abs(scale) <= kFocalGuard) {
        std::ostringstream msg;
        msg << "focal point reached: immersion scale " << scale << " at theta "
            << theta << " (factor " << side + 1 << ")";
        throw std::runtime_error(msg.str());
      }
      TubeRow row;
      row.source = side;
      row.seed_pair = static_cast<int>(pi);
      row.seed_lambda = pr.lambda;
      row.seed_mu = pr.mu;
      row.lambda = prefix * shape_eigenvalue_scalar(pr.lambda, pr.mu, offset);
      row.mu = trans * trans * pr.mu / (a.speed * a.speed);
      row.multiplicity = pr.multiplicity;
      a.rows.push_back(row);

      for (int b = 0; b < pr.multiplicity; ++b) {
        const Eigen::VectorXd w = pd.frame * pr.basis.col(b);
        const TangentVector tw = parallel_transport(
            pd.point, pd.normal, offset, TangentVector{Xi, pd.point.x, w});
        a.frame.col(col).segment(block_off, block_len) = tw.v;
        a.differential.col(col) = scale * a.frame.col(col);
        a.col_lambda(col) = row.lambda;
        a.col_mu(col) = row.mu;
        ++col;
      }
    }
  }

  // theta direction: (u1' P1(N1), u2' P2(N2)); plane curvature eigenvalue.
  TubeRow trow;
  trow.source = 2;
  trow.lambda = (a.du(0) * a.ddu(1) - a.ddu(0) * a.du(1)) / (a.speed * a.speed * a.speed);
  trow.mu = 0.0;
  a.rows.push_back(trow);
  a.differential.col(col) = product_coords(space_, a.du(0) * g1.v, a.du(1) * g2.v);
  a.frame.col(col) = a.differential.col(col) / a.speed;
  a.col_lambda(col) = trow.lambda;
  a.col_mu(col) = 0.0;

  a.rho = NormalDecomposition{-a.du(1) / a.speed, a.du(0) / a.speed};
  a.normal_v = product_coords(space_, a.rho.rho1 * g1.v, a.rho.rho2 * g2.v);
  return a;
}

AmbientPoint ConstructedHypersurface::tube_map(const Eigen::VectorXd& q1,
                                               const Eigen::VectorXd& q2,
                                               double theta) const {
  return chart_eval(make_param(q1, q2, theta), Eigen::VectorXd::Zero(dim())).point;
}

Eigen::MatrixXd ConstructedHypersurface::tube_differential(const Eigen::VectorXd& q1,
                                                           const Eigen::VectorXd& q2,
                                                           double theta) const {
  return assemble(q1, q2, theta).differential;
}

std::pair<TangentVector, NormalDecomposition> ConstructedHypersurface::unit_normal(
    const Eigen::VectorXd& q1, const Eigen::VectorXd& q2, double theta) const {
  const PointNormal pn = chart_eval(make_param(q1, q2, theta),
                                    Eigen::VectorXd::Zero(dim()));
  const Eigen::Vector2d du = curve_.d1(theta);
  const double speed = du.norm();
  return {pn.normal, NormalDecomposition{-du(1) / speed, du(0) / speed}};
}

double ConstructedHypersurface::product_angle(double theta) const {
  const Eigen::Vector2d du = curve_.d1(theta);
  const double n2 = du.squaredNorm();
  if (!(n2 > 0.0)) {
    throw std::runtime_error("product_angle: curve not regular at theta");
  }
  return -(du(0) * du(0) - du(1) * du(1)) / n2;
}

double ConstructedHypersurface::product_angle_via_structure(const Eigen::VectorXd& q1,
                                                            const Eigen::VectorXd& q2,
                                                            double theta) const {
  const TangentVector n = unit_normal(q1, q2, theta).first;
  return metric(apply_product_structure(n), n);
}

std::vector<TubeRow> ConstructedHypersurface::spectrum_rows(const Eigen::VectorXd& q1,
                                                            const Eigen::VectorXd& q2,
                                                            double theta) const {
  return assemble(q1, q2, theta).rows;
}

SpectralData ConstructedHypersurface::shape_spectrum(const Eigen::VectorXd& q1,
                                                     const Eigen::VectorXd& q2,
                                                     double theta) const {
  const Assembly a = assemble(q1, q2, theta);
  return joint_eigenspaces(SymMatrix::diagonal(a.col_lambda),
                           SymMatrix::diagonal(a.col_mu));
}

SpectralData ConstructedHypersurface::normal_jacobi_spectrum(const Eigen::VectorXd& q1,
                                                             const Eigen::VectorXd& q2,
                                                             double theta) const {
  return shape_spectrum(q1, q2, theta);
}

HypersurfacePointData ConstructedHypersurface::point_data(
    const Eigen::VectorXd& param) const {
  Eigen::VectorXd q1, q2;
  double theta = 0.0;
  split_param(param, q1, q2, theta);
  Assembly a = assemble(q1, q2, theta);

  const SymMatrix shape = SymMatrix::diagonal(a.col_lambda);
  const SymMatrix jacobi = SymMatrix::diagonal(a.col_mu);
  return HypersurfacePointData{AmbientPoint{space_, a.x},
                               std::move(a.frame),
                               TangentVector{space_, a.x, a.normal_v},
                               shape,
                               jacobi,
                               joint_eigenspaces(shape, jacobi)};
}

HypersurfacePtr as_hypersurface(std::shared_ptr<const ConstructedHypersurface> c) {
  return c;
}

TangentVector strongly_jacobi_field(const Hypersurface& h, const Eigen::VectorXd& param,
                                    const TangentVector& v0, double s) {
  const HypersurfacePointData pd = h.point_data(param);
  if ((v0.base - pd.point.x).norm() > 1e-8 * (1.0 + pd.point.x.norm())) {
    throw std::invalid_argument("strongly_jacobi_field: v0 not based at the point");
  }
  const Space& X = pd.point.space;
  const int m = static_cast<int>(pd.frame.cols());
  Eigen::VectorXd coords(m);
  for (int i = 0; i < m; ++i) coords(i) = X.form(v0.v, pd.frame.col(i));
  if ((pd.frame * coords - v0.v).norm() > 1e-8 * (1.0 + v0.v.norm())) {
    throw std::invalid_argument("strongly_jacobi_field: v0 not tangent to the surface");
  }

  const Eigen::VectorXd w = spectral_cos(pd.normal_jacobi, s).mat() * coords -
                            spectral_sinc(pd.normal_jacobi, s).mat() *
                                (pd.shape.mat() * coords);
  const TangentVector ambient{X, pd.point.x, pd.frame * w};
  return parallel_transport(pd.point, pd.normal, s, ambient);
}

FlatSectionChart::FlatSectionChart(PointNormal pn1, PointNormal pn2)
    : pn1_(std::move(pn1)),
      pn2_(std::move(pn2)),
      product_(Space::product({pn1_.point.space, pn2_.point.space})) {}

AmbientPoint FlatSectionChart::operator()(double s1, double s2) const {
  const AmbientPoint a = geodesic(pn1_.point, pn1_.normal, s1);
  const AmbientPoint b = geodesic(pn2_.point, pn2_.normal, s2);
  return {product_, product_coords(product_, a.x, b.x)};
}

FlatSectionChart flat_section(const Hypersurface& m1, const Hypersurface& m2,
                              const Eigen::VectorXd& q1, const Eigen::VectorXd& q2) {
  return FlatSectionChart(m1.chart_eval(q1, Eigen::VectorXd::Zero(m1.dim())),
                          m2.chart_eval(q2, Eigen::VectorXd::Zero(m2.dim())));
}

}  // namespace catube
