#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "catube/matfun.hpp"

// Closed-form geometry of the model spaces and their finite products:
//
//   sphere S^n(c), c > 0      round sphere of radius 1/sqrt(c) in R^{n+1}
//   hyperbolic H^n(c), c < 0  upper hyperboloid <x,x>_L = 1/c in Minkowski R^{1,n}
//   euclidean E^n             flat R^n
//   products                  block-concatenated flat ambients, product metric
//
// Every space is realized inside a flat ambient with a diagonal +-1 bilinear
// form, so geodesics, parallel transport and the curvature operator are all
// closed-form and a finite-difference oracle can differentiate the embeddings
// directly.

namespace catube {

enum class SpaceKind { sphere, hyperbolic, euclidean, product };

class Space {
 public:
  static Space sphere(int dim, double curvature);
  static Space hyperbolic(int dim, double curvature);
  static Space euclidean(int dim);
  static Space product(std::vector<Space> factors);

  SpaceKind kind() const;
  bool is_product() const { return kind() == SpaceKind::product; }
  int dim() const;
  int ambient_dim() const;
  double curvature() const;                  // leaf spaces only
  const std::vector<Space>& factors() const; // products only
  int factor_offset(int i) const;            // ambient offset of factor i

  // Diagonal of the ambient bilinear form (-1 on hyperbolic time coordinates).
  const Eigen::VectorXd& form_diag() const;
  double form(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  // Largest per-factor deviation of x from the defining quadric.
  double membership_residual(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x, double tol = 1e-8) const;
  double tangency_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;

  // Form-orthogonal projection of v onto the tangent space at x.
  Eigen::VectorXd project_to_tangent(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& v) const;

  // Canonical basepoint: (1/sqrt|c|, 0, ...) on quadrics, origin on E^n.
  Eigen::VectorXd pole() const;

  bool same_as(const Space& other) const;  // structural equality
  std::string describe() const;

 private:
  struct Node;
  explicit Space(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct AmbientPoint {
  Space space;
  Eigen::VectorXd x;
};

struct TangentVector {
  Space space;
  Eigen::VectorXd base;  // coordinates of the base point
  Eigen::VectorXd v;
};

// Riemannian inner product of two tangent vectors at the same base point
// (the ambient form restricted to the tangent space).
double metric(const TangentVector& v, const TangentVector& w);

// gamma(s) = exp_p(s v) for unit tangent v. On products each factor runs its
// own geodesic at speed |v_i|; zero-speed factors stay put.
AmbientPoint geodesic(const AmbientPoint& p, const TangentVector& v, double s);

// Velocity gamma'(s) of the geodesic above (equals the parallel transport of v).
TangentVector geodesic_tangent(const AmbientPoint& p, const TangentVector& v, double s);

// Parallel transport of w from p to gamma(s) along the geodesic with initial
// unit velocity v. The span{v} component rotates with the geodesic; the
// complement is constant in ambient coordinates.
TangentVector parallel_transport(const AmbientPoint& p, const TangentVector& v,
                                 double s, const TangentVector& w);

// Product structure of a two-factor product: (v1, v2) -> (v1, -v2).
TangentVector apply_product_structure(const TangentVector& v);

// Curvature term R(v, n)n, per factor c_i(<n_i,n_i> v_i - <v_i,n_i> n_i).
Eigen::VectorXd curvature_vector(const Space& X, const Eigen::VectorXd& v,
                                 const Eigen::VectorXd& n);

// Matrix of v -> R(v, n)n restricted to the given orthonormal frame of
// n-perp inside T_pX; the overload generates the frame.
SymMatrix curvature_normal_operator(const AmbientPoint& p, const TangentVector& n,
                                    const Eigen::MatrixXd& frame);
SymMatrix curvature_normal_operator(const AmbientPoint& p, const TangentVector& n);

// Orthonormal tangent frame at p from pivoted Gram-Schmidt over projected
// coordinate axes (deterministic). The second form spans normal-perp only;
// `normal` must be a unit tangent vector.
Eigen::MatrixXd tangent_frame(const AmbientPoint& p);
Eigen::MatrixXd tangent_frame(const AmbientPoint& p, const Eigen::VectorXd& normal);

// Precondition helpers shared by the operations above.
void require_member(const AmbientPoint& p, const char* who, double tol = 1e-8);
void require_tangent(const TangentVector& v, const char* who, double tol = 1e-8);
void require_unit_tangent(const TangentVector& v, const char* who, double tol = 1e-8);

}  // namespace catube
