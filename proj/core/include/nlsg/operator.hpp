#pragma once

#include <functional>
#include <limits>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <utility>
#include <vector>

#include "nlsg/scalar_fn.hpp"
#include "nlsg/space.hpp"
#include "nlsg/types.hpp"

namespace nlsg {

enum class OperatorKind { linear_psd, diagonal, constant };

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultResolventTol = 1e-12;

/// c with d_c in A(c).
struct DomainWitness {
  Vector c;
  Vector d_c;
};

/// Quantitative data on d = inf{ ||z|| : z in ran A }.
struct RangeData {
  double d_inf = 0.0;
  /// f(eps) bounds ||y||, ||z|| of a witness (y, z in Ay) with ||z|| <= d + eps.
  WitnessBound f;
  int E = 1;
  std::optional<double> D;
  std::function<std::pair<Vector, Vector>(double eps)> witness;
};

/// Single-valued accretive operator on R^d: affine x -> Mx + q with M
/// symmetric PSD, a coordinatewise monotone map, or a constant.
class Operator {
 public:
  static Operator linear_psd(Matrix M, Vector q);
  static Operator diagonal(std::vector<ScalarFn> fns);
  static Operator constant(Vector q);

  static Operator from_descriptor(const nlohmann::json& descriptor);
  nlohmann::json descriptor() const;

  OperatorKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }
  double lambda0() const noexcept { return lambda0_; }
  /// Builds a copy whose range condition only holds for lambda < lambda0.
  Operator with_lambda0(double lambda0) const;

  const Matrix& matrix() const noexcept { return M_; }
  const Vector& offset() const noexcept { return q_; }
  const std::vector<ScalarFn>& functions() const noexcept { return fns_; }

  /// False for the deliberately non-monotone diagonal negative control.
  bool monotone_by_construction() const noexcept;
  /// Structural accretivity in the given norm; l_p (p != 2) needs M with
  /// nonpositive off-diagonals and nonnegative row sums.
  bool accretive_in(const Space& space) const;

  Vector apply(const Vector& x) const;
  bool graph_contains(const Space& space, const Vector& x, const Vector& u, double tol) const;

  /// J_lambda x; ||y + lambda A y - x|| <= tol max{1, ||x||} in the Euclidean norm.
  Vector resolvent(double lambda, const Vector& x, double tol = kDefaultResolventTol) const;
  /// A_lambda x = (x - J_lambda x) / lambda, evaluated as A(J_lambda x).
  Vector yosida(double lambda, const Vector& x, double tol = kDefaultResolventTol) const;

  /// Reusable J_lambda for a fixed lambda (factorizes I + lambda M once).
  std::function<Vector(const Vector&)> resolvent_stepper(double lambda, double tol = kDefaultResolventTol) const;

  double bracket_norm(const Space& space, const Vector& x) const;
  /// phi(eps, b) = eps / max{1, L(b)}.
  double bracket_modulus(const Space& space, double eps, double b) const;
  BracketModulus bracket_modulus_fn(const Space& space) const;
  /// Lipschitz constant of apply on the b-ball.
  double lipschitz_bound(const Space& space, double b) const;
  /// A*(b) >= sup of ||apply(x)|| over the b-ball.
  double majorant(const Space& space, double b) const;

  DomainWitness domain_witness() const;
  RangeData range_data(const Space& space) const;

  /// Closed-form S(t)x and (x - S(t)x)/t; every shipped kind has one.
  Vector exact_semigroup(double t, const Vector& x) const;
  Vector exact_semigroup_quotient(double t, const Vector& x) const;

  void check_dimension(const Vector& x) const;

 private:
  Operator() = default;
  void prepare_linear();

  OperatorKind kind_ = OperatorKind::constant;
  int dimension_ = 0;
  double lambda0_ = kUnbounded;
  Matrix M_;
  Vector q_;
  std::vector<ScalarFn> fns_;
  // Eigendecomposition of M for the linear closed form.
  Vector eigvals_;
  Matrix eigvecs_;
};

}  // namespace nlsg
