#pragma once

#include <nlohmann/json_fwd.hpp>

#include "nlsg/types.hpp"

namespace nlsg {

enum class NormKind { euclidean, lp };

/// A finite-dimensional smooth, uniformly convex normed space: Euclidean
/// R^d or l_p^d with 1 < p < infinity.
///
/// Smoothness makes the normalized duality map single valued, so the
/// semi-inner product <y, x>_s is simply the pairing <y, j(x)>.
class Space {
 public:
  static Space euclidean(int dimension);
  static Space lp(int dimension, double p);

  /// Parses `{"norm": "euclidean"}` or `{"norm": "lp", "p": 3.0}`.
  static Space from_descriptor(const nlohmann::json& descriptor, int dimension);
  nlohmann::json descriptor() const;

  int dimension() const noexcept { return dimension_; }
  NormKind norm_kind() const noexcept { return kind_; }
  /// The l_p exponent; 2 for the Euclidean space.
  double exponent() const noexcept { return p_; }
  /// True when omega is a sampled calibration rather than a closed form.
  bool empirical_semi_inner_modulus() const noexcept { return empirical_omega_; }

  double norm(const Vector& x) const;
  /// Norm of a functional in the dual space (l_q with 1/p + 1/q = 1).
  double dual_norm(const Vector& functional) const;
  Vector duality_map(const Vector& x) const;
  /// <y, x>_s = <y, j(x)>.
  double semi_inner(const Vector& y, const Vector& x) const;

  /// eta(eps) for 0 < eps <= 2.
  double ucx_modulus(double eps) const;
  /// ||a/||a|| - b/||b||||, the generalized Clarkson angle.
  double clarkson_angle(const Vector& a, const Vector& b) const;
  /// omega(b, eps) for the semi-inner product in its right argument.
  double semi_inner_modulus(double b, double eps) const;

  ConvexityModulus eta() const;
  SemiInnerModulus omega() const;

  /// Hoelder data backing the empirical omega (constant, exponent).
  double duality_holder_constant() const noexcept { return holder_constant_; }
  double duality_holder_exponent() const noexcept { return holder_exponent_; }

  void check_dimension(const Vector& x) const;

  friend bool operator==(const Space& a, const Space& b) noexcept {
    return a.dimension_ == b.dimension_ && a.kind_ == b.kind_ && a.p_ == b.p_;
  }

 private:
  Space(int dimension, NormKind kind, double p);
  void calibrate_semi_inner_modulus();

  int dimension_;
  NormKind kind_;
  double p_;
  bool empirical_omega_ = false;
  double holder_constant_ = 1.0;
  double holder_exponent_ = 1.0;
};

}  // namespace nlsg
