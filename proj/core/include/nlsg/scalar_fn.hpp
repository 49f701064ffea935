#pragma once

#include <nlohmann/json_fwd.hpp>

namespace nlsg {

/// Scalar nondecreasing map R -> R used coordinatewise by diagonal operators.
///
///   power:  f(y) = coef * sgn(y) |y|^exp,  exp >= 1, coef >= 0
///   linear: f(y) = slope * y   (slope < 0 is allowed, but then f is not monotone)
///   exp:    f(y) = coef * e^y,  coef > 0
///   zero:   f(y) = 0
class ScalarFn {
 public:
  enum class Type { power, linear, exp, zero };

  static ScalarFn power(double exponent, double coef = 1.0);
  static ScalarFn linear(double slope);
  static ScalarFn exp(double coef = 1.0);
  static ScalarFn zero();

  static ScalarFn from_descriptor(const nlohmann::json& d);
  nlohmann::json descriptor() const;

  Type type() const noexcept { return type_; }
  double exponent() const noexcept { return exponent_; }
  double coef() const noexcept { return coef_; }
  bool monotone() const noexcept { return type_ != Type::linear || coef_ >= 0.0; }

  double operator()(double y) const;
  double derivative(double y) const;
  /// sup |f'| on [-b, b].
  double lipschitz_on(double b) const;
  /// sup |f| on [-b, b].
  double sup_abs_on(double b) const;

  /// Root of y + lambda f(y) = x, |residual| <= abs_tol.
  double resolvent(double lambda, double x, double abs_tol) const;

  /// Exact flow of y' = -f(y) at time t from x.
  double flow(double t, double x) const;
  /// (x - flow(t, x)) / t without cancellation; f(x) at t = 0.
  double flow_quotient(double t, double x) const;

  friend bool operator==(const ScalarFn& a, const ScalarFn& b) noexcept {
    return a.type_ == b.type_ && a.exponent_ == b.exponent_ && a.coef_ == b.coef_;
  }

 private:
  ScalarFn(Type type, double exponent, double coef) : type_(type), exponent_(exponent), coef_(coef) {}

  Type type_;
  double exponent_;
  double coef_;
};

}  // namespace nlsg
