#include "nlsg/semigroup.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nlsg/errors.hpp"
#include "nlsg/parallel.hpp"

namespace nlsg {

std::uint64_t cl_rate(int k, double b, double T) {
  if (k < 0) throw DomainError("cl_rate needs k >= 0");
  if (!(b > 0.0) || !(T > 0.0)) throw DomainError("cl_rate needs b > 0 and T > 0");
  const long double v = std::ceil(std::ldexp(static_cast<long double>(T) * T * b * b, 2 * k + 2));
  if (!(v < 18446744073709551615.0L)) return std::numeric_limits<std::uint64_t>::max();
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(v));
}

double equicontinuity_threshold(double majorant_b_plus_1, int m) {
  return std::ldexp(1.0, -(m + 3)) / std::max(1.0, majorant_b_plus_1);
}

double equicontinuity_threshold(const Operator& op, const Space& space, double b, int m) {
  return equicontinuity_threshold(op.majorant(space, b + 1.0), m);
}

SemigroupEvaluator::SemigroupEvaluator(Operator op, Space space, double resolvent_tol, std::uint64_t step_cap)
    : op_(std::move(op)), space_(std::move(space)), tol_(resolvent_tol), step_cap_(step_cap) {
  if (op_.dimension() != space_.dimension()) throw DimensionMismatch("operator and space dimensions differ");
  if (!(tol_ > 0.0)) throw DomainError("resolvent tolerance must be positive");
  // ||r||_p <= d^{max(0, 1/p - 1/2)} ||r||_2
  conditioning_ = std::pow(static_cast<double>(space_.dimension()), std::max(0.0, 1.0 / space_.exponent() - 0.5));
}

Vector SemigroupEvaluator::cl_iterate(double t, const Vector& x, std::uint64_t n) const {
  return cl_iterate_detailed(t, x, n).point;
}

ClIterate SemigroupEvaluator::cl_iterate_detailed(double t, const Vector& x, std::uint64_t n) const {
  op_.check_dimension(x);
  if (n == 0) throw DomainError("cl_iterate needs n >= 1");
  if (!(t >= 0.0)) throw DomainError("cl_iterate needs t >= 0");
  if (!x.allFinite()) throw DomainError("cl_iterate needs a finite starting point");
  ClIterate out;
  out.steps = n;
  if (t == 0.0) {
    out.point = x;
    out.quotient = op_.apply(x);
    return out;
  }

  const double lambda = t / static_cast<double>(n);
  const auto step = op_.resolvent_stepper(lambda, tol_);
  Vector y = x;
  Vector sum = Vector::Zero(x.size());
  Vector carry = Vector::Zero(x.size());
  double residual_budget = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    residual_budget += tol_ * std::max(1.0, y.norm());
    y = step(y);
    // Kahan summation of A(J^{i+1} x).
    const Vector term = op_.apply(y) - carry;
    const Vector next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  out.point = std::move(y);
  out.quotient = sum / static_cast<double>(n);
  out.drift = conditioning_ * residual_budget;
  // A(J_lambda .) is L-Lipschitz, so perturbed inputs move each term by at most L * drift.
  const double reach = space_.norm(x) + out.drift + t * space_.norm(op_.apply(x)) + 1.0;
  out.quotient_drift = op_.lipschitz_bound(space_, reach) * out.drift;
  return out;
}

int SemigroupEvaluator::truncation_level(double delta) const {
  // 2^{-k} <= delta / 2
  return std::max(0, static_cast<int>(std::ceil(std::log2(2.0 / delta))));
}

std::uint64_t SemigroupEvaluator::required_steps(double t, const Vector& x, double delta) const {
  if (!(delta > 0.0)) throw DomainError("semigroup_eval needs delta > 0");
  if (!(t >= 0.0)) throw DomainError("semigroup_eval needs t >= 0");
  if (t == 0.0) return 0;
  const double scale = std::max(space_.norm(x), space_.norm(op_.apply(x)));
  const double b = std::max(scale * (1.0 + 1e-12), std::numeric_limits<double>::min());
  const double T = std::nextafter(t, std::numeric_limits<double>::infinity());
  std::uint64_t n = std::max<std::uint64_t>(cl_rate(truncation_level(delta), b, T), 8);
  if (std::isfinite(op_.lambda0())) {
    const double guard = std::ceil(t / op_.lambda0()) + 1.0;
    if (guard >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
    n = std::max(n, static_cast<std::uint64_t>(guard));
  }
  return n;
}

SemigroupValue SemigroupEvaluator::semigroup_eval_detailed(double t, const Vector& x, double delta) const {
  op_.check_dimension(x);
  const std::uint64_t n = required_steps(t, x, delta);
  SemigroupValue v;
  v.delta = delta;
  v.k = truncation_level(delta);
  if (t == 0.0) {
    v.point = x;
    v.quotient = op_.apply(x);
    return v;
  }
  if (op_.kind() == OperatorKind::constant && !std::isfinite(op_.lambda0())) {
    // Every iterate equals x - t q whatever n is.
    v.point = x - t * op_.offset();
    v.quotient = op_.offset();
    v.n_used = 1;
    return v;
  }
  if (n > step_cap_) {
    throw BudgetExceeded("semigroup_eval needs " + std::to_string(n) + " resolvent steps (cap " +
                             std::to_string(step_cap_) + ")",
                         n);
  }
  if (static_cast<double>(n) * tol_ * conditioning_ > delta / 2.0) {
    throw BudgetExceeded("resolvent tolerance cannot meet delta/2 over " + std::to_string(n) + " steps", n);
  }
  ClIterate it = cl_iterate_detailed(t, x, n);
  if (it.drift > delta / 2.0) {
    throw BudgetExceeded("accumulated resolvent drift exceeds delta/2", n);
  }
  v.point = std::move(it.point);
  v.quotient = std::move(it.quotient);
  v.n_used = n;
  v.drift = it.drift;
  v.quotient_drift = it.quotient_drift;
  return v;
}

Vector SemigroupEvaluator::semigroup_eval(double t, const Vector& x, double delta) const {
  return semigroup_eval_detailed(t, x, delta).point;
}

std::vector<SemigroupValue> SemigroupEvaluator::evaluate_grid(const std::vector<double>& ts, const Vector& x,
                                                              double delta, unsigned threads) const {
  return parallel_map(
      ts.size(), [&](std::size_t i) { return semigroup_eval_detailed(ts[i], x, delta); }, threads);
}

}  // namespace nlsg
