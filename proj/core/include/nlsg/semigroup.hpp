#pragma once

#include <cstdint>
#include <vector>

#include "nlsg/operator.hpp"
#include "nlsg/space.hpp"

namespace nlsg {

/// ceil(2^{2k+2} T^2 b^2), saturating at UINT64_MAX.
std::uint64_t cl_rate(int k, double b, double T);

/// 2^{-(m+3)} / max{1, A*}, with A* = A*(b+1) already evaluated.
double equicontinuity_threshold(double majorant_b_plus_1, int m);
double equicontinuity_threshold(const Operator& op, const Space& space, double b, int m);

struct ClIterate {
  Vector point;
  /// (x - point) / t accumulated as the mean of A(J^{i+1} x), free of cancellation.
  Vector quotient;
  std::uint64_t steps = 0;
  /// Bound on ||point - exact iterate|| from resolvent residuals.
  double drift = 0.0;
  /// Bound on the matching error of `quotient`.
  double quotient_drift = 0.0;
};

struct SemigroupValue {
  Vector point;
  Vector quotient;
  std::uint64_t n_used = 0;
  int k = 0;
  double delta = 0.0;
  double drift = 0.0;
  double quotient_drift = 0.0;
};

class SemigroupEvaluator {
 public:
  static constexpr std::uint64_t kDefaultStepCap = std::uint64_t{1} << 22;

  SemigroupEvaluator(Operator op, Space space, double resolvent_tol = kDefaultResolventTol,
                     std::uint64_t step_cap = kDefaultStepCap);

  const Operator& op() const noexcept { return op_; }
  const Space& space() const noexcept { return space_; }
  double resolvent_tol() const noexcept { return tol_; }
  std::uint64_t step_cap() const noexcept { return step_cap_; }

  /// (J_{t/n})^n x.
  Vector cl_iterate(double t, const Vector& x, std::uint64_t n) const;
  ClIterate cl_iterate_detailed(double t, const Vector& x, std::uint64_t n) const;

  /// Steps semigroup_eval would use; no evaluation.
  std::uint64_t required_steps(double t, const Vector& x, double delta) const;

  /// y with ||y - S(t)x|| <= delta. Throws BudgetExceeded when the step cap
  /// or the drift budget (delta/2) would be exceeded.
  Vector semigroup_eval(double t, const Vector& x, double delta) const;
  SemigroupValue semigroup_eval_detailed(double t, const Vector& x, double delta) const;

  /// Same as semigroup_eval_detailed over a t-grid, in parallel, results in grid order.
  std::vector<SemigroupValue> evaluate_grid(const std::vector<double>& ts, const Vector& x, double delta,
                                            unsigned threads = 0) const;

  /// Ratio between the space norm and the Euclidean norm used for residuals.
  double residual_conditioning() const noexcept { return conditioning_; }

 private:
  int truncation_level(double delta) const;

  Operator op_;
  Space space_;
  double tol_;
  std::uint64_t step_cap_;
  double conditioning_;
};

}  // namespace nlsg
