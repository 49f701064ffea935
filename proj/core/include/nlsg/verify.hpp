#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlsg/certificate.hpp"
#include "nlsg/instance.hpp"
#include "nlsg/semigroup.hpp"

namespace nlsg {

struct Slack {
  double sigma = 0.05;
  double kappa = 1e-7;

  double bound(double eps) const { return eps * (1.0 + sigma) + kappa; }
};

enum class GridKind { geometric, uniform };

struct SamplingPlan {
  GridKind kind = GridKind::geometric;
  int per_decade = 32;
  /// all_t_below grids cover (threshold 10^{-decades_below}, threshold].
  double decades_below = 4.0;
  /// all_t_above grids cover [threshold, above_factor threshold].
  double above_factor = 64.0;
  std::uint64_t seed = 0;
  /// Random samples per check in the axiom suite.
  int samples = 100;
  unsigned threads = 0;

  nlohmann::json to_json() const;
};

/// Shortest round-trip decimal form, '.' separator regardless of locale; NaN prints empty.
std::string format_number(double v);

std::vector<double> below_grid(double threshold, const SamplingPlan& plan);
std::vector<double> above_grid(double threshold, const SamplingPlan& plan);

struct Sample {
  std::string label;
  double t = std::numeric_limits<double>::quiet_NaN();
  double s = std::numeric_limits<double>::quiet_NaN();
  double observed = 0.0;
  double bound = 0.0;
  bool pass = false;
  /// How the quantity was obtained: "resolvent", "cl", "closed_form", "exact", "error", ...
  std::string route;
  /// Propagated numerical error of `observed`.
  double budget = 0.0;
  /// Random draws summarized by this row (observed is the worst of them).
  std::size_t trials = 1;
};

struct VerificationReport {
  std::string claim;
  nlohmann::json instance;
  nlohmann::json grid;
  Slack slack;
  std::vector<Sample> samples;
  bool pass = true;
  bool negative_control = false;
  /// max{kappa, largest propagated numerical budget}
  double kappa_effective = 0.0;
  std::optional<double> conservativeness_ratio;
  nlohmann::json header;

  void finalize();
  std::size_t failures() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Plant quantity ||J_t x - S(t)x|| / t evaluated as ||A_t x - (x - S(t)x)/t||.
struct QuantityValue {
  double value = 0.0;
  std::string route;
  double budget = 0.0;
};

struct SemigroupQuotient {
  Vector quotient;  // (x - S(t)x) / t
  Vector point;     // S(t)x
  std::string route;
  double budget = 0.0;  // error bound on quotient
};

/// S(t)x and its difference quotient at accuracy delta: CL when the step
/// budget allows, the closed form otherwise.
SemigroupQuotient semigroup_quotient(const SemigroupEvaluator& ev, double t, const Vector& x, double delta);

QuantityValue plant_quantity(const SemigroupEvaluator& ev, const Vector& x, double t, double delta);

RateCertificate falsify(const RateCertificate& cert, double factor);

VerificationReport verify_certificate(const RateCertificate& cert, const Instance& inst, const SamplingPlan& plan,
                                      const Slack& slack = {});

enum class QuantityId { plant, reich };
enum class ThresholdStatus { found, always_below, never_below };
std::string to_string(ThresholdStatus s);

struct EmpiricalThreshold {
  ThresholdStatus status = ThresholdStatus::found;
  double t_star = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Largest (all_t_below) or smallest (all_t_above) t* with quantity <= eps on
/// the grid side of t*, searched on [t_lo, t_hi] then refined by bisection.
EmpiricalThreshold empirical_threshold(const Instance& inst, QuantityId q, double eps, Direction direction,
                                       const SamplingPlan& plan, double t_lo = 1e-8, double t_hi = 1e4);

/// ||J_lambda x - S(t)x|| <= (1 - t/lambda) ||x - J_lambda x|| + (2/lambda) int_0^t ||x - S(s)x|| ds
VerificationReport clarkson_integral_check(const Instance& inst, const Vector& x, double lambda, double t,
                                           const SamplingPlan& plan, const Slack& slack = {}, int nodes = 129);

}  // namespace nlsg
