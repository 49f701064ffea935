#pragma once

#include "nlsg/verify.hpp"

namespace nlsg {

struct AxiomOptions {
  bool space_checks = true;
  bool operator_checks = true;
  bool semigroup_checks = true;
  /// Draws per space check; operator checks use plan.samples.
  int space_samples = 10000;
  /// Draws per semigroup check; each costs up to three CL runs.
  int semigroup_samples = 4;
  double space_tol = 1e-9;
  double operator_tol = 1e-8;
  /// Total delta budget of one semigroup-law comparison.
  double semigroup_budget = 1e-4;
};

/// Duality-map axioms, semi-inner axioms, difference-quotient and accretivity
/// transfer inequalities, the convexity-modulus inequalities and the omega modulus.
VerificationReport space_axioms(const Space& space, const SamplingPlan& plan, const AxiomOptions& opt = {});

/// Basic resolvent properties (items 1-8), resolvent-at-zero bound, accretivity.
VerificationReport operator_axioms(const Space& space, const Operator& op, const SamplingPlan& plan,
                                   const AxiomOptions& opt = {});

/// Lipschitz continuity in t, nonexpansiveness, semigroup law, growth bound.
VerificationReport semigroup_axioms(const Space& space, const Operator& op, const SamplingPlan& plan,
                                    const AxiomOptions& opt = {});

/// ||S(t+s)x - S(t)S(s)x|| with every evaluation at budget/3 through Crandall-Liggett.
Sample semigroup_law_sample(const SemigroupEvaluator& ev, const Vector& x, double t, double s, double budget);

/// All of the above, merged into one report.
VerificationReport axiom_suite(const Space& space, const Operator& op, const SamplingPlan& plan,
                               const AxiomOptions& opt = {});

}  // namespace nlsg
