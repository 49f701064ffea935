#include <gtest/gtest.h>

#include <cmath>

#include "nlsg/errors.hpp"
#include "nlsg/verify.hpp"
#include "property.hpp"

using namespace nlsg;
using nlsg::testing::describe;
using nlsg::testing::for_all;
using nlsg::testing::Gen;

namespace {

// Accretive in every l_p: symmetric, nonpositive off-diagonal, diagonally dominant.
Matrix random_m_matrix(Gen& g, int d) {
  Matrix M = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (g.coin(0.6)) M(i, j) = M(j, i) = -g.uniform(0.0, 2.0);
    }
  }
  for (int i = 0; i < d; ++i) M(i, i) = -M.row(i).sum() + g.uniform(0.0, 1.0);
  return M;
}

ScalarFn random_fn(Gen& g) {
  switch (g.integer(0, 3)) {
    case 0: return ScalarFn::power(g.uniform(1.0, 4.0), g.uniform(0.0, 2.0));
    case 1: return ScalarFn::exp(g.log_uniform(0.1, 2.0));
    case 2: return ScalarFn::linear(g.uniform(0.0, 3.0));
    default: return ScalarFn::zero();
  }
}

Operator random_operator(Gen& g, int d) {
  switch (g.integer(0, 2)) {
    case 0: return Operator::linear_psd(random_m_matrix(g, d), g.vector(d, 1e-3, 2.0));
    case 1: {
      std::vector<ScalarFn> fns;
      for (int i = 0; i < d; ++i) fns.push_back(random_fn(g));
      return Operator::diagonal(std::move(fns));
    }
    default: return Operator::constant(g.vector(d, 1e-2, 2.0));
  }
}

}  // namespace

TEST(Properties, ResolventIsNonexpansiveInItsSpace) {
  for_all(101, 300, [](Gen& g) {
    const Space s = g.space(4);
    const Operator A = random_operator(g, s.dimension());
    ASSERT_TRUE(A.accretive_in(s));
    const Vector x = g.vector(s.dimension(), 1e-2, 3.0), y = g.vector(s.dimension(), 1e-2, 3.0);
    const double lambda = g.log_uniform(1e-3, 1e2);
    const double lhs = s.norm(A.resolvent(lambda, x) - A.resolvent(lambda, y));
    EXPECT_LE(lhs, s.norm(x - y) * (1.0 + 1e-9) + 1e-10) << describe(x) << describe(y) << A.descriptor().dump();
  });
}

TEST(Properties, ResolventIdentity) {
  for_all(102, 300, [](Gen& g) {
    const Space s = g.space(4);
    const Operator A = random_operator(g, s.dimension());
    const Vector x = g.vector(s.dimension(), 1e-2, 3.0);
    const double lambda = g.log_uniform(1e-3, 1e2), gamma = g.log_uniform(1e-3, 1e2);
    const Vector jl = A.resolvent(lambda, x);
    const Vector rhs = A.resolvent(gamma, (gamma / lambda) * x + (1.0 - gamma / lambda) * jl);
    EXPECT_LE(s.norm(jl - rhs), 1e-8 * (1.0 + gamma / lambda) * (1.0 + s.norm(x)));
  });
}

TEST(Properties, YosidaBoundedByOperatorNorm) {
  for_all(103, 300, [](Gen& g) {
    const Space s = g.space(4);
    const Operator A = random_operator(g, s.dimension());
    const Vector x = g.vector(s.dimension(), 1e-2, 3.0);
    const double lambda = g.log_uniform(1e-4, 1e2);
    EXPECT_LE(s.norm(A.yosida(lambda, x)), s.norm(A.apply(x)) * (1.0 + 1e-9) + 1e-9);
  });
}

TEST(Properties, ClosedFormSemigroupLawAndContraction) {
  for_all(104, 200, [](Gen& g) {
    const Space s = g.space(4);
    const Operator A = random_operator(g, s.dimension());
    const Vector x = g.vector(s.dimension(), 1e-2, 2.0), y = g.vector(s.dimension(), 1e-2, 2.0);
    const double t = g.log_uniform(1e-3, 3.0), r = g.log_uniform(1e-3, 3.0);
    const double scale = 1.0 + s.norm(x) + s.norm(y);
    EXPECT_LE(s.norm(A.exact_semigroup(t + r, x) - A.exact_semigroup(t, A.exact_semigroup(r, x))), 1e-10 * scale);
    EXPECT_LE(s.norm(A.exact_semigroup(t, x) - A.exact_semigroup(t, y)), s.norm(x - y) + 1e-10 * scale);
  });
}

TEST(Properties, CrandallLiggettWithinDeltaOfClosedForm) {
  for_all(105, 25, [](Gen& g) {
    const Space s = Space::euclidean(g.integer(1, 3));
    const Operator A = random_operator(g, s.dimension());
    const Vector x = g.vector(s.dimension(), 1e-3, 0.1);
    const SemigroupEvaluator ev(A, s);
    const double delta = g.log_uniform(1e-3, 1e-1);
    const double t = g.uniform(0.05, 0.5);
    try {
      const Vector y = ev.semigroup_eval(t, x, delta);
      EXPECT_LE(s.norm(y - A.exact_semigroup(t, x)), delta) << A.descriptor().dump();
    } catch (const BudgetExceeded&) {
      // Large ||Ax|| pushes n past the cap; nothing to compare.
    }
  });
}

TEST(Properties, DualityMapHomogeneousAndNormPreserving) {
  for_all(106, 500, [](Gen& g) {
    const Space s = g.space(6);
    const Vector x = g.vector(s.dimension());
    const double a = g.uniform(-5.0, 5.0);
    const Vector jx = s.duality_map(x);
    EXPECT_LE((s.duality_map(a * x) - a * jx).norm(), 1e-12 * (1.0 + std::abs(a)) * jx.norm());
    EXPECT_NEAR(s.dual_norm(jx), s.norm(x), 1e-12 * s.norm(x));
  });
}

TEST(Properties, ConvexityModulusMidpoint) {
  for_all(107, 1000, [](Gen& g) {
    const Space s = g.space(5);
    const Vector x = g.unit(s), y = g.unit(s);
    const double e = s.norm(x - y);
    if (e < 1e-6) return;
    EXPECT_LE(s.norm(0.5 * (x + y)), 1.0 - s.ucx_modulus(std::min(e, 2.0)) + 1e-12);
  });
}

TEST(Properties, SemiInnerModulusHolds) {
  for_all(108, 1000, [](Gen& g) {
    const Space s = g.space(4);
    const double b = g.log_uniform(0.1, 10.0), eps = g.log_uniform(1e-4, 1.0);
    const Vector x = g.uniform(0.0, b) * g.unit(s), z = g.uniform(0.0, b) * g.unit(s);
    const Vector y = x + g.uniform(0.0, 1.0) * s.semi_inner_modulus(b, eps) * g.unit(s);
    EXPECT_LE(s.semi_inner(z, y), s.semi_inner(z, x) + eps + 1e-12 * b * b);
  });
}

TEST(Properties, PlantCertificateSoundOnRandomDiagonal) {
  for_all(109, 20, [](Gen& g) {
    std::vector<ScalarFn> fns;
    const int d = g.integer(1, 3);
    for (int i = 0; i < d; ++i) fns.push_back(random_fn(g));
    const Instance inst =
        make_instance("random", Space::euclidean(d), Operator::diagonal(std::move(fns)), g.vector(d, 1e-2, 1.5));
    SamplingPlan plan;
    plan.per_decade = 8;
    const double eps = g.log_uniform(0.05, 1.0);
    const auto r = verify_certificate(plant_rate(eps, plant_params(inst)), inst, plan);
    EXPECT_TRUE(r.pass) << inst.descriptor().dump() << " eps " << eps;
  });
}

TEST(Properties, EmpiricalThresholdNeverBelowCertified) {
  for_all(110, 20, [](Gen& g) {
    const double x0 = g.uniform(0.1, 1.0);
    const Instance inst = catalog::scalar_linear(x0);
    const double eps = g.log_uniform(0.01, 0.2);
    const auto et = empirical_threshold(inst, QuantityId::plant, eps, Direction::all_t_below, SamplingPlan{});
    if (et.status == ThresholdStatus::never_below) FAIL() << "quantity exceeds eps everywhere";
    EXPECT_GE(et.t_star, plant_rate(eps, plant_params(inst)).threshold);
  });
}
