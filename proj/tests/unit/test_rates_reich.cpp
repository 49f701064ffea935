#include <gtest/gtest.h>

#include <cmath>

#include "nlsg/errors.hpp"
#include "nlsg/instance.hpp"
#include "nlsg/rates_reich.hpp"
#include "property.hpp"

using namespace nlsg;
using nlsg::testing::for_all;
using nlsg::testing::Gen;

namespace {

ReichParams flat(int b, int E, double d, double fval, bool euclid_eta) {
  ReichParams p;
  p.b = b;
  p.eta = euclid_eta ? Space::euclidean(1).eta() : ConvexityModulus([](double) { return 1.0; });
  p.range.d_inf = d;
  p.range.E = E;
  p.range.f = [fval](double) { return fval; };
  p.range.witness = [](double) { return std::make_pair(Vector(Vector::Zero(1)), Vector(Vector::Zero(1))); };
  return p;
}

void expect_rel(double got, double want) { EXPECT_NEAR(got, want, 1e-13 * std::abs(want)) << "want " << want; }

}  // namespace

TEST(ReichChain, PhiInfAndPsi) {
  const WitnessBound one = [](double) { return 1.0; };
  EXPECT_DOUBLE_EQ(phi_inf(1.0, 2.0, one), 24.0);
  EXPECT_DOUBLE_EQ(psi_escape(3.0, 1.0, 2.0), 2.0);
  EXPECT_THROW(psi_escape(3.0, 1.0, 0.0), DomainError);
}

TEST(ReichChain, Phi1HandValue) {
  const ConvexityModulus eta1 = [](double) { return 1.0; };
  const WitnessBound three = [](double) { return 3.0; };
  EXPECT_DOUBLE_EQ(phi1_reich(2.0, 1.0, 1.0, 1.0, eta1, three), 144.0);
  EXPECT_THROW(phi1_reich(2.0, 1.0, 0.0, 1.0, eta1, three), DomainError);
  EXPECT_NO_THROW(phi1_reich(2.0, 1.0, 1.0, 0.0, eta1, three));
}

TEST(ReichChain, OracleUnitModulus) {
  const ReichParams p = flat(1, 1, 1.0, 1.0, false);
  expect_rel(phi_inf(6.0, p.b, p.range.f), 8.0 / 3.0);
  expect_rel(phi2_reich(6.0, p), 48.0);
  expect_rel(reich_threshold(6.0, p), 96.0);
}

TEST(ReichChain, OracleEuclideanConstant) {
  const ReichParams p = flat(2, 1, 1.0, 1.0, true);
  EXPECT_DOUBLE_EQ(phi_inf(1.0, p.b, p.range.f), 24.0);
  expect_rel(phi2_reich(1.0, p), 572811155.9061481509539);
  expect_rel(reich_threshold(1.0, p), 18341904167.95311228048);
}

TEST(ReichChain, ConstantInstanceMatchesOracle) {
  Instance inst = catalog::constant_unit();
  inst.b = 2;
  inst.E = 1;
  const ReichParams p = reich_params(inst);
  EXPECT_DOUBLE_EQ(p.range.d_inf, 1.0);
  expect_rel(reich_rate(1.0, p).threshold, 18341904167.95311228048);
}

TEST(ReichChain, GapAndInnerArgument) {
  const ReichParams p = flat(1, 1, 1.0, 1.0, true);
  for (double eps : {1.0, 0.5, 0.25}) {
    EXPECT_LE(unique_limit_gap(eps, p), eps / 8.0);
    EXPECT_LE(reich_inner_argument(eps, p), eps / 64.0);
    EXPECT_GT(reich_inner_argument(eps, p), 0.0);
  }
  const ReichParams one = flat(1, 1, 1.0, 1.0, false);
  EXPECT_DOUBLE_EQ(unique_limit_gap(1.0, one), 0.125);
  EXPECT_DOUBLE_EQ(reich_inner_argument(1.0, one), 1.0 / 64.0);
}

TEST(ReichChain, ThresholdDominatesCauchyRate) {
  for_all(23, 200, [](Gen& g) {
    const double d = g.uniform(0.0, 3.0);
    ReichParams p = flat(g.integer(1, 4), static_cast<int>(std::ceil(d)) + g.integer(0, 2), d, g.uniform(0.0, 5.0),
                         g.coin());
    if (p.range.E < 1) p.range.E = 1;
    const double eps = g.log_uniform(1e-2, 4.0);
    EXPECT_GE(reich_threshold(eps, p), phi2_reich(eps / 2.0, p));
    EXPECT_GE(phi2_reich(eps, p), phi_inf(eps / 3.0, p.b, p.range.f));
    EXPECT_TRUE(std::isfinite(reich_threshold(eps, p)));
  });
}

TEST(ReichChain, UnsmoothedNeedsD) {
  ReichParams p = flat(1, 2, 1.0, 1.0, true);
  EXPECT_THROW(phi2_reich_unsmoothed(0.5, p), DomainError);
  p.range.D = 1.0;
  EXPECT_GT(phi2_reich_unsmoothed(0.5, p), 0.0);
  p.range.D = 2.0;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(ReichCertificates, DirectionAndParams) {
  ReichParams p = flat(1, 2, 1.0, 1.0, true);
  p.range.D = 1.0;
  for (Claim c : {Claim::reich_resolvent_roc, Claim::reich_escape, Claim::reich_direction, Claim::reich_cauchy,
                  Claim::reich_main}) {
    const auto cert = reich_certificate(c, 0.5, p, 3.0);
    EXPECT_EQ(cert.direction, Direction::all_t_above);
    EXPECT_GT(cert.threshold, 0.0);
  }
  EXPECT_DOUBLE_EQ(reich_certificate(Claim::reich_escape, 0.5, p, 3.0).threshold, 4.0);
  EXPECT_THROW(reich_certificate(Claim::plant_main, 0.5, p), DomainError);
}

TEST(ReichCertificates, FiniteLambda0Unsupported) {
  Instance inst = catalog::scalar_linear();
  inst.op = inst.op.with_lambda0(0.5);
  EXPECT_THROW(reich_params(inst), Unsupported);
}

TEST(ReichLimit, ConstantDirection) {
  const Instance inst = catalog::constant_unit();
  const SemigroupEvaluator ev(inst.op, inst.space);
  const Vector v = v_limit(ev, inst.x0, 0.5, reich_params(inst));
  EXPECT_NEAR(v[0], 1.0, 1e-6);
  EXPECT_NEAR(v[1], 0.0, 1e-6);
}
