#pragma once

#include "nlsg/certificate.hpp"
#include "nlsg/operator.hpp"
#include "nlsg/semigroup.hpp"

namespace nlsg {

/// Inputs of the large-t rate chain.
struct ReichParams {
  int b = 1;  ///< b >= ||x||, ||v||
  ConvexityModulus eta;
  RangeData range;
  std::string label;

  void validate() const;
  nlohmann::json snapshot() const;
};

/// 8 (b + f(eps/2)) / eps
double phi_inf(double eps, double b, const WitnessBound& f);
/// (b + K) / D
double psi_escape(double K, double b, double D);
double phi1_reich(double eps, double b, double D, double c, const ConvexityModulus& eta, const WitnessBound& f);
double phi2_reich(double eps, const ReichParams& p);
/// Uses p.range.D, which must be present.
double phi2_reich_unsmoothed(double eps, const ReichParams& p);
double phi2_reich_unsmoothed(double eps, double D, const ReichParams& p);
/// min{eps eta(min{eps/(16(E+1)), 2})/4, eps/8}: admissible excess of ||z|| over d.
double unique_limit_gap(double eps, const ReichParams& p);
/// The argument m at which the final threshold evaluates f.
double reich_inner_argument(double eps, const ReichParams& p);
double reich_threshold(double eps, const ReichParams& p);

RateCertificate reich_rate(double eps, const ReichParams& p);
/// Certificate for any large-t claim. reich_escape reads K from `escape_K`.
RateCertificate reich_certificate(Claim claim, double eps, const ReichParams& p, double escape_K = 0.0);

/// -J_T x / T at T = phi2_reich(eps/2); within eps of the limit direction v_x.
Vector v_limit(const SemigroupEvaluator& ev, const Vector& x, double eps, const ReichParams& p);

/// Throws Unsupported unless the operator satisfies the full range condition.
void require_full_range(const Operator& op);

}  // namespace nlsg
