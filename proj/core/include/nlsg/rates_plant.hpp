#pragma once

#include <limits>
#include <optional>
#include <string>

#include "nlsg/certificate.hpp"
#include "nlsg/types.hpp"

namespace nlsg {

/// Inputs of the small-t rate chain.
struct PlantParams {
  int b = 1;  ///< b >= ||x||, ||v||
  int n = 1;  ///< n >= ||c||, ||d_c|| (and lambda0 when finite)
  ConvexityModulus eta;
  SemiInnerModulus omega;
  BracketModulus phi;
  double lambda0 = std::numeric_limits<double>::infinity();
  std::optional<double> c_lb;  ///< lower bound c <= |Ax| for the unsmoothed variants
  std::string label;           ///< free-form provenance of the moduli, echoed in snapshots

  void validate() const;
  /// b + 2n + 3n^2
  double ball() const;
  nlohmann::json snapshot() const;
};

double phi1(double eps, const PlantParams& p);
double psi_miyadera(double eps, double b, const SemiInnerModulus& omega);
double phi2(double eps, const PlantParams& p);
double phi2_unsmoothed(double eps, double c, const PlantParams& p);
double phi3(double eps, const PlantParams& p);
double phi3_unsmoothed(double eps, double c, const PlantParams& p);
double phi4(double eps, const PlantParams& p);
double phi4_unsmoothed(double eps, double c, const PlantParams& p);
/// (min{phi3(eps/2), phi4(eps/2)})^2
double plant_threshold(double eps, const PlantParams& p);

RateCertificate plant_rate(double eps, const PlantParams& p);
/// Certificate for any small-t claim (resolvent_roc .. plant_main).
RateCertificate plant_certificate(Claim claim, double eps, const PlantParams& p);

}  // namespace nlsg
