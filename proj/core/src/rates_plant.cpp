#include "nlsg/rates_plant.hpp"

#include <algorithm>
#include <cmath>

#include "nlsg/errors.hpp"

namespace nlsg {

namespace {

void require_positive(double eps, const char* what) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError(std::string(what) + " needs a positive finite epsilon");
}

// min{v, lambda0/2}; the comparand disappears for unbounded lambda0.
double clamp_lambda(double v, const PlantParams& p) {
  return std::isfinite(p.lambda0) ? std::min(v, p.lambda0 / 2.0) : v;
}

double eta_clamped(const PlantParams& p, double arg) { return p.eta(std::min(arg, 2.0)); }

}  // namespace

void PlantParams::validate() const {
  if (b < 1 || n < 1) throw DomainError("plant parameters need b, n >= 1");
  if (!eta || !omega || !phi) throw DomainError("plant parameters need eta, omega and phi");
  if (!(lambda0 > 0.0)) throw DomainError("lambda0 must be positive");
  if (std::isfinite(lambda0) && n < lambda0) throw DomainError("n must dominate a finite lambda0");
  if (c_lb && !(*c_lb > 0.0)) throw DomainError("c_lb must be positive");
}

double PlantParams::ball() const {
  const double nn = n;
  return b + 2.0 * nn + 3.0 * nn * nn;
}

nlohmann::json PlantParams::snapshot() const {
  nlohmann::json j{{"b", b}, {"n", n}, {"lambda0", nullptr}, {"label", label}};
  if (std::isfinite(lambda0)) j["lambda0"] = lambda0;
  if (c_lb) j["c_lb"] = *c_lb;
  return j;
}

double phi1(double eps, const PlantParams& p) {
  require_positive(eps, "phi1");
  p.validate();
  return clamp_lambda(p.phi(eps, p.ball()) / p.b, p);
}

double psi_miyadera(double eps, double b, const SemiInnerModulus& omega) {
  require_positive(eps, "psi");
  if (!(b > 0.0)) throw DomainError("psi needs b > 0");
  return omega(2.0 * b, eps) / (2.0 * b);
}

double phi2(double eps, const PlantParams& p) {
  require_positive(eps, "phi2");
  const double inner = eps * eps * clamp_lambda(phi1(eps / 2.0, p), p) / 4.0;
  return psi_miyadera(inner, p.ball(), p.omega);
}

double phi2_unsmoothed(double eps, double c, const PlantParams& p) {
  require_positive(eps, "phi2'");
  require_positive(c, "phi2' (c)");
  const double inner = eps * c * clamp_lambda(phi1(std::min(eps / 2.0, c / 2.0), p), p) / 4.0;
  return psi_miyadera(inner, p.ball(), p.omega);
}

double phi3_unsmoothed(double eps, double c, const PlantParams& p) {
  require_positive(eps, "phi3'");
  require_positive(c, "phi3' (c)");
  const double e = eta_clamped(p, eps / (3.0 * p.b));
  const double v = std::min({phi1(eps / 3.0, p), phi1(e * c / 2.0, p), phi1(c / 2.0, p)});
  return clamp_lambda(v, p);
}

double phi3(double eps, const PlantParams& p) { return phi3_unsmoothed(eps, eps / 2.0, p); }

double phi4_unsmoothed(double eps, double c, const PlantParams& p) {
  require_positive(eps, "phi4'");
  require_positive(c, "phi4' (c)");
  const double e = eta_clamped(p, eps);
  const double v = std::min({phi1(eps / 3.0, p), phi2(eps / 3.0, p), phi1(e * c / 4.0, p),
                             std::sqrt(phi2(c / 2.0, p)), e * c / (8.0 * p.b), 1.0});
  return clamp_lambda(v, p);
}

double phi4(double eps, const PlantParams& p) { return phi4_unsmoothed(eps, eps / 2.0, p); }

double plant_threshold(double eps, const PlantParams& p) {
  require_positive(eps, "Phi");
  const double m = std::min(phi3(eps / 2.0, p), phi4(eps / 2.0, p));
  return m * m;
}

RateCertificate plant_certificate(Claim claim, double eps, const PlantParams& p) {
  RateCertificate cert;
  cert.epsilon = eps;
  cert.claim = claim;
  cert.direction = Direction::all_t_below;
  cert.params = p.snapshot();
  switch (claim) {
    case Claim::resolvent_roc: cert.threshold = phi1(eps, p); break;
    case Claim::miyadera: cert.threshold = psi_miyadera(eps, p.b, p.omega); break;
    case Claim::semigroup_roc: cert.threshold = phi2(eps, p); break;
    case Claim::res_cauchy: cert.threshold = phi3(eps, p); break;
    case Claim::res_semi_comb: cert.threshold = phi4(eps, p); break;
    case Claim::plant_main: cert.threshold = plant_threshold(eps, p); break;
    default: throw DomainError("not a small-t claim: " + to_string(claim));
  }
  if (!(cert.threshold > 0.0) || !std::isfinite(cert.threshold)) {
    throw DomainError("rate threshold is not a positive finite number");
  }
  return cert;
}

RateCertificate plant_rate(double eps, const PlantParams& p) { return plant_certificate(Claim::plant_main, eps, p); }

}  // namespace nlsg
