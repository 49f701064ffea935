#include "nlsg/rates_reich.hpp"

#include <algorithm>
#include <cmath>

#include "nlsg/errors.hpp"

namespace nlsg {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

double eta_clamped(const ConvexityModulus& eta, double arg) { return eta(std::min(arg, 2.0)); }

}  // namespace

void ReichParams::validate() const {
  if (b < 1) throw DomainError("reich parameters need b >= 1");
  if (!eta || !range.f) throw DomainError("reich parameters need eta and a witness bound f");
  if (range.E < 1 || range.E < range.d_inf) throw DomainError("E must satisfy E >= max{1, d}");
  if (range.D && (!(*range.D > 0.0) || *range.D > range.d_inf)) throw DomainError("D must satisfy 0 < D <= d");
}

nlohmann::json ReichParams::snapshot() const {
  nlohmann::json j{{"b", b}, {"d_inf", range.d_inf}, {"E", range.E}, {"D", nullptr}, {"label", label}};
  if (range.D) j["D"] = *range.D;
  return j;
}

double phi_inf(double eps, double b, const WitnessBound& f) {
  require_positive(eps, "phi_inf epsilon");
  return 8.0 * (b + f(eps / 2.0)) / eps;
}

double psi_escape(double K, double b, double D) {
  if (!(D > 0.0)) throw DomainError("escape threshold needs D > 0");
  return (b + K) / D;
}

double phi1_reich(double eps, double b, double D, double c, const ConvexityModulus& eta, const WitnessBound& f) {
  require_positive(eps, "phi1 epsilon");
  require_positive(D, "phi1 D");
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("phi1 c must be non-negative and finite");
  const double e = 2.0 * eta_clamped(eta, eps / 2.0);
  const double g = D * e * e / 18.0;
  return std::max({psi_escape(c + 1.0, b, D), psi_escape((4.0 / eps + 1.0) * c, b, D), (c + b) / g,
                   phi_inf(g, b, f)});
}

double phi2_reich_unsmoothed(double eps, double D, const ReichParams& p) {
  require_positive(eps, "phi2' epsilon");
  p.validate();
  const double E = p.range.E;
  const double c = p.range.f(2.0 * D * eta_clamped(p.eta, eps / (12.0 * E)));
  return std::max(phi_inf(eps / 3.0, p.b, p.range.f), phi1_reich(eps / (6.0 * E), p.b, D, c, p.eta, p.range.f));
}

double phi2_reich_unsmoothed(double eps, const ReichParams& p) {
  if (!p.range.D) throw DomainError("unsmoothed rate needs an explicit lower bound D");
  return phi2_reich_unsmoothed(eps, *p.range.D, p);
}

double phi2_reich(double eps, const ReichParams& p) {
  require_positive(eps, "phi2 epsilon");
  p.validate();
  const double E = p.range.E;
  const double c = p.range.f(eps * eta_clamped(p.eta, eps / (12.0 * E)) / 2.0);
  return std::max({phi_inf(eps / 4.0, p.b, p.range.f), phi_inf(eps / 3.0, p.b, p.range.f),
                   phi1_reich(eps / (6.0 * E), p.b, eps / 4.0, c, p.eta, p.range.f)});
}

double unique_limit_gap(double eps, const ReichParams& p) {
  require_positive(eps, "gap epsilon");
  const double E = p.range.E;
  return std::min(eps * eta_clamped(p.eta, eps / (16.0 * (E + 1.0))) / 4.0, eps / 8.0);
}

double reich_inner_argument(double eps, const ReichParams& p) {
  require_positive(eps, "Phi epsilon");
  const double E = p.range.E;
  return std::min(eps * eta_clamped(p.eta, (eps / 8.0) / (16.0 * (E + 1.0))) / 32.0, eps / 64.0);
}

double reich_threshold(double eps, const ReichParams& p) {
  const double m = reich_inner_argument(eps, p);
  const double fm = p.range.f(m);
  return std::max({(4.0 / eps) * (p.b + fm), (8.0 / eps) * fm, phi2_reich(eps / 2.0, p)});
}

RateCertificate reich_certificate(Claim claim, double eps, const ReichParams& p, double escape_K) {
  p.validate();
  RateCertificate cert;
  cert.epsilon = eps;
  cert.claim = claim;
  cert.direction = Direction::all_t_above;
  cert.params = p.snapshot();
  switch (claim) {
    case Claim::reich_resolvent_roc: cert.threshold = phi_inf(eps, p.b, p.range.f); break;
    case Claim::reich_escape:
      if (!p.range.D) throw DomainError("escape certificate needs D");
      cert.threshold = psi_escape(escape_K, p.b, *p.range.D);
      cert.params["K"] = escape_K;
      break;
    case Claim::reich_direction: {
      if (!p.range.D) throw DomainError("direction certificate needs D");
      const double D = *p.range.D;
      // The near-infimum witness at accuracy 2 d eta(eps/2) bounds ||y||, ||z|| by c.
      const double c = p.range.f(2.0 * D * eta_clamped(p.eta, eps / 2.0));
      cert.threshold = phi1_reich(eps, p.b, D, c, p.eta, p.range.f);
      cert.params["c"] = c;
      break;
    }
    case Claim::reich_cauchy: cert.threshold = phi2_reich(eps, p); break;
    case Claim::reich_main: cert.threshold = reich_threshold(eps, p); break;
    default: throw DomainError("not a large-t claim: " + to_string(claim));
  }
  if (!(cert.threshold >= 0.0) || !std::isfinite(cert.threshold)) {
    throw DomainError("rate threshold is not a finite number");
  }
  return cert;
}

RateCertificate reich_rate(double eps, const ReichParams& p) { return reich_certificate(Claim::reich_main, eps, p); }

void require_full_range(const Operator& op) {
  if (std::isfinite(op.lambda0())) throw Unsupported("large-t rates need the full range condition (unbounded lambda0)");
}

Vector v_limit(const SemigroupEvaluator& ev, const Vector& x, double eps, const ReichParams& p) {
  require_full_range(ev.op());
  const double T = phi2_reich(eps / 2.0, p);
  return -ev.op().resolvent(T, x, ev.resolvent_tol()) / T;
}

}  // namespace nlsg
