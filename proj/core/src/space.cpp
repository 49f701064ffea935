#include "nlsg/space.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <string>

#include "nlsg/errors.hpp"

namespace nlsg {

namespace {

constexpr int kCalibrationSamples = 20000;
constexpr std::uint64_t kCalibrationSeed = 0x5eed0f0ca11b7a7eULL;

double lp_norm(const Vector& x, double p) {
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

}  // namespace

Space::Space(int dimension, NormKind kind, double p) : dimension_(dimension), kind_(kind), p_(p) {
  if (dimension < 1) throw DomainError("space dimension must be positive");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("l_p exponent must satisfy 1 < p < inf");
}

Space Space::euclidean(int dimension) { return Space(dimension, NormKind::euclidean, 2.0); }

Space Space::lp(int dimension, double p) {
  Space s(dimension, NormKind::lp, p);
  if (p != 2.0) s.calibrate_semi_inner_modulus();
  return s;
}

Space Space::from_descriptor(const nlohmann::json& d, int dimension) {
  if (!d.is_object() || !d.contains("norm")) throw ConfigError("space descriptor needs a \"norm\" field");
  for (const auto& [key, value] : d.items()) {
    if (key != "norm" && key != "p") throw ConfigError("unknown space field: " + key);
  }
  const auto norm = d.at("norm").get<std::string>();
  if (norm == "euclidean") {
    if (d.contains("p")) throw ConfigError("euclidean space takes no \"p\"");
    return euclidean(dimension);
  }
  if (norm == "lp") {
    if (!d.contains("p")) throw ConfigError("lp space needs \"p\"");
    try {
      return lp(dimension, d.at("p").get<double>());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown norm kind: " + norm);
}

nlohmann::json Space::descriptor() const {
  if (kind_ == NormKind::euclidean) return {{"norm", "euclidean"}};
  return {{"norm", "lp"}, {"p", p_}};
}

void Space::check_dimension(const Vector& x) const {
  if (x.size() != dimension_) {
    throw DimensionMismatch("vector of dimension " + std::to_string(x.size()) +
                            " in space of dimension " + std::to_string(dimension_));
  }
}

double Space::norm(const Vector& x) const {
  check_dimension(x);
  if (kind_ == NormKind::euclidean || p_ == 2.0) return x.norm();
  return lp_norm(x, p_);
}

double Space::dual_norm(const Vector& functional) const {
  check_dimension(functional);
  if (kind_ == NormKind::euclidean || p_ == 2.0) return functional.norm();
  return lp_norm(functional, p_ / (p_ - 1.0));
}

Vector Space::duality_map(const Vector& x) const {
  check_dimension(x);
  if (kind_ == NormKind::euclidean || p_ == 2.0) return x;
  const double nx = norm(x);
  if (nx == 0.0) return Vector::Zero(dimension_);
  // j(x)_i = ||x||^{2-p} |x_i|^{p-1} sgn(x_i), written scale-free.
  Vector j(dimension_);
  for (int i = 0; i < dimension_; ++i) {
    const double r = std::abs(x[i]) / nx;
    j[i] = std::copysign(nx * std::pow(r, p_ - 1.0), x[i]);
    if (x[i] == 0.0) j[i] = 0.0;
  }
  return j;
}

double Space::semi_inner(const Vector& y, const Vector& x) const {
  check_dimension(y);
  return y.dot(duality_map(x));
}

double Space::ucx_modulus(double eps) const {
  if (!(eps > 0.0) || eps > 2.0) throw DomainError("modulus of convexity needs 0 < eps <= 2");
  if (kind_ == NormKind::lp && p_ < 2.0) return (p_ - 1.0) * eps * eps / 16.0;
  if (kind_ == NormKind::euclidean || p_ == 2.0) {
    const double u = eps * eps / 4.0;
    return u / (1.0 + std::sqrt(1.0 - u));
  }
  // 1 - (1 - (eps/2)^p)^{1/p} without cancellation for small eps.
  const double u = std::pow(eps / 2.0, p_);
  return -std::expm1(std::log1p(-u) / p_);
}

double Space::clarkson_angle(const Vector& a, const Vector& b) const {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw DomainError("Clarkson angle is undefined for a zero vector");
  return std::min(2.0, norm(a / na - b / nb));
}

double Space::semi_inner_modulus(double b, double eps) const {
  if (!(b > 0.0) || !(eps > 0.0)) throw DomainError("semi-inner modulus needs b > 0 and eps > 0");
  if (!empirical_omega_) return eps / b;
  // <z, j(y) - j(x)> <= b * ||j(y) - j(x)||_q <= b^2 C (r / b)^gamma for r <= b.
  const double r = b * std::pow(eps / (b * b * holder_constant_), 1.0 / holder_exponent_);
  return 0.5 * std::min(b, r);
}

ConvexityModulus Space::eta() const {
  return [self = *this](double eps) { return self.ucx_modulus(eps); };
}

SemiInnerModulus Space::omega() const {
  return [self = *this](double b, double eps) { return self.semi_inner_modulus(b, eps); };
}

void Space::calibrate_semi_inner_modulus() {
  empirical_omega_ = true;
  holder_exponent_ = std::min(1.0, p_ - 1.0);

  std::mt19937_64 rng(kCalibrationSeed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  std::bernoulli_distribution sparse(0.3);

  auto random_direction = [&] {
    Vector w(dimension_);
    for (int i = 0; i < dimension_; ++i) w[i] = gauss(rng);
    if (sparse(rng)) {
      for (int i = 0; i < dimension_; ++i) {
        if (unit(rng) < 0.5) w[i] = 0.0;
      }
      if (w.isZero()) w[0] = 1.0;
    }
    return Vector(w / lp_norm(w, p_));
  };

  double worst = 0.0;
  for (int k = 0; k < kCalibrationSamples; ++k) {
    const double radius = (k % 4 == 0) ? std::pow(unit(rng), 4.0) : unit(rng);
    const Vector x = radius * random_direction();
    const double r = std::pow(10.0, -6.0 * unit(rng));
    Vector y = x + r * random_direction();
    if (k % 7 == 0) {
      // Push a coordinate across zero, where |t|^{p-1} is least regular.
      const int i = k % dimension_;
      y[i] = -x[i];
    }
    const double dist = lp_norm(x - y, p_);
    if (dist == 0.0 || dist > 1.0) continue;
    const double jump = dual_norm(duality_map(y) - duality_map(x));
    worst = std::max(worst, jump / std::pow(dist, holder_exponent_));
  }
  holder_constant_ = std::max(worst, 1.0);
}

}  // namespace nlsg
