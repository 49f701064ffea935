#include "nlsg/scalar_fn.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <string>

#include "nlsg/errors.hpp"

namespace nlsg {

namespace {

constexpr int kNewtonBudget = 200;

void reject_unknown(const nlohmann::json& d, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : d.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown scalar function field: " + key);
  }
}

}  // namespace

ScalarFn ScalarFn::power(double exponent, double coef) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) throw DomainError("power exponent must be >= 1");
  if (!(coef >= 0.0) || !std::isfinite(coef)) throw DomainError("power coefficient must be >= 0");
  return ScalarFn(Type::power, exponent, coef);
}

ScalarFn ScalarFn::linear(double slope) {
  if (!std::isfinite(slope)) throw DomainError("linear slope must be finite");
  return ScalarFn(Type::linear, 1.0, slope);
}

ScalarFn ScalarFn::exp(double coef) {
  if (!(coef > 0.0) || !std::isfinite(coef)) throw DomainError("exp coefficient must be > 0");
  return ScalarFn(Type::exp, 0.0, coef);
}

ScalarFn ScalarFn::zero() { return ScalarFn(Type::zero, 0.0, 0.0); }

ScalarFn ScalarFn::from_descriptor(const nlohmann::json& d) {
  if (!d.is_object() || !d.contains("type")) throw ConfigError("scalar function needs a \"type\"");
  const auto type = d.at("type").get<std::string>();
  try {
    if (type == "power") {
      reject_unknown(d, {"type", "exp", "coef"});
      if (!d.contains("exp")) throw ConfigError("power function needs \"exp\"");
      return power(d.at("exp").get<double>(), d.value("coef", 1.0));
    }
    if (type == "linear") {
      reject_unknown(d, {"type", "slope"});
      return linear(d.value("slope", 1.0));
    }
    if (type == "exp") {
      reject_unknown(d, {"type", "coef"});
      return exp(d.value("coef", 1.0));
    }
    if (type == "zero") {
      reject_unknown(d, {"type"});
      return zero();
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scalar function: ") + e.what());
  }
  throw ConfigError("unknown scalar function type: " + type);
}

nlohmann::json ScalarFn::descriptor() const {
  switch (type_) {
    case Type::power: return {{"type", "power"}, {"exp", exponent_}, {"coef", coef_}};
    case Type::linear: return {{"type", "linear"}, {"slope", coef_}};
    case Type::exp: return {{"type", "exp"}, {"coef", coef_}};
    case Type::zero: break;
  }
  return {{"type", "zero"}};
}

double ScalarFn::operator()(double y) const {
  switch (type_) {
    case Type::power: return std::copysign(coef_ * std::pow(std::abs(y), exponent_), y);
    case Type::linear: return coef_ * y;
    case Type::exp: return coef_ * std::exp(y);
    case Type::zero: break;
  }
  return 0.0;
}

double ScalarFn::derivative(double y) const {
  switch (type_) {
    case Type::power:
      if (exponent_ == 1.0) return coef_;
      return coef_ * exponent_ * std::pow(std::abs(y), exponent_ - 1.0);
    case Type::linear: return coef_;
    case Type::exp: return coef_ * std::exp(y);
    case Type::zero: break;
  }
  return 0.0;
}

double ScalarFn::lipschitz_on(double b) const {
  switch (type_) {
    case Type::power: return derivative(b);
    case Type::linear: return std::abs(coef_);
    case Type::exp: return coef_ * std::exp(b);
    case Type::zero: break;
  }
  return 0.0;
}

double ScalarFn::sup_abs_on(double b) const {
  switch (type_) {
    case Type::power: return coef_ * std::pow(b, exponent_);
    case Type::linear: return std::abs(coef_) * b;
    case Type::exp: return coef_ * std::exp(b);
    case Type::zero: break;
  }
  return 0.0;
}

double ScalarFn::resolvent(double lambda, double x, double abs_tol) const {
  if (lambda == 0.0 || type_ == Type::zero) return x;
  if (type_ == Type::linear || (type_ == Type::power && exponent_ == 1.0)) {
    const double denom = 1.0 + lambda * coef_;
    if (!(denom > 0.0)) throw ResolventFailure("1 + lambda * slope <= 0: resolvent undefined");
    return x / denom;
  }

  const auto g = [&](double y) { return y + lambda * (*this)(y) - x; };
  const double fx = (*this)(x);
  if (fx == 0.0) return x;
  // g(x) = lambda f(x) and g(x - lambda f(x)) has the opposite sign by monotonicity.
  double lo = fx > 0.0 ? x - lambda * fx : x;
  double hi = fx > 0.0 ? x : x - lambda * fx;
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ResolventFailure("resolvent bracket overflowed");

  double y = x;
  double best = y;
  double best_res = std::abs(g(y));
  for (int it = 0; it < kNewtonBudget; ++it) {
    const double gy = g(y);
    if (std::abs(gy) < best_res) {
      best = y;
      best_res = std::abs(gy);
    }
    if (std::abs(gy) <= abs_tol) return y;
    if (gy > 0.0) hi = y; else lo = y;
    double next = y - gy / (1.0 + lambda * derivative(y));
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const double width = hi - lo;
    if (next == y || width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      return best;
    }
    y = next;
  }
  if (best_res <= abs_tol) return best;
  throw ResolventFailure("scalar resolvent did not converge within the Newton budget");
}

double ScalarFn::flow(double t, double x) const {
  if (t == 0.0) return x;
  return x - t * flow_quotient(t, x);
}

double ScalarFn::flow_quotient(double t, double x) const {
  if (t == 0.0) return (*this)(x);
  switch (type_) {
    case Type::power:
      if (exponent_ != 1.0) {
        if (x == 0.0) return 0.0;
        const double a = 1.0 / (exponent_ - 1.0);
        const double u = (exponent_ - 1.0) * coef_ * t * std::pow(std::abs(x), exponent_ - 1.0);
        return x * -std::expm1(-a * std::log1p(u)) / t;
      }
      [[fallthrough]];
    case Type::linear: return x * -std::expm1(-coef_ * t) / t;
    case Type::exp: return std::log1p(coef_ * t * std::exp(x)) / t;
    case Type::zero: break;
  }
  return 0.0;
}

}  // namespace nlsg
