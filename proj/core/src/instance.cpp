#include "nlsg/instance.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "nlsg/errors.hpp"

namespace nlsg {

namespace {

int ceil_at_least_one(double v) {
  if (!std::isfinite(v) || v > 1e9) throw ConfigError("bound too large for an integer parameter");
  return std::max(1, static_cast<int>(std::ceil(v)));
}

}  // namespace

nlohmann::json Instance::descriptor() const {
  nlohmann::json j{{"name", name},
                   {"space", space.descriptor()},
                   {"operator", op.descriptor()},
                   {"x0", std::vector<double>(x0.data(), x0.data() + x0.size())},
                   {"b", b},
                   {"n", n}};
  if (E) j["E"] = *E;
  if (D) j["D"] = *D;
  return j;
}

void Instance::validate() const {
  if (space.dimension() != op.dimension() || x0.size() != op.dimension()) {
    throw ConfigError("space, operator and x0 dimensions differ");
  }
  if (!x0.allFinite()) throw ConfigError("x0 must be finite");
  if (b < minimal_b(space, op, x0)) throw ConfigError("b must dominate ||x0|| and ||A x0||");
  if (n < minimal_n(space, op)) throw ConfigError("n must dominate the domain witness norms");
  if (E && *E < 1) throw ConfigError("E must be >= 1");
  if (D && !(*D > 0.0)) throw ConfigError("D must be positive");
}

int minimal_b(const Space& space, const Operator& op, const Vector& x) {
  return ceil_at_least_one(std::max(space.norm(x), space.norm(op.apply(x))));
}

int minimal_n(const Space& space, const Operator& op) {
  const auto w = op.domain_witness();
  double v = std::max(space.norm(w.c), space.norm(w.d_c));
  if (std::isfinite(op.lambda0())) v = std::max(v, op.lambda0());
  return ceil_at_least_one(v);
}

Instance make_instance(std::string name, Space space, Operator op, Vector x0) {
  const int b = minimal_b(space, op, x0);
  const int n = minimal_n(space, op);
  return Instance{std::move(name), std::move(space), std::move(op), std::move(x0), b, n, std::nullopt, std::nullopt};
}

PlantParams plant_params(const Instance& inst) {
  PlantParams p;
  p.b = inst.b;
  p.n = inst.n;
  p.eta = inst.space.eta();
  p.omega = inst.space.omega();
  p.phi = inst.op.bracket_modulus_fn(inst.space);
  p.lambda0 = inst.op.lambda0();
  p.label = inst.space.empirical_semi_inner_modulus() ? "empirical-omega" : "certified";
  p.validate();
  return p;
}

ReichParams reich_params(const Instance& inst) {
  require_full_range(inst.op);
  ReichParams p;
  p.b = inst.b;
  p.eta = inst.space.eta();
  p.range = inst.op.range_data(inst.space);
  if (inst.E) {
    if (*inst.E < p.range.d_inf) throw ConfigError("E must dominate d(0, ran A)");
    p.range.E = *inst.E;
  }
  if (inst.D) {
    if (*inst.D > p.range.d_inf) throw ConfigError("D must not exceed d(0, ran A)");
    p.range.D = inst.D;
  }
  p.label = "certified";
  p.validate();
  return p;
}

namespace catalog {

Instance scalar_linear(double x0) {
  return make_instance("scalar_linear", Space::euclidean(1), Operator::diagonal({ScalarFn::linear(1.0)}),
                       Vector::Constant(1, x0));
}

Instance cubic() {
  Vector x(2);
  x << 0.8, -0.5;
  return make_instance("cubic", Space::euclidean(2),
                       Operator::diagonal({ScalarFn::power(3.0), ScalarFn::power(3.0)}), std::move(x));
}

Instance laplacian(const Space& space) {
  Matrix M(3, 3);
  M << 1.5, -1.0, 0.0,
       -1.0, 2.5, -1.0,
       0.0, -1.0, 1.5;
  Vector q(3);
  q << 0.1, 0.0, -0.1;
  Vector x(3);
  x << 0.3, -0.2, 0.1;
  return make_instance("laplacian", space, Operator::linear_psd(std::move(M), std::move(q)), std::move(x));
}

Instance constant_unit() {
  Vector q(2);
  q << 1.0, 0.0;
  Vector x(2);
  x << 0.5, 0.5;
  return make_instance("constant_unit", Space::euclidean(2), Operator::constant(std::move(q)), std::move(x));
}

Instance identity() {
  Vector x(2);
  x << 0.6, 0.8;
  return make_instance("identity", Space::euclidean(2), Operator::linear_psd(Matrix::Identity(2, 2), Vector::Zero(2)),
                       std::move(x));
}

Instance anti_linear() {
  return make_instance("anti_linear", Space::euclidean(1), Operator::diagonal({ScalarFn::linear(-1.0)}),
                       Vector::Constant(1, 1.0));
}

}  // namespace catalog

}  // namespace nlsg
