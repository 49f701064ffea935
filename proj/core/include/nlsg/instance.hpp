#pragma once

#include <optional>
#include <string>

#include "nlsg/operator.hpp"
#include "nlsg/rates_plant.hpp"
#include "nlsg/rates_reich.hpp"
#include "nlsg/space.hpp"

namespace nlsg {

/// A space, an operator on it, a starting point and the integer bounds the
/// rate chains need.
struct Instance {
  std::string name;
  Space space;
  Operator op;
  Vector x0;
  int b = 1;
  int n = 1;
  std::optional<int> E;
  std::optional<double> D;

  nlohmann::json descriptor() const;
  /// Throws ConfigError if b, n do not dominate the norms they should.
  void validate() const;
};

/// max{1, ceil(max{||x||, ||Ax||})}
int minimal_b(const Space& space, const Operator& op, const Vector& x);
/// max{1, ceil(max{||c||, ||d_c||})} for the domain witness (c, d_c).
int minimal_n(const Space& space, const Operator& op);

/// Fills b and n with their minimal admissible values.
Instance make_instance(std::string name, Space space, Operator op, Vector x0);

PlantParams plant_params(const Instance& inst);
ReichParams reich_params(const Instance& inst);

namespace catalog {

/// f(y) = y on R; S(t)x = e^{-t} x, J_t x = x / (1 + t).
Instance scalar_linear(double x0 = 1.0);
/// f(y) = y^3 on R^2.
Instance cubic();
/// Path-graph Laplacian plus a mass term on R^3; accretive in every l_p.
Instance laplacian(const Space& space);
/// constant q = (1, 0): d(0, ran A) = 1.
Instance constant_unit();
/// M = I, q = 0 on R^2: d(0, ran A) = 0.
Instance identity();
/// f(y) = -y: not accretive.
Instance anti_linear();

}  // namespace catalog

}  // namespace nlsg
