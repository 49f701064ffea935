#pragma once

#include <Eigen/Dense>
#include <functional>

namespace nlsg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// eta: (0,2] -> (0,1], nondecreasing lower bound on the modulus of convexity.
using ConvexityModulus = std::function<double(double eps)>;

/// omega(b, eps): uniform-continuity modulus of the semi-inner product in its
/// right argument on the ball of radius b.
using SemiInnerModulus = std::function<double(double b, double eps)>;

/// phi(eps, b): uniform-continuity modulus of x -> |Ax| on the ball of radius b.
using BracketModulus = std::function<double(double eps, double b)>;

/// Range-infimum witness bound f(eps); antitone in eps.
using WitnessBound = std::function<double(double eps)>;

}  // namespace nlsg
