#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "njstab/algebra.hpp"
#include "njstab/maps.hpp"

namespace njstab {

/// Argument tuple of a control function. w is present iff the function
/// has arity 4.
struct PhiArgs {
  Element x, y, a;
  std::optional<Element> w;
};

enum class ControlShape {
  PowerSum,          ///< theta * (||x||^p + ||y||^p + ||a||^p)
  ProductPower,      ///< theta * (||x||^r ||y||^r + ||a||^{2r})
  PowerSumStar,      ///< power-sum + theta * ||w||^p
  ProductPowerStar,  ///< product-power + theta * ||w||^r
  Custom,
};

std::string to_string(ControlShape s);
ControlShape control_shape_from_string(const std::string& tag);

/// Nonnegative bound phi on the defect, together with its halving
/// contraction factor L < 1: phi(args) <= 2L * phi(args/2).
///
/// Built-in shapes derive L from the exponent (2^{p-1} for power sums,
/// 2^{2r-1} for product powers); custom callables must declare theirs,
/// which scaling_check then verifies rather than derives.
struct ControlFunction {
  ControlShape shape = ControlShape::PowerSum;
  double theta = 1.0;
  double exponent = 0.5;  ///< p for power sums, r for product powers
  double lipschitz = 0.0; ///< L in (0,1)
  int arity = 3;          ///< 3 or 4
  std::function<double(const PhiArgs&)> callable;  ///< Custom only

  static ControlFunction power_sum(double theta, double p);
  static ControlFunction product_power(double theta, double r);
  static ControlFunction power_sum_star(double theta, double p);
  static ControlFunction product_power_star(double theta, double r);
  static ControlFunction custom(int arity, double lipschitz,
                                std::function<double(const PhiArgs&)> fn);

  /// Same shape with a different theta (used to fit with theta = 1).
  ControlFunction with_theta(double new_theta) const;
};

/// Evaluate phi at the given tuple. Throws DomainError when the tuple
/// arity does not match and ContractError when a custom callable returns
/// a negative value.
double phi_eval(const ControlFunction& phi, const PhiArgs& args);

struct ScalingReport {
  bool pass = false;
  double worst_ratio = 0.0;  ///< max of phi(args) / (2L * phi(args/2))
};

/// Checks phi(args) <= 2L * phi(args/2) at every sample tuple. Tuples with
/// phi(args/2) = 0 pass only when phi(args) = 0 as well.
ScalingReport scaling_check(const ControlFunction& phi,
                            const std::vector<PhiArgs>& samples);

/// Which phi arguments receive the probe point when measuring map
/// distances: (x,0,0[,0]) for the even-map pipeline, (x,3x,0[,0]) for the
/// odd-map pipeline. (The odd-map convergence argument measures distances
/// against phi(x,3x,0) even though its metric is introduced with
/// phi(x,0,0); this implementation follows the anchor the estimates
/// actually use.)
enum class Anchor { XZeroZero, XThreeXZero };

PhiArgs anchor_args(Anchor anchor, const Element& x, int arity);

/// Empirical sup of ||g(x) - h(x)|| / phi(anchor(x)) over a sample cloud,
/// i.e. the smallest C with ||g - h|| <= C * phi pointwise on the cloud.
/// Infinite when some sample has phi(anchor(x)) = 0 but a gap above 1e-12.
struct GeneralizedDistance {
  double value = 0.0;
  std::optional<Element> witness;
  bool infinite() const { return std::isinf(value); }
};

GeneralizedDistance generalized_distance(const AlgebraMap& g, const AlgebraMap& h,
                                         const ControlFunction& phi, Anchor anchor,
                                         const std::vector<Element>& samples);

}  // namespace njstab
