#pragma once

#include <functional>
#include <memory>
#include <string>

#include "njstab/algebra.hpp"

namespace njstab {

namespace detail {
struct MapImpl;
}

/// A deterministic pointwise map M_k(C) -> M_k(C). Not assumed linear.
/// Evaluation is pure: the same input always yields the bit-identical
/// output (corrected-limit maps memoize to guarantee this).
class AlgebraMap {
 public:
  AlgebraMap() = default;
  explicit AlgebraMap(std::shared_ptr<const detail::MapImpl> impl);

  /// Evaluate at x. Throws DomainError on dimension mismatch and
  /// OverflowError if the result has non-finite entries.
  Element operator()(const Element& x) const;

  int dim() const;
  const std::string& label() const;
  bool valid() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const detail::MapImpl> impl_;
};

/// x -> b x - x b. Linear, a derivation, and an n-Jordan derivation for
/// every n >= 2; the ground truth the corrector is measured against.
AlgebraMap inner_derivation(const Element& b);

/// Complex-linear map given by a k^2 x k^2 action on column-major vec(x).
AlgebraMap linear_map(const Eigen::MatrixXcd& action, int dim);

AlgebraMap identity_map(int dim);
AlgebraMap zero_map(int dim);

/// Arbitrary deterministic map; used for counterexamples in tests and
/// negative controls (squaring, involution, constant shifts).
AlgebraMap custom_map(int dim, std::string label,
                      std::function<Element(const Element&)> fn);

/// Odd part x -> (f(x) - f(-x))/2; satisfies g(-x) = -g(x) exactly.
AlgebraMap oddify(const AlgebraMap& f);

/// Additive disturbance applied on top of an exact map.
///
/// Shapes:
///   power:          x -> base(x) + theta' * ||x||^p * E
///   bounded:        x -> base(x) + c * min(1, ||x||) * E
///   constant-shift: x -> base(x) + E
///   odd-power:      x -> base(x) + theta' * ||x||^(p-1) * x   (0 at x = 0)
///
/// power/bounded/constant-shift are even in x; odd-power is the odd,
/// unit-circle-homogeneous disturbance used by the odd-map scenarios. When
/// star_compatible is set the added term g satisfies g(x*) = g(x)*: for the
/// direction-based shapes this is enforced by requiring a Hermitian E;
/// odd-power satisfies it unconditionally.
struct PerturbationSpec {
  enum class Shape { Power, Bounded, ConstantShift, OddPower };

  Shape shape = Shape::Power;
  double theta_prime = 0.0;  ///< power / odd-power amplitude, >= 0
  double exponent = 0.5;     ///< power / odd-power exponent p
  double cap = 0.0;          ///< bounded amplitude c, >= 0
  Element direction;         ///< E with op_norm(E) = 1; unused by odd-power
  bool star_compatible = false;

  static PerturbationSpec power(double theta_prime, double p, Element direction,
                                bool star_compatible = false);
  static PerturbationSpec bounded(double cap, Element direction,
                                  bool star_compatible = false);
  static PerturbationSpec constant_shift(Element direction,
                                         bool star_compatible = false);
  static PerturbationSpec odd_power(double theta_prime, double p);
};

/// Validates the spec (unit-norm direction, nonnegative amplitudes,
/// Hermitian direction when star-compatible) and returns the perturbed map.
AlgebraMap perturb(const AlgebraMap& base, const PerturbationSpec& spec);

}  // namespace njstab
