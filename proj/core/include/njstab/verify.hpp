#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "njstab/control.hpp"
#include "njstab/corrector.hpp"
#include "njstab/defects.hpp"

namespace njstab {

/// Scenario families. Each carries a closed-form certificate bound B(x) on
/// ||f(x) - D(x)||:
///   thm21/thm22:        L/(1-L) * phi(x,0,0[,0])
///   cor23/cor24:        2^p theta/(2-2^p) * ||x||^p
///   thm25/thm27:        1/(2-2L) * phi(x,3x,0[,0])
///   cor26/cor28/cor210: 3^r theta/(2-2^r) * ||x||^{2r}  as stated, with the
///                       internally consistent alternative denominator
///                       2-2^{2r} (= 2-2L at L=2^{2r-1}) also computed.
/// The two product-power constants disagree; both are reported side by
/// side and neither is silently corrected.
enum class Variant {
  Thm21,
  Thm22,
  Cor23,
  Cor24,
  Thm25,
  Cor26,
  Thm27,
  Cor28,
  Cor210,
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& tag);

/// Is the scenario family of the odd-map pipeline (bounds anchored at
/// (x,3x,0) and fits restricted to those Jensen slots)?
bool variant_is_odd(Variant v);
/// Does the family carry the star (arity-4) defect term?
bool variant_is_star(Variant v);
/// Does the family use a product-power control (two bound constants)?
bool variant_is_product_power(Variant v);

enum class BoundDenominator { Stated, ProofConsistent };

/// A certificate bound B(x). Theorem families carry an explicit control
/// function and its L; corollary families carry (theta, exponent).
struct BoundSpec {
  Variant kind = Variant::Thm21;
  std::optional<ControlFunction> phi;  // theorem kinds
  double lipschitz = 0.0;              // theorem kinds
  double theta = 0.0;                  // corollary kinds
  double exponent = 0.0;               // p or r
  BoundDenominator denominator = BoundDenominator::Stated;

  static BoundSpec thm21(ControlFunction phi);
  static BoundSpec thm22(ControlFunction phi);
  static BoundSpec thm25(ControlFunction phi);
  static BoundSpec thm27(ControlFunction phi);
  static BoundSpec cor23(double theta, double p);
  static BoundSpec cor24(double theta, double p);
  static BoundSpec cor26(double theta, double r,
                         BoundDenominator d = BoundDenominator::Stated);
  static BoundSpec cor28(double theta, double r,
                         BoundDenominator d = BoundDenominator::Stated);
  static BoundSpec cor210(double theta, double r,
                          BoundDenominator d = BoundDenominator::Stated);

  double bound_at(const Element& x) const;  ///< B(x)
};

/// The x-independent factor of B(x) (e.g. 2^p theta/(2-2^p) for cor23,
/// L/(1-L) for thm21). Throws DomainError outside the valid parameter
/// ranges.
double bound_constant(const BoundSpec& spec);

/// One checker outcome. For tolerance-style checks max_violation is the
/// largest defect and pass means max_violation <= tol; for the bound
/// check max_violation is the largest ratio gap/allowed and pass means
/// max_violation <= 1. rows holds one (value, bound, ratio) record per
/// sample, in sample order.
struct CheckRow {
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct CheckReport {
  std::string name;
  bool pass = false;
  double max_violation = 0.0;
  std::optional<std::vector<Element>> violating_point;
  int samples_used = 0;
  std::vector<CheckRow> rows;
};

/// ||f(x) - D(x)|| <= B(x)*(1+1e-6) + 1e-9 at every sample.
CheckReport check_bound(const AlgebraMap& f, const AlgebraMap& D,
                        const BoundSpec& spec, const std::vector<Element>& samples);

/// max ||D(z+t) - D(z) - D(t)|| <= tol over the pairs.
CheckReport check_additivity(const AlgebraMap& D,
                             const std::vector<std::pair<Element, Element>>& pairs,
                             double tol);

/// max ||D(mu x) - mu D(x)|| <= tol over the grid; the finite surrogate
/// for complex homogeneity on the unit circle.
CheckReport check_homogeneity(const AlgebraMap& D,
                              const std::vector<UnitScalar>& mu_set,
                              const std::vector<Element>& samples, double tol);

/// max njordan_defect(D, a, n) <= tol over the samples.
CheckReport check_njordan(const AlgebraMap& D, int n,
                          const std::vector<Element>& samples, double tol);

/// max ||D(ab) - D(a)b - a D(b)|| <= tol over the pairs.
CheckReport check_leibniz(const AlgebraMap& D,
                          const std::vector<std::pair<Element, Element>>& pairs,
                          double tol);

/// max star_defect(D, w) <= tol over the samples.
CheckReport check_star(const AlgebraMap& D, const std::vector<Element>& samples,
                       double tol);

/// Structure-check tolerance for a corrected map: 10 * correction
/// tolerance * (1+radius)^n. The n-Jordan defect of a map known to
/// epsilon accuracy is amplified by ||a||^{n-1} terms, so tolerances
/// scale with the cloud radius to the power n.
double structure_tolerance(double correction_tolerance, double radius, int n);

}  // namespace njstab
