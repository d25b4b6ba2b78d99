#pragma once

#include <optional>
#include <vector>

#include "njstab/control.hpp"
#include "njstab/maps.hpp"

namespace njstab {

/// || mu f((x+y)/2) + mu f((x-y)/2) - f(mu x) ||.
/// Zero (to rounding) exactly when f satisfies the Jensen-type equation.
double jensen_defect(const AlgebraMap& f, const UnitScalar& mu, const Element& x,
                     const Element& y);

/// Sum_{i=0}^{n-1} a^i f(a) a^{n-1-i}, n >= 2.
Element njordan_sum(const AlgebraMap& f, const Element& a, int n);

/// || f(a^n) - njordan_sum(f, a, n) ||.
double njordan_defect(const AlgebraMap& f, const Element& a, int n);

/// || f(w*) - (f(w))* ||.
double star_defect(const AlgebraMap& f, const Element& w);

/// Norm of the single summed expression
///   JensenExpr(mu,x,y) + (f(a^n) - njordan_sum(f,a,n)) [+ f(w*) - f(w)*],
/// the canonical measured defect. The power-sum part enters with a minus
/// sign on the whole sum, matching the structure the corrected map is
/// required to satisfy. w selects the 4-argument (star) form.
double combined_defect(const AlgebraMap& f, const UnitScalar& mu, const Element& x,
                       const Element& y, const Element& a,
                       const std::optional<Element>& w, int n);

/// One evaluated argument tuple with all defect components.
struct DefectSample {
  UnitScalar mu;
  Element x, y, a;
  std::optional<Element> w;
  double jensen = 0.0;
  double njordan = 0.0;
  std::optional<double> star;
  double combined = 0.0;
};

DefectSample evaluate_defects(const AlgebraMap& f, const UnitScalar& mu,
                              const Element& x, const Element& y, const Element& a,
                              const std::optional<Element>& w, int n);

/// How argument tuples are drawn from a cloud when fitting.
///
/// General: per element s_i the slices (s_i,0,0), (s_i,s_i,0), (0,0,s_i)
/// (plus (0,0,0,s_i) at arity 4) and running mixed tuples
/// (s_i, s_{i+1}, s_{i+2}[, s_{i+3}]); every tuple crossed with the whole
/// mu grid. JensenAnchored3x: the Jensen slots always carry (s_i, 3 s_i),
/// for shapes whose general (x, 0, ...) slices are degenerate (product
/// powers vanish when either Jensen slot is zero). Tuple sets grow
/// monotonically with the cloud, so enlarging a cloud never shrinks a fit.
enum class TupleScheme { General, JensenAnchored3x };

struct DefectTuple {
  UnitScalar mu;
  Element x, y, a;
  std::optional<Element> w;
};

std::vector<DefectTuple> defect_tuples(const std::vector<Element>& cloud,
                                       int mu_count, bool with_w,
                                       TupleScheme scheme, int dim);

/// Smallest theta making the combined defect <= phi over the fitted tuples:
/// the sup of combined_defect / phi(tuple) with theta = 1.
struct ThetaFit {
  double theta_hat = 0.0;
  ControlShape shape = ControlShape::PowerSum;
  double exponent = 0.0;
  std::optional<SampleSpec> cloud;
  std::optional<DefectTuple> max_ratio_point;
  bool infinite() const { return std::isinf(theta_hat); }
};

/// Fit over an explicit element list. Tuples whose denominator is below
/// 1e-300 are skipped unless the defect exceeds 1e-12 (then the fit is
/// infinite). Throws DegenerateCloudError when every tuple was skipped.
ThetaFit fit_theta_over(const AlgebraMap& f, const ControlFunction& shape,
                        const std::vector<Element>& cloud, int mu_count, int n,
                        TupleScheme scheme = TupleScheme::General);

/// Fit over a seeded cloud description.
ThetaFit fit_theta(const AlgebraMap& f, const ControlFunction& shape,
                   const SampleSpec& cloud, int mu_count, int n,
                   TupleScheme scheme = TupleScheme::General);

}  // namespace njstab
