#include "njstab/defects.hpp"

#include <cmath>
#include <limits>

namespace njstab {

namespace {

Element jensen_expr(const AlgebraMap& f, const UnitScalar& mu, const Element& x,
                    const Element& y) {
  return mu.value * f((x + y) / 2.0) + mu.value * f((x - y) / 2.0) -
         f(mu.value * x);
}

Element njordan_expr(const AlgebraMap& f, const Element& a, int n) {
  return f(power(a, n)) - njordan_sum(f, a, n);
}

}  // namespace

double jensen_defect(const AlgebraMap& f, const UnitScalar& mu, const Element& x,
                     const Element& y) {
  return op_norm(jensen_expr(f, mu, x, y));
}

Element njordan_sum(const AlgebraMap& f, const Element& a, int n) {
  if (n < 2) {
    throw DomainError("njordan_sum: n must be >= 2, got " + std::to_string(n));
  }
  const Element fa = f(a);
  const int k = static_cast<int>(a.rows());
  Element left = Element::Identity(k, k);  // a^i
  Element sum = Element::Zero(k, k);
  for (int i = 0; i < n; ++i) {
    Element right = Element::Identity(k, k);  // a^{n-1-i}
    for (int j = 0; j < n - 1 - i; ++j) right = right * a;
    sum += left * fa * right;
    left = left * a;
  }
  return sum;
}

double njordan_defect(const AlgebraMap& f, const Element& a, int n) {
  return op_norm(njordan_expr(f, a, n));
}

double star_defect(const AlgebraMap& f, const Element& w) {
  return op_norm(f(involution(w)) - involution(f(w)));
}

double combined_defect(const AlgebraMap& f, const UnitScalar& mu, const Element& x,
                       const Element& y, const Element& a,
                       const std::optional<Element>& w, int n) {
  Element expr = jensen_expr(f, mu, x, y) + njordan_expr(f, a, n);
  if (w) {
    expr += f(involution(*w)) - involution(f(*w));
  }
  return op_norm(expr);
}

DefectSample evaluate_defects(const AlgebraMap& f, const UnitScalar& mu,
                              const Element& x, const Element& y, const Element& a,
                              const std::optional<Element>& w, int n) {
  DefectSample s{mu, x, y, a, w, 0.0, 0.0, std::nullopt, 0.0};
  s.jensen = jensen_defect(f, mu, x, y);
  s.njordan = njordan_defect(f, a, n);
  if (w) s.star = star_defect(f, *w);
  s.combined = combined_defect(f, mu, x, y, a, w, n);
  return s;
}

std::vector<DefectTuple> defect_tuples(const std::vector<Element>& cloud,
                                       int mu_count, bool with_w,
                                       TupleScheme scheme, int dim) {
  if (mu_count < 1) throw DomainError("defect_tuples: mu_count must be >= 1");
  const Element zero = Element::Zero(dim, dim);
  const std::vector<UnitScalar> mus = sample_unit_scalars(mu_count);
  std::optional<Element> zero_w;
  if (with_w) zero_w = zero;

  std::vector<DefectTuple> tuples;
  auto push = [&](const Element& x, const Element& y, const Element& a,
                  const std::optional<Element>& w) {
    for (const UnitScalar& mu : mus) {
      tuples.push_back(DefectTuple{mu, x, y, a, w});
    }
  };

  const std::size_t count = cloud.size();
  for (std::size_t i = 0; i < count; ++i) {
    const Element& s = cloud[i];
    if (scheme == TupleScheme::General) {
      push(s, zero, zero, zero_w);
      push(s, s, zero, zero_w);
    } else {
      push(s, 3.0 * s, zero, zero_w);
    }
    push(zero, zero, s, zero_w);
    if (with_w) push(zero, zero, zero, s);
  }
  // Mixed tuples use forward offsets without wraparound so that a longer
  // cloud generates a strict superset of tuples.
  const std::size_t span = with_w ? 3 : 2;
  for (std::size_t i = 0; i + span < count; ++i) {
    const Element& x = cloud[i];
    const Element y =
        (scheme == TupleScheme::General) ? cloud[i + 1] : Element(3.0 * x);
    const Element& a = cloud[i + 2];
    std::optional<Element> w;
    if (with_w) w = cloud[i + 3];
    push(x, y, a, w);
  }
  return tuples;
}

namespace {

ThetaFit fit_theta_impl(const AlgebraMap& f, const ControlFunction& shape,
                        const std::vector<Element>& cloud,
                        std::optional<SampleSpec> cloud_spec, int mu_count, int n,
                        TupleScheme scheme) {
  if (cloud.empty()) throw DomainError("fit_theta: empty cloud");
  const ControlFunction unit = shape.with_theta(1.0);
  const bool with_w = unit.arity == 4;

  ThetaFit fit;
  fit.shape = unit.shape;
  fit.exponent = unit.exponent;
  fit.cloud = std::move(cloud_spec);

  bool any_used = false;
  for (const DefectTuple& t :
       defect_tuples(cloud, mu_count, with_w, scheme, f.dim())) {
    double denom = phi_eval(unit, PhiArgs{t.x, t.y, t.a, t.w});
    double defect = combined_defect(f, t.mu, t.x, t.y, t.a, t.w, n);
    if (denom < 1e-300) {
      if (defect > 1e-12) {
        fit.theta_hat = std::numeric_limits<double>::infinity();
        fit.max_ratio_point = t;
        return fit;
      }
      continue;
    }
    any_used = true;
    double ratio = defect / denom;
    if (ratio >= fit.theta_hat) {
      fit.theta_hat = ratio;
      fit.max_ratio_point = t;
    }
  }
  if (!any_used) {
    throw DegenerateCloudError(
        "fit_theta: every tuple of the cloud was skipped (zero control values)");
  }
  return fit;
}

}  // namespace

ThetaFit fit_theta_over(const AlgebraMap& f, const ControlFunction& shape,
                        const std::vector<Element>& cloud, int mu_count, int n,
                        TupleScheme scheme) {
  return fit_theta_impl(f, shape, cloud, std::nullopt, mu_count, n, scheme);
}

ThetaFit fit_theta(const AlgebraMap& f, const ControlFunction& shape,
                   const SampleSpec& cloud, int mu_count, int n,
                   TupleScheme scheme) {
  return fit_theta_impl(f, shape, sample_elements(cloud), cloud, mu_count, n,
                        scheme);
}

}  // namespace njstab
