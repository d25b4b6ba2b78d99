#include "njstab/verify.hpp"

#include <cmath>
#include <limits>

namespace njstab {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Thm21: return "thm21";
    case Variant::Thm22: return "thm22";
    case Variant::Cor23: return "cor23";
    case Variant::Cor24: return "cor24";
    case Variant::Thm25: return "thm25";
    case Variant::Cor26: return "cor26";
    case Variant::Thm27: return "thm27";
    case Variant::Cor28: return "cor28";
    case Variant::Cor210: return "cor210";
  }
  return "?";
}

Variant variant_from_string(const std::string& tag) {
  if (tag == "thm21") return Variant::Thm21;
  if (tag == "thm22") return Variant::Thm22;
  if (tag == "cor23") return Variant::Cor23;
  if (tag == "cor24") return Variant::Cor24;
  if (tag == "thm25") return Variant::Thm25;
  if (tag == "cor26") return Variant::Cor26;
  if (tag == "thm27") return Variant::Thm27;
  if (tag == "cor28") return Variant::Cor28;
  if (tag == "cor210") return Variant::Cor210;
  throw ConfigError("unknown variant '" + tag + "'");
}

bool variant_is_odd(Variant v) {
  switch (v) {
    case Variant::Thm25:
    case Variant::Thm27:
    case Variant::Cor26:
    case Variant::Cor28:
    case Variant::Cor210:
      return true;
    default:
      return false;
  }
}

bool variant_is_star(Variant v) {
  switch (v) {
    case Variant::Thm22:
    case Variant::Cor24:
    case Variant::Thm27:
    case Variant::Cor28:
    case Variant::Cor210:
      return true;
    default:
      return false;
  }
}

bool variant_is_product_power(Variant v) {
  switch (v) {
    case Variant::Cor26:
    case Variant::Cor28:
    case Variant::Cor210:
      return true;
    default:
      return false;
  }
}

namespace {

BoundSpec theorem_spec(Variant kind, ControlFunction phi) {
  if (!(phi.lipschitz > 0 && phi.lipschitz < 1)) {
    throw DomainError("bound: L must be in (0,1)");
  }
  const bool star = variant_is_star(kind);
  if ((phi.arity == 4) != star) {
    throw DomainError("bound: control arity does not match the variant");
  }
  BoundSpec s;
  s.kind = kind;
  s.lipschitz = phi.lipschitz;
  s.exponent = phi.exponent;
  s.phi = std::move(phi);
  return s;
}

BoundSpec corollary_spec(Variant kind, double theta, double exponent,
                         BoundDenominator d) {
  if (theta < 0) throw DomainError("bound: theta must be >= 0");
  if (variant_is_product_power(kind)) {
    if (!(exponent > 0 && exponent < 0.5)) {
      throw DomainError("bound: r must be in (0,1/2)");
    }
  } else {
    if (!(exponent > 0 && exponent < 1)) {
      throw DomainError("bound: p must be in (0,1)");
    }
  }
  BoundSpec s;
  s.kind = kind;
  s.theta = theta;
  s.exponent = exponent;
  s.denominator = d;
  return s;
}

}  // namespace

BoundSpec BoundSpec::thm21(ControlFunction phi) {
  return theorem_spec(Variant::Thm21, std::move(phi));
}
BoundSpec BoundSpec::thm22(ControlFunction phi) {
  return theorem_spec(Variant::Thm22, std::move(phi));
}
BoundSpec BoundSpec::thm25(ControlFunction phi) {
  return theorem_spec(Variant::Thm25, std::move(phi));
}
BoundSpec BoundSpec::thm27(ControlFunction phi) {
  return theorem_spec(Variant::Thm27, std::move(phi));
}
BoundSpec BoundSpec::cor23(double theta, double p) {
  return corollary_spec(Variant::Cor23, theta, p, BoundDenominator::Stated);
}
BoundSpec BoundSpec::cor24(double theta, double p) {
  return corollary_spec(Variant::Cor24, theta, p, BoundDenominator::Stated);
}
BoundSpec BoundSpec::cor26(double theta, double r, BoundDenominator d) {
  return corollary_spec(Variant::Cor26, theta, r, d);
}
BoundSpec BoundSpec::cor28(double theta, double r, BoundDenominator d) {
  return corollary_spec(Variant::Cor28, theta, r, d);
}
BoundSpec BoundSpec::cor210(double theta, double r, BoundDenominator d) {
  return corollary_spec(Variant::Cor210, theta, r, d);
}

double bound_constant(const BoundSpec& spec) {
  switch (spec.kind) {
    case Variant::Thm21:
    case Variant::Thm22: {
      double L = spec.lipschitz;
      if (!(L > 0 && L < 1)) throw DomainError("bound: L must be in (0,1)");
      return L / (1.0 - L);
    }
    case Variant::Thm25:
    case Variant::Thm27: {
      double L = spec.lipschitz;
      if (!(L > 0 && L < 1)) throw DomainError("bound: L must be in (0,1)");
      return 1.0 / (2.0 - 2.0 * L);
    }
    case Variant::Cor23:
    case Variant::Cor24: {
      double p = spec.exponent;
      if (!(p > 0 && p < 1)) throw DomainError("bound: p must be in (0,1)");
      return std::pow(2.0, p) * spec.theta / (2.0 - std::pow(2.0, p));
    }
    case Variant::Cor26:
    case Variant::Cor28:
    case Variant::Cor210: {
      double r = spec.exponent;
      if (!(r > 0 && r < 0.5)) throw DomainError("bound: r must be in (0,1/2)");
      double denom = (spec.denominator == BoundDenominator::Stated)
                         ? 2.0 - std::pow(2.0, r)
                         : 2.0 - std::pow(2.0, 2.0 * r);
      return std::pow(3.0, r) * spec.theta / denom;
    }
  }
  throw DomainError("bound: unknown kind");
}

double BoundSpec::bound_at(const Element& x) const {
  switch (kind) {
    case Variant::Thm21:
    case Variant::Thm22:
      return bound_constant(*this) *
             phi_eval(*phi, anchor_args(Anchor::XZeroZero, x, phi->arity));
    case Variant::Thm25:
    case Variant::Thm27:
      return bound_constant(*this) *
             phi_eval(*phi, anchor_args(Anchor::XThreeXZero, x, phi->arity));
    case Variant::Cor23:
    case Variant::Cor24:
      return bound_constant(*this) * std::pow(op_norm(x), exponent);
    case Variant::Cor26:
    case Variant::Cor28:
    case Variant::Cor210:
      return bound_constant(*this) * std::pow(op_norm(x), 2.0 * exponent);
  }
  throw DomainError("bound: unknown kind");
}

namespace {

CheckReport tolerance_check(
    std::string name, double tol, std::size_t count,
    const std::function<double(std::size_t)>& defect_at,
    const std::function<std::vector<Element>(std::size_t)>& point_at) {
  if (count == 0) throw DomainError(name + ": empty sample list");
  CheckReport report;
  report.name = std::move(name);
  report.samples_used = static_cast<int>(count);
  report.rows.reserve(count);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < count; ++i) {
    double v = defect_at(i);
    report.rows.push_back({v, tol, tol > 0 ? v / tol : std::numeric_limits<double>::infinity()});
    if (v >= report.max_violation) {
      report.max_violation = v;
      worst = i;
    }
  }
  report.pass = report.max_violation <= tol;
  if (!report.pass) report.violating_point = point_at(worst);
  return report;
}

}  // namespace

CheckReport check_bound(const AlgebraMap& f, const AlgebraMap& D,
                        const BoundSpec& spec,
                        const std::vector<Element>& samples) {
  if (samples.empty()) throw DomainError("check_bound: empty sample list");
  CheckReport report;
  report.name = "bound";
  report.samples_used = static_cast<int>(samples.size());
  report.rows.reserve(samples.size());
  report.pass = true;
  for (const Element& x : samples) {
    double gap = op_norm(f(x) - D(x));
    double bound = spec.bound_at(x);
    double allowed = bound * (1.0 + 1e-6) + 1e-9;
    double ratio = gap / allowed;
    report.rows.push_back({gap, bound, ratio});
    if (ratio >= report.max_violation) {
      report.max_violation = ratio;
      if (ratio > 1.0) report.violating_point = std::vector<Element>{x};
    }
    if (ratio > 1.0) report.pass = false;
  }
  return report;
}

CheckReport check_additivity(const AlgebraMap& D,
                             const std::vector<std::pair<Element, Element>>& pairs,
                             double tol) {
  return tolerance_check(
      "additivity", tol, pairs.size(),
      [&](std::size_t i) {
        const auto& [z, t] = pairs[i];
        return op_norm(D(z + t) - D(z) - D(t));
      },
      [&](std::size_t i) {
        return std::vector<Element>{pairs[i].first, pairs[i].second};
      });
}

CheckReport check_homogeneity(const AlgebraMap& D,
                              const std::vector<UnitScalar>& mu_set,
                              const std::vector<Element>& samples, double tol) {
  if (mu_set.empty()) throw DomainError("homogeneity: empty mu grid");
  return tolerance_check(
      "homogeneity", tol, samples.size(),
      [&](std::size_t i) {
        const Element& x = samples[i];
        const Element Dx = D(x);
        double worst = 0.0;
        for (const UnitScalar& mu : mu_set) {
          worst = std::max(worst, op_norm(D(mu.value * x) - mu.value * Dx));
        }
        return worst;
      },
      [&](std::size_t i) { return std::vector<Element>{samples[i]}; });
}

CheckReport check_njordan(const AlgebraMap& D, int n,
                          const std::vector<Element>& samples, double tol) {
  if (n < 2) throw DomainError("check_njordan: n must be >= 2");
  return tolerance_check(
      "njordan", tol, samples.size(),
      [&](std::size_t i) { return njordan_defect(D, samples[i], n); },
      [&](std::size_t i) { return std::vector<Element>{samples[i]}; });
}

CheckReport check_leibniz(const AlgebraMap& D,
                          const std::vector<std::pair<Element, Element>>& pairs,
                          double tol) {
  return tolerance_check(
      "leibniz", tol, pairs.size(),
      [&](std::size_t i) {
        const auto& [a, b] = pairs[i];
        return op_norm(D(a * b) - D(a) * b - a * D(b));
      },
      [&](std::size_t i) {
        return std::vector<Element>{pairs[i].first, pairs[i].second};
      });
}

CheckReport check_star(const AlgebraMap& D, const std::vector<Element>& samples,
                       double tol) {
  return tolerance_check(
      "star", tol, samples.size(),
      [&](std::size_t i) { return star_defect(D, samples[i]); },
      [&](std::size_t i) { return std::vector<Element>{samples[i]}; });
}

double structure_tolerance(double correction_tolerance, double radius, int n) {
  return 10.0 * correction_tolerance * std::pow(1.0 + radius, n);
}

}  // namespace njstab
