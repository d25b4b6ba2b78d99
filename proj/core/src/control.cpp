#include "njstab/control.hpp"

#include <cmath>
#include <limits>

namespace njstab {

std::string to_string(ControlShape s) {
  switch (s) {
    case ControlShape::PowerSum: return "power-sum";
    case ControlShape::ProductPower: return "product-power";
    case ControlShape::PowerSumStar: return "power-sum-star";
    case ControlShape::ProductPowerStar: return "product-power-star";
    case ControlShape::Custom: return "custom";
  }
  return "?";
}

ControlShape control_shape_from_string(const std::string& tag) {
  if (tag == "power-sum") return ControlShape::PowerSum;
  if (tag == "product-power") return ControlShape::ProductPower;
  if (tag == "power-sum-star") return ControlShape::PowerSumStar;
  if (tag == "product-power-star") return ControlShape::ProductPowerStar;
  throw ConfigError("unknown control shape '" + tag + "'");
}

namespace {

void check_power_sum_params(double theta, double p) {
  if (theta < 0) throw DomainError("control: theta must be >= 0");
  if (!(p > 0 && p < 1)) throw DomainError("control: p must be in (0,1)");
}

void check_product_power_params(double theta, double r) {
  if (theta < 0) throw DomainError("control: theta must be >= 0");
  if (!(r > 0 && r < 0.5)) throw DomainError("control: r must be in (0,1/2)");
}

}  // namespace

ControlFunction ControlFunction::power_sum(double theta, double p) {
  check_power_sum_params(theta, p);
  ControlFunction c;
  c.shape = ControlShape::PowerSum;
  c.theta = theta;
  c.exponent = p;
  c.lipschitz = std::pow(2.0, p - 1.0);
  c.arity = 3;
  return c;
}

ControlFunction ControlFunction::product_power(double theta, double r) {
  check_product_power_params(theta, r);
  ControlFunction c;
  c.shape = ControlShape::ProductPower;
  c.theta = theta;
  c.exponent = r;
  c.lipschitz = std::pow(2.0, 2.0 * r - 1.0);
  c.arity = 3;
  return c;
}

ControlFunction ControlFunction::power_sum_star(double theta, double p) {
  ControlFunction c = power_sum(theta, p);
  c.shape = ControlShape::PowerSumStar;
  c.arity = 4;
  return c;
}

ControlFunction ControlFunction::product_power_star(double theta, double r) {
  ControlFunction c = product_power(theta, r);
  c.shape = ControlShape::ProductPowerStar;
  c.arity = 4;
  return c;
}

ControlFunction ControlFunction::custom(int arity, double lipschitz,
                                        std::function<double(const PhiArgs&)> fn) {
  if (arity != 3 && arity != 4) throw DomainError("control: arity must be 3 or 4");
  if (!(lipschitz > 0 && lipschitz < 1)) {
    throw DomainError("control: declared L must be in (0,1)");
  }
  ControlFunction c;
  c.shape = ControlShape::Custom;
  c.arity = arity;
  c.lipschitz = lipschitz;
  c.callable = std::move(fn);
  return c;
}

ControlFunction ControlFunction::with_theta(double new_theta) const {
  if (shape == ControlShape::Custom) {
    throw DomainError("control: cannot rescale a custom control function");
  }
  ControlFunction c = *this;
  c.theta = new_theta;
  return c;
}

double phi_eval(const ControlFunction& phi, const PhiArgs& args) {
  if ((phi.arity == 4) != args.w.has_value()) {
    throw DomainError("phi_eval: arity mismatch (w supplied iff arity is 4)");
  }
  switch (phi.shape) {
    case ControlShape::PowerSum:
    case ControlShape::PowerSumStar: {
      double p = phi.exponent;
      double v = std::pow(op_norm(args.x), p) + std::pow(op_norm(args.y), p) +
                 std::pow(op_norm(args.a), p);
      if (args.w) v += std::pow(op_norm(*args.w), p);
      return phi.theta * v;
    }
    case ControlShape::ProductPower:
    case ControlShape::ProductPowerStar: {
      double r = phi.exponent;
      double v = std::pow(op_norm(args.x), r) * std::pow(op_norm(args.y), r) +
                 std::pow(op_norm(args.a), 2.0 * r);
      if (args.w) v += std::pow(op_norm(*args.w), r);
      return phi.theta * v;
    }
    case ControlShape::Custom: {
      double v = phi.callable(args);
      if (!(v >= 0)) {
        throw ContractError("phi_eval: custom control returned a negative value");
      }
      return v;
    }
  }
  throw DomainError("phi_eval: unknown shape");
}

ScalingReport scaling_check(const ControlFunction& phi,
                            const std::vector<PhiArgs>& samples) {
  if (samples.empty()) throw DomainError("scaling_check: empty sample list");
  ScalingReport report;
  report.pass = true;
  for (const PhiArgs& args : samples) {
    PhiArgs half{args.x / 2.0, args.y / 2.0, args.a / 2.0, std::nullopt};
    if (args.w) half.w = *args.w / 2.0;
    double full = phi_eval(phi, args);
    double denom = 2.0 * phi.lipschitz * phi_eval(phi, half);
    if (denom == 0.0) {
      if (full > 0.0) {
        report.pass = false;
        report.worst_ratio = std::numeric_limits<double>::infinity();
      }
      continue;
    }
    double ratio = full / denom;
    report.worst_ratio = std::max(report.worst_ratio, ratio);
    if (ratio > 1.0 + 1e-9) report.pass = false;
  }
  return report;
}

PhiArgs anchor_args(Anchor anchor, const Element& x, int arity) {
  Element zero = Element::Zero(x.rows(), x.cols());
  PhiArgs args;
  args.x = x;
  args.y = (anchor == Anchor::XThreeXZero) ? Element(3.0 * x) : zero;
  args.a = zero;
  if (arity == 4) args.w = zero;
  return args;
}

GeneralizedDistance generalized_distance(const AlgebraMap& g, const AlgebraMap& h,
                                         const ControlFunction& phi, Anchor anchor,
                                         const std::vector<Element>& samples) {
  if (samples.empty()) {
    throw DomainError("generalized_distance: empty sample list");
  }
  GeneralizedDistance dist;
  for (const Element& x : samples) {
    double gap = op_norm(g(x) - h(x));
    double denom = phi_eval(phi, anchor_args(anchor, x, phi.arity));
    if (denom == 0.0) {
      if (gap > 1e-12) {
        dist.value = std::numeric_limits<double>::infinity();
        dist.witness = x;
        return dist;
      }
      continue;  // 0/0: no constraint from this sample
    }
    double ratio = gap / denom;
    if (ratio > dist.value) {
      dist.value = ratio;
      dist.witness = x;
    }
  }
  return dist;
}

}  // namespace njstab
