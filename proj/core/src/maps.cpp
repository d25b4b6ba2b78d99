#include "njstab/maps.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "njstab/map_impl.hpp"

namespace njstab {

AlgebraMap::AlgebraMap(std::shared_ptr<const detail::MapImpl> impl)
    : impl_(std::move(impl)) {}

int AlgebraMap::dim() const { return impl_->dim; }

const std::string& AlgebraMap::label() const { return impl_->label; }

Element AlgebraMap::operator()(const Element& x) const {
  if (x.rows() != impl_->dim || x.cols() != impl_->dim) {
    std::ostringstream os;
    os << "map '" << impl_->label << "': dimension mismatch, expected "
       << impl_->dim << "x" << impl_->dim << ", got " << x.rows() << "x"
       << x.cols();
    throw DomainError(os.str());
  }
  if (!is_finite(x)) {
    throw DomainError("map '" + impl_->label + "': non-finite argument");
  }
  Element out = impl_->eval(x);
  if (!is_finite(out)) {
    std::ostringstream os;
    os << "map '" << impl_->label
       << "': evaluation overflowed to non-finite values "
       << "(argument magnitude " << x.cwiseAbs().maxCoeff() << ")";
    throw OverflowError(os.str());
  }
  return out;
}

namespace {

using detail::MapImpl;

struct InnerDerivation final : MapImpl {
  Element b;
  InnerDerivation(Element bb)
      : MapImpl(static_cast<int>(bb.rows()), "inner-derivation"),
        b(std::move(bb)) {}
  Element eval(const Element& x) const override { return b * x - x * b; }
};

struct Linear final : MapImpl {
  Eigen::MatrixXcd action;  // k^2 x k^2 on column-major vec(x)
  Linear(Eigen::MatrixXcd a, int d) : MapImpl(d, "linear"), action(std::move(a)) {}
  Element eval(const Element& x) const override {
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
    Eigen::VectorXcd w = action * v;
    return Eigen::Map<const Element>(w.data(), dim, dim);
  }
};

struct Custom final : MapImpl {
  std::function<Element(const Element&)> fn;
  Custom(int d, std::string l, std::function<Element(const Element&)> f)
      : MapImpl(d, std::move(l)), fn(std::move(f)) {}
  Element eval(const Element& x) const override { return fn(x); }
};

struct OddPart final : MapImpl {
  AlgebraMap inner;
  explicit OddPart(AlgebraMap f)
      : MapImpl(f.dim(), "odd-part(" + f.label() + ")"), inner(std::move(f)) {}
  Element eval(const Element& x) const override {
    return (inner(x) - inner(-x)) / 2.0;
  }
};

struct Perturbed final : MapImpl {
  AlgebraMap base;
  PerturbationSpec spec;
  Perturbed(AlgebraMap b, PerturbationSpec s)
      : MapImpl(b.dim(), "perturbed(" + b.label() + ")"),
        base(std::move(b)),
        spec(std::move(s)) {}

  Element eval(const Element& x) const override {
    Element out = base(x);
    switch (spec.shape) {
      case PerturbationSpec::Shape::Power:
        out += spec.theta_prime * std::pow(op_norm(x), spec.exponent) *
               spec.direction;
        break;
      case PerturbationSpec::Shape::Bounded:
        out += spec.cap * std::min(1.0, op_norm(x)) * spec.direction;
        break;
      case PerturbationSpec::Shape::ConstantShift:
        out += spec.direction;
        break;
      case PerturbationSpec::Shape::OddPower: {
        double nrm = op_norm(x);
        if (nrm > 0.0) {
          out += spec.theta_prime * std::pow(nrm, spec.exponent - 1.0) * x;
        }
        break;
      }
    }
    return out;
  }
};

}  // namespace

AlgebraMap inner_derivation(const Element& b) {
  if (!is_finite(b)) throw DomainError("inner_derivation: non-finite b");
  if (b.rows() != b.cols()) throw DomainError("inner_derivation: b not square");
  return AlgebraMap(std::make_shared<InnerDerivation>(b));
}

AlgebraMap linear_map(const Eigen::MatrixXcd& action, int dim) {
  if (action.rows() != dim * dim || action.cols() != dim * dim) {
    throw DomainError("linear_map: action must be dim^2 x dim^2");
  }
  return AlgebraMap(std::make_shared<Linear>(action, dim));
}

AlgebraMap identity_map(int dim) {
  return AlgebraMap(std::make_shared<Custom>(
      dim, "identity", [](const Element& x) { return x; }));
}

AlgebraMap zero_map(int dim) {
  return AlgebraMap(std::make_shared<Custom>(dim, "zero", [dim](const Element&) {
    return Element::Zero(dim, dim).eval();
  }));
}

AlgebraMap custom_map(int dim, std::string label,
                      std::function<Element(const Element&)> fn) {
  return AlgebraMap(std::make_shared<Custom>(dim, std::move(label), std::move(fn)));
}

AlgebraMap oddify(const AlgebraMap& f) {
  return AlgebraMap(std::make_shared<OddPart>(f));
}

PerturbationSpec PerturbationSpec::power(double theta_prime, double p,
                                         Element direction, bool star_compatible) {
  PerturbationSpec s;
  s.shape = Shape::Power;
  s.theta_prime = theta_prime;
  s.exponent = p;
  s.direction = std::move(direction);
  s.star_compatible = star_compatible;
  return s;
}

PerturbationSpec PerturbationSpec::bounded(double cap, Element direction,
                                           bool star_compatible) {
  PerturbationSpec s;
  s.shape = Shape::Bounded;
  s.cap = cap;
  s.direction = std::move(direction);
  s.star_compatible = star_compatible;
  return s;
}

PerturbationSpec PerturbationSpec::constant_shift(Element direction,
                                                  bool star_compatible) {
  PerturbationSpec s;
  s.shape = Shape::ConstantShift;
  s.direction = std::move(direction);
  s.star_compatible = star_compatible;
  return s;
}

PerturbationSpec PerturbationSpec::odd_power(double theta_prime, double p) {
  PerturbationSpec s;
  s.shape = Shape::OddPower;
  s.theta_prime = theta_prime;
  s.exponent = p;
  s.star_compatible = true;  // ||x*|| = ||x|| makes the term star-preserving
  return s;
}

AlgebraMap perturb(const AlgebraMap& base, const PerturbationSpec& spec) {
  if (spec.theta_prime < 0 || spec.cap < 0) {
    throw ConfigError("perturbation: amplitudes must be >= 0");
  }
  if (spec.shape != PerturbationSpec::Shape::OddPower) {
    if (spec.direction.rows() != base.dim() ||
        spec.direction.cols() != base.dim()) {
      throw ConfigError("perturbation.direction: dimension mismatch");
    }
    if (std::abs(op_norm(spec.direction) - 1.0) > 1e-9) {
      throw ConfigError("perturbation.direction: op_norm must be 1 within 1e-9");
    }
    if (spec.star_compatible &&
        op_norm(spec.direction - spec.direction.adjoint()) > 1e-12) {
      throw ConfigError(
          "perturbation.direction: star-compatible shapes need a Hermitian "
          "direction");
    }
  }
  if (spec.shape == PerturbationSpec::Shape::Power ||
      spec.shape == PerturbationSpec::Shape::OddPower) {
    if (!std::isfinite(spec.exponent)) {
      throw ConfigError("perturbation.p: must be finite");
    }
  }
  return AlgebraMap(std::make_shared<Perturbed>(base, spec));
}

}  // namespace njstab
