#include "njstab/algebra.hpp"

#include <cmath>
#include <numbers>

namespace njstab {

bool is_finite(const Element& a) { return a.allFinite(); }

double op_norm(const Element& a) {
  if (!is_finite(a)) {
    throw DomainError("op_norm: element has non-finite entries");
  }
  if (a.size() == 0) {
    throw DomainError("op_norm: empty element");
  }
  // Jacobi SVD: accurate to machine precision for the small dims used here.
  return a.jacobiSvd().singularValues()(0);
}

Element involution(const Element& a) { return a.adjoint(); }

Element power(const Element& a, int n) {
  if (n < 1) {
    throw DomainError("power: exponent must be >= 1, got " + std::to_string(n));
  }
  Element out = a;
  for (int i = 1; i < n; ++i) {
    out = out * a;
  }
  return out;
}

UnitScalar::UnitScalar(Complex v) : value(v) {
  if (std::abs(std::abs(v) - 1.0) > 1e-12) {
    throw DomainError("UnitScalar: modulus must be 1 within 1e-12");
  }
}

std::vector<UnitScalar> sample_unit_scalars(int count) {
  if (count < 1) {
    throw DomainError("sample_unit_scalars: count must be >= 1");
  }
  std::vector<UnitScalar> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    out.emplace_back(std::polar(1.0, 2.0 * std::numbers::pi * k / count));
  }
  return out;
}

Distribution distribution_from_string(const std::string& tag) {
  if (tag == "dense-gaussian") return Distribution::DenseGaussian;
  if (tag == "hermitian") return Distribution::Hermitian;
  if (tag == "diagonal") return Distribution::Diagonal;
  if (tag == "sparse") return Distribution::Sparse;
  throw ConfigError("unknown distribution tag '" + tag + "'");
}

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::DenseGaussian: return "dense-gaussian";
    case Distribution::Hermitian: return "hermitian";
    case Distribution::Diagonal: return "diagonal";
    case Distribution::Sparse: return "sparse";
  }
  return "?";
}

double Rng::uniform() {
  // 53 mantissa bits of the raw draw.
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller; u1 shifted into (0,1] to keep the log finite.
  double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

Complex Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

Element Rng::element(int dim, Distribution distribution) {
  Element m = Element::Zero(dim, dim);
  switch (distribution) {
    case Distribution::DenseGaussian:
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = complex_normal();
      break;
    case Distribution::Hermitian: {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = complex_normal();
      m = ((m + m.adjoint()) / 2.0).eval();
      break;
    }
    case Distribution::Diagonal:
      for (int i = 0; i < dim; ++i) m(i, i) = complex_normal();
      break;
    case Distribution::Sparse:
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          double gate = uniform();
          Complex z = complex_normal();  // drawn unconditionally: keeps the
                                         // stream layout independent of gates
          if (gate < 0.25) m(i, j) = z;
        }
      break;
  }
  return m;
}

std::vector<Element> sample_elements(const SampleSpec& spec) {
  if (spec.dim < 1) throw ConfigError("cloud.dim: must be >= 1");
  if (spec.count < 1) throw ConfigError("cloud.count: must be >= 1");
  if (!(spec.radius > 0)) throw ConfigError("cloud.radius: must be > 0");

  Rng rng(spec.seed);
  std::vector<Element> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    Element m = rng.element(spec.dim, spec.distribution);
    double nrm = op_norm(m);
    if (nrm > spec.radius) {
      m *= spec.radius / nrm;
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace njstab
