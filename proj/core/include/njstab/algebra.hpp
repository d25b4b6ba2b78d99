#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "njstab/errors.hpp"

namespace njstab {

using Complex = std::complex<double>;

/// An element of the matrix algebra M_k(C). The operator norm is the
/// largest singular value and the involution is the conjugate transpose,
/// so the C*-identity ||a* a|| = ||a||^2 holds.
using Element = Eigen::MatrixXcd;

bool is_finite(const Element& a);

/// Largest singular value of `a`. Throws DomainError on non-finite entries.
double op_norm(const Element& a);

/// Conjugate transpose. An exact involution: involution(involution(a)) == a.
Element involution(const Element& a);

/// a^n by repeated multiplication, n >= 1.
Element power(const Element& a, int n);

/// A complex scalar of modulus one.
struct UnitScalar {
  Complex value;
  explicit UnitScalar(Complex v);
};

/// The count-th roots of unity e^{2*pi*i*k/count}, k = 0..count-1.
std::vector<UnitScalar> sample_unit_scalars(int count);

enum class Distribution {
  DenseGaussian,  ///< independent complex Gaussian entries (Ginibre)
  Hermitian,      ///< (G + G*)/2 of a Ginibre draw
  Diagonal,       ///< complex Gaussian diagonal, zero off-diagonal
  Sparse,         ///< each entry nonzero with probability 1/4
};

Distribution distribution_from_string(const std::string& tag);
std::string to_string(Distribution d);

/// Deterministic description of a sample cloud. Identical specs produce
/// identical element sequences, and the first n elements do not depend on
/// `count` (prefix stability), so enlarging a cloud only appends.
struct SampleSpec {
  int dim = 2;
  int count = 1;
  double radius = 1.0;
  Distribution distribution = Distribution::DenseGaussian;
  std::uint64_t seed = 0;
};

/// Draws `spec.count` elements of M_dim(C), each scaled down if needed so
/// op_norm <= radius.
std::vector<Element> sample_elements(const SampleSpec& spec);

/// Deterministic random source. Gaussians come from Box-Muller over the
/// mt19937_64 stream so that sequences are identical across platforms
/// (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal.
  double normal();

  /// Complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();

  /// Single element draw; used by sample_elements and generator tags.
  Element element(int dim, Distribution distribution);

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace njstab
