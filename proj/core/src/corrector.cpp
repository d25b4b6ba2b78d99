#include "njstab/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>

#include "njstab/map_impl.hpp"

namespace njstab {

namespace {

using detail::MapImpl;

struct Halved final : MapImpl {
  AlgebraMap inner;
  explicit Halved(AlgebraMap h)
      : MapImpl(h.dim(), "J(" + h.label() + ")"), inner(std::move(h)) {}
  Element eval(const Element& x) const override { return inner(2.0 * x) / 2.0; }
};

std::string bit_key(const Element& x) {
  std::string key(reinterpret_cast<const char*>(x.data()),
                  sizeof(Complex) * static_cast<std::size_t>(x.size()));
  return key;
}

struct CorrectedLimit final : MapImpl {
  AlgebraMap source;
  double tolerance;
  int m_max;
  mutable std::mutex mutex;
  mutable std::map<std::string, Element> memo;

  CorrectedLimit(AlgebraMap f, double tol, int mm)
      : MapImpl(f.dim(), "corrected(" + f.label() + ")"),
        source(std::move(f)),
        tolerance(tol),
        m_max(mm) {}

  Element eval(const Element& x) const override {
    const std::string key = bit_key(x);
    {
      std::lock_guard<std::mutex> lock(mutex);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    Element value = correct(source, x, tolerance, m_max).final_value;
    std::lock_guard<std::mutex> lock(mutex);
    return memo.emplace(key, std::move(value)).first->second;
  }
};

}  // namespace

AlgebraMap apply_J(const AlgebraMap& h) {
  return AlgebraMap(std::make_shared<Halved>(h));
}

PointDiagnostics correct(const AlgebraMap& f, const Element& x, double tolerance,
                         int m_max) {
  if (!(tolerance > 0)) throw DomainError("correct: tolerance must be > 0");
  if (m_max < 1 || m_max > 60) {
    throw DomainError("correct: m_max must be in [1,60]");
  }

  PointDiagnostics diag;
  diag.x = x;

  auto iterate = [&](int m) -> Element {
    const double scale = std::ldexp(1.0, m);  // 2^m, exact
    Element value;
    try {
      value = f(scale * x) / scale;
    } catch (const OverflowError& e) {
      std::ostringstream os;
      os << "correct: iterate overflowed at m=" << m << " (" << e.what() << ")";
      throw OverflowError(os.str());
    }
    if (!is_finite(value)) {
      std::ostringstream os;
      os << "correct: iterate non-finite at m=" << m;
      throw OverflowError(os.str());
    }
    return value;
  };

  Element current = iterate(0);
  for (int m = 0; m < m_max; ++m) {
    Element next = iterate(m + 1);
    double residual = op_norm(next - current);
    diag.residuals.push_back(residual);
    diag.iterations = m;
    current = std::move(next);
    if (residual < tolerance * (1.0 + op_norm(current))) {
      diag.converged = true;
      break;
    }
  }
  if (!diag.converged) diag.iterations = m_max;
  diag.final_value = std::move(current);
  return diag;
}

AlgebraMap corrected_map(const AlgebraMap& f, double tolerance, int m_max) {
  if (!(tolerance > 0)) throw DomainError("corrected_map: tolerance must be > 0");
  if (m_max < 1 || m_max > 60) {
    throw DomainError("corrected_map: m_max must be in [1,60]");
  }
  return AlgebraMap(std::make_shared<CorrectedLimit>(f, tolerance, m_max));
}

double rate_estimate(const std::vector<double>& residuals) {
  // A residual of exactly zero means the sequence terminated; the decay
  // ratio is reported as 0 regardless of trail length.
  for (double r : residuals) {
    if (r == 0.0) return 0.0;
  }
  const int n = static_cast<int>(residuals.size());
  if (n < 4) {
    throw InsufficientDataError(
        "rate_estimate: need at least 4 residuals, got " + std::to_string(n));
  }
  // Tail of max(4, ceil((n-1)/2)) ratio steps, clamped to what exists.
  int steps = std::min(n - 1, std::max(4, (n - 1 + 1) / 2));
  double first = residuals[n - 1 - steps];
  double last = residuals[n - 1];
  return std::pow(last / first, 1.0 / steps);
}

double rate_estimate(const PointDiagnostics& diagnostics) {
  return rate_estimate(diagnostics.residuals);
}

}  // namespace njstab
