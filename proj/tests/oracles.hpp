#pragma once

// Test-only brute-force oracles, kept independent of the library's Eigen
// code paths: plain nested-vector complex matrices with naive loops.

#include <complex>
#include <vector>

#include "njstab/algebra.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Mat = std::vector<std::vector<Complex>>;

inline Mat from_eigen(const njstab::Element& e) {
  Mat m(e.rows(), std::vector<Complex>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m[i][j] = e(i, j);
  return m;
}

inline njstab::Element to_eigen(const Mat& m) {
  njstab::Element e(m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j)
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
  return e;
}

inline Mat mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<Complex>(n, Complex(0, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat add(const Mat& a, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) c[i][j] += b[i][j];
  return c;
}

inline Mat sub(const Mat& a, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) c[i][j] -= b[i][j];
  return c;
}

inline Mat eye(std::size_t n) {
  Mat c(n, std::vector<Complex>(n, Complex(0, 0)));
  for (std::size_t i = 0; i < n; ++i) c[i][i] = Complex(1, 0);
  return c;
}

inline Mat pow(const Mat& a, int n) {
  Mat c = a;
  for (int i = 1; i < n; ++i) c = mul(c, a);
  return c;
}

/// f(a^n) - sum_{i} a^i f(a) a^{n-1-i} expanded term by term, with f
/// supplied as a pointwise callback.
template <typename F>
Mat njordan_expr(F&& f, const Mat& a, int n) {
  Mat total = from_eigen(f(to_eigen(pow(a, n))));
  const Mat fa = from_eigen(f(to_eigen(a)));
  for (int i = 0; i < n; ++i) {
    Mat term = fa;
    for (int k = 0; k < i; ++k) term = mul(a, term);
    for (int k = 0; k < n - 1 - i; ++k) term = mul(term, a);
    total = sub(total, term);
  }
  return total;
}

inline double max_abs_diff(const njstab::Element& a, const njstab::Element& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
