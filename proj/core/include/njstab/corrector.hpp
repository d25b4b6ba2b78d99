#pragma once

#include <vector>

#include "njstab/maps.hpp"

namespace njstab {

/// Trail of one scaled-iterate run d_m = f(2^m x)/2^m at a single point.
///
/// residuals[m] = ||d_{m+1} - d_m||; iterations m* is the index of the last
/// residual computed; final_value is d_{m*+1}. Residual tails decay
/// geometrically with the halving contraction factor of the disturbance,
/// so the last residual is a faithful error proxy:
/// ||final_value - limit|| <= residual * L/(1-L).
struct PointDiagnostics {
  Element x;
  int iterations = 0;
  std::vector<double> residuals;
  bool converged = false;
  Element final_value;
  bool overflowed = false;  ///< set by scenario runs that trap OverflowError
};

/// Aggregate of a cloud-wide correction run.
struct CorrectionDiagnostics {
  std::vector<PointDiagnostics> points;
  double estimated_rate = 0.0;  ///< median of the per-point rate estimates
};

/// The halving operator (Jh)(x) = h(2x)/2. Maps that scale linearly are
/// fixed points.
AlgebraMap apply_J(const AlgebraMap& h);

/// Runs d_m = f(2^m x)/2^m until ||d_{m+1} - d_m|| < tolerance*(1+||d_{m+1}||)
/// or m reaches m_max (then converged=false; never throws for that).
/// Throws OverflowError naming the offending m if an iterate leaves double
/// range, and DomainError for tolerance <= 0 or m_max outside [1,60]
/// (2^60 keeps iterate magnitudes inside double precision for the
/// documented cloud radii).
PointDiagnostics correct(const AlgebraMap& f, const Element& x, double tolerance,
                         int m_max);

/// The corrected map x -> limit of f(2^m x)/2^m, evaluated through
/// `correct` with a memo keyed on the exact bit pattern of x, so repeated
/// evaluations are bit-identical (and cheap). Safe for concurrent use.
AlgebraMap corrected_map(const AlgebraMap& f, double tolerance, int m_max);

/// Geometric-mean ratio of successive residuals over the tail
/// (the last max(4, ceil(m*/2)) steps). Returns 0 when a residual is
/// exactly zero; throws InsufficientDataError for fewer than 4 residuals.
double rate_estimate(const std::vector<double>& residuals);
double rate_estimate(const PointDiagnostics& diagnostics);

}  // namespace njstab
