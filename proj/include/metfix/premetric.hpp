#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "metfix/constants.hpp"
#include "metfix/errors.hpp"

namespace metfix {

// Symmetric dissimilarity matrix with zero diagonal: h(x,y) = 0 iff x == y,
// h(x,y) = h(y,x) >= 0. The triangle inequality is NOT assumed.
struct PreMetric {
  std::size_t n = 0;
  std::vector<double> values;  // row-major n*n
  std::vector<std::string> labels;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }

  // Largest entry.
  double diameter() const;
  // Smallest strictly positive entry (0 if none).
  double min_positive() const;
  // Sorted distinct entries, always starting with 0.
  std::vector<double> breakpoints() const;
};

struct TriangleViolation {
  std::size_t i, j, k;  // h(i,k) > h(i,j) + h(j,k)
  double slack;         // h(i,k) - h(i,j) - h(j,k) > 0
};

struct ValidateResult {
  PreMetric premetric;
  std::vector<std::string> warnings;
  // class_of[i] = index of the retained representative the original point i
  // was merged into (identity map when no zero-distance pairs existed).
  std::vector<std::size_t> class_of;
};

// Checks the pre-metric axioms on a raw square matrix and canonicalizes it:
// entries within zero_tolerance of 0 are snapped to 0, asymmetric pairs
// within tolerance are averaged, and distinct points at distance 0 are
// merged into one representative (recorded in warnings / class_of).
// Throws validation_error when the axioms fail beyond tolerance.
ValidateResult validate_premetric(const std::vector<std::vector<double>>& m,
                                  std::vector<std::string> labels = {},
                                  double zero_tolerance = kZeroTolerance);

// All ordered-canonical triples (i < k, any j distinct from both) where the
// triangle inequality fails by more than `tolerance`, sorted by decreasing
// slack then lexicographically. Deterministic regardless of thread count.
std::vector<TriangleViolation> triangle_violations(const PreMetric& pm,
                                                   double tolerance = 0.0);

// Divides all entries by the diameter so the result lives in [0, 1] and
// returns the diameter that was divided out. Throws when the matrix is all
// zero (n >= 2 with no positive entry).
double normalize(PreMetric& pm);

}  // namespace metfix
