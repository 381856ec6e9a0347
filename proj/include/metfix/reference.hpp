#pragma once

#include "metfix/correction.hpp"
#include "metfix/deficiency.hpp"
#include "metfix/premetric.hpp"

// Plain serial implementations of the parallel kernels, written straight
// from the definitions with none of the shared shortcuts (no rank
// precomputation, no prefix maxima, no binary searches). They serve as test
// oracles and as the baseline for the benchmark target.
namespace metfix::ref {

// Per-cell triple scan: table[p][q] = max{ h(x,z) : h(x,y) <= v_p,
// h(y,z) <= v_q } over all ordered triples, empty max = 0.
EmpiricalTD empirical_td(const PreMetric& pm);

std::vector<TriangleViolation> triangle_violations(const PreMetric& pm,
                                                   double tolerance = 0.0);

ModulusTable local_continuity_modulus(
    const PreMetric& pm, double threshold = kContinuityThreshold);

// Linear scan over the step grid instead of a binary search.
double max_feasible_s(const TdEvaluator& g, double c, double t,
                      double s_tolerance = kDefaultSTolerance);

// Same induction as the parallel builder, one point at a time.
DyadicCorrectionSequence build_dyadic_sequence(
    const TdEvaluator& g, int depth,
    double s_tolerance = kDefaultSTolerance);

}  // namespace metfix::ref
