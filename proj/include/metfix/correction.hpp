#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "metfix/constants.hpp"
#include "metfix/errors.hpp"
#include "metfix/evaluator.hpp"
#include "metfix/premetric.hpp"

namespace metfix {

// Largest s in [0,1] with g(s, c) < t. For step-table evaluators the
// feasible set is [0, w) or [0, 1] with w a grid point, and the supremum w
// is returned exactly (a caller that keeps strictly below the returned
// value stays feasible). For continuous evaluators the supremum need not be
// attained; bisection returns a feasible point within s_tolerance of it.
// Returns 0 when not even s = 0 is feasible.
double max_feasible_s(const TdEvaluator& g, double c, double t,
                      double s_tolerance = kDefaultSTolerance);

// Which term of the min produced s_q at a given dyadic point.
enum class MinTerm {
  cap_q,        // the dyadic q itself
  cap_r_next,   // r at the right neighbour q+ (general points)
  cap_r_double, // r at 2q (the smallest point of a level)
  pair_zero,    // the half-r feasibility bound s_q0 (smallest point)
  pair,         // a pairwise bound s_qq' (q' recorded)
};

struct MinProvenance {
  MinTerm term = MinTerm::cap_q;
  double q_prime = 0.0;  // meaningful only for MinTerm::pair
};

// Values r[k] at the dyadic rationals k/2^depth, built level by level so
// that (C1) r is strictly increasing and (C2) g(r[a], r[b]) < r[a+b]
// whenever a + b <= 2^depth (indices on the final grid, a,b >= 1).
struct DyadicCorrectionSequence {
  int depth = 0;
  std::vector<double> r;           // size 2^depth + 1; r[0]=0, r[last]=1
  std::vector<MinProvenance> min_term;  // same indexing; interior points only

  std::size_t points() const { return r.size() - 1; }  // 2^depth
  double q_of(std::size_t k) const {
    return static_cast<double>(k) / static_cast<double>(points());
  }
};

// Runs the level-by-level induction against g, then verifies (C1)/(C2)
// exhaustively. Throws correction_infeasible_error (carrying the dyadic
// level and the offending point) when some s_q leaves no room for a
// strictly increasing midpoint, or when post-hoc verification fails —
// either way g is not a usable deficiency bound at that resolution.
DyadicCorrectionSequence build_dyadic_sequence(
    const TdEvaluator& g, int depth,
    double s_tolerance = kDefaultSTolerance);

// Step function collapsing values onto the dyadic grid:
//   value(t)     = sup{ q : r[q] < t }   (sup of the empty set = 0)
//   value_inf(t) = inf{ q > 0 : r[q] >= t }  (inf of the empty set = 1)
// Both are nondecreasing, agree within 2^-depth everywhere, and map
// (1, inf) to 1.
struct CorrectionFunction {
  DyadicCorrectionSequence seq;
  double scale = 1.0;  // diameter divided out of the data f was built for

  double value(double t) const;
  double value_inf(double t) const;
  int depth() const { return seq.depth; }
};

// Grid check of the defining property f(g(a,b)) <= f(a) + f(b) + slack with
// slack = 2 * 2^-depth.
struct SubadditivityReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max over the grid of f(g(a,b)) - f(a) - f(b)
  double slack = 0.0;
  bool pass = true;
};

SubadditivityReport verify_correction(
    const CorrectionFunction& f, const TdEvaluator& g,
    const std::vector<std::pair<double, double>>& grid);

// Evenly spaced k x k grid over [0,1]^2 for verify_correction.
std::vector<std::pair<double, double>> unit_square_grid(std::size_t k);

struct CorrectResult {
  PreMetric corrected;     // original scale: scale * f(h/scale)
  CorrectionFunction f;    // acts on normalized values; carries the scale
  double scale = 1.0;
  bool was_metric = false;
  std::vector<TriangleViolation> violations_before;  // of the normalized h
  ModulusTable continuity;           // local-continuity diagnostic of h
  SubadditivityReport subadditivity; // f against the deficiency, unit grid
  std::vector<TriangleViolation> violations_after;   // beyond the slack
  EquivalenceModuli equivalence;     // input h vs corrected output
  double slack_bound() const { return scale * depth_slack(f.depth()); }
};

// Full repair pipeline: normalize, diagnose, build the deficiency table,
// construct f against it, verify, and apply entrywise. Throws
// validation_error on degenerate input and correction_infeasible_error when
// the input has triangle violations but fails the local-continuity
// diagnostic (a jump at the finest observable scale that no correction
// function can absorb), or when construction/verification fails.
CorrectResult correct_premetric(const PreMetric& h, int depth = kDefaultDepth,
                                double s_tolerance = kDefaultSTolerance,
                                double continuity_threshold =
                                    kContinuityThreshold);

}  // namespace metfix
