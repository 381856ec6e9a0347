#pragma once

#include <cstddef>
#include <vector>

#include "metfix/constants.hpp"
#include "metfix/premetric.hpp"

namespace metfix {

// Empirical triangle-deficiency table of a pre-metric h on the grid of its
// breakpoints v_0 = 0 < v_1 < ... < v_{m-1}:
//
//   table[p][q] = max{ h(x,z) : h(x,y) <= v_p, h(y,z) <= v_q }
//
// over all ordered triples (x,y,z) including degenerate ones (an empty
// constraint set contributes 0). The table is monotone in both arguments.
//
// Evaluation at real arguments comes in two flavours:
//   - raw: round each argument DOWN to the nearest breakpoint (exact value
//     of the deficiency, which is a right-open step function);
//   - envelope: round each argument strictly UP, i.e. the tight decreasing
//     limit inf{table(a',b') : a' > a, b' > b} on the grid, clamped to the
//     last breakpoint beyond the diameter.
struct EmpiricalTD {
  std::vector<double> breakpoints;   // sorted, breakpoints[0] == 0
  std::vector<double> table;         // row-major m*m, doubly monotone
  bool envelope_mode = false;

  std::size_t m() const { return breakpoints.size(); }
  double cell(std::size_t p, std::size_t q) const { return table[p * m() + q]; }

  // Largest p with breakpoints[p] <= x (x >= 0 assumed).
  std::size_t lower_rank(double x) const;
  // Smallest p with breakpoints[p] > x, clamped to m()-1.
  std::size_t upper_rank(double x) const;

  // Table lookup following envelope_mode.
  double eval(double a, double b) const;
};

// Builds the exact deficiency table of pm by scanning all triples (O(n^3)
// per thread-partitioned slice, then a 2D running-max pass).
EmpiricalTD empirical_td(const PreMetric& pm);

// Same table, flipped to strict-upward rounding.
EmpiricalTD monotone_envelope(const EmpiricalTD& td);

// Axiom report for a candidate deficiency bound g on a finite grid:
//   - symmetric: g(x,y) == g(y,x)
//   - increasing: monotone in each argument
//   - zero_bound: g(0,y) <= y
//   - shrink (the qualitative continuity axiom): for every grid pair y < t
//     there is a positive breakpoint delta with g(delta, y + delta) < t.
// Witnesses record, for each (y,t) pair, the best delta found and whether it
// worked; a single failed pair fails the axiom.
struct ShrinkWitness {
  double y, t;       // y < t
  double delta;      // best candidate tried (0 when none exists)
  double value;      // g(delta, y + delta) at that candidate
  bool pass;
};

struct AxiomReport {
  bool symmetric = true;
  bool increasing = true;
  bool zero_bound = true;
  bool shrink = true;
  std::vector<ShrinkWitness> shrink_witnesses;
  bool pass() const { return symmetric && increasing && zero_bound && shrink; }
};

// Evenly spaced grid of kAxiomGridPoints points over [0, hi].
std::vector<double> default_axiom_grid(double hi);

// Checks the axioms of td (respecting its envelope_mode) on the given grid;
// shrink candidates delta range over the positive breakpoints of the table.
AxiomReport check_td_axioms(const EmpiricalTD& td,
                            const std::vector<double>& grid);

// Local-continuity modulus of a pre-metric:
//
//   omega(delta) = max{ |h(x,z) - h(z,y)| : h(x,y) <= delta }
//
// tabulated at each breakpoint delta. A pre-metric is considered locally
// continuous at the observable resolution when omega at the smallest
// positive breakpoint does not exceed threshold * diameter; pre-metrics
// failing this carry jumps that no correction function can absorb.
struct ModulusTable {
  std::vector<double> deltas;   // sorted evaluation scales
  std::vector<double> omega;    // same length, nondecreasing
  double resolution_delta = 0.0;     // smallest positive breakpoint
  double omega_at_resolution = 0.0;  // omega there
  double threshold = 0.0;            // threshold fraction * diameter
  bool passes = true;
};

// Deltas default to the breakpoints of pm when the grid is empty.
ModulusTable local_continuity_modulus(const PreMetric& pm,
                                      double threshold = kContinuityThreshold,
                                      const std::vector<double>& deltas = {});

// Two-sided comparison moduli between a pre-metric h and a reference
// metric d on the same points:
//   forward[delta]  = max{ h(x,y) : d(x,y) <= delta }   (delta over d-values)
//   backward[delta] = max{ d(x,y) : h(x,y) <= delta }   (delta over h-values)
// Both vanish together at delta -> 0 exactly when d and h are uniformly
// equivalent on the finite set.
struct EquivalenceModuli {
  ModulusTable forward;
  ModulusTable backward;
  bool passes() const { return forward.passes && backward.passes; }
};

EquivalenceModuli uniform_equivalence_moduli(
    const PreMetric& h, const PreMetric& d,
    double threshold = kContinuityThreshold);

}  // namespace metfix
