#pragma once

#include <cstddef>
#include <vector>

#include "metfix/correction.hpp"
#include "metfix/premetric.hpp"

namespace metfix {

// Finite group as explicit tables. mult is row-major: op(a,b) =
// mult[a*order + b].
struct FiniteGroup {
  std::size_t order = 0;
  std::vector<std::size_t> mult;
  std::vector<std::size_t> inv;
  std::size_t identity = 0;

  std::size_t op(std::size_t a, std::size_t b) const {
    return mult[a * order + b];
  }
};

// Checks the group axioms on a raw multiplication table (Latin square,
// two-sided identity, inverses, exhaustive associativity) and fills in inv
// and identity. Throws validation_error(invalid_group) with the failing
// triple/row in the message.
FiniteGroup group_from_table(const std::vector<std::vector<std::size_t>>& m);

FiniteGroup cyclic_group(std::size_t m);
FiniteGroup dihedral_group(std::size_t m);  // order 2m, m >= 1
FiniteGroup symmetric_group(std::size_t k); // order k!

// Closure of permutation generators (each a bijection of {0..k-1}) under
// composition. Elements are indexed in lexicographic order of their
// permutation tables, making the result independent of discovery order.
// Returns the group and the element indices of the given generators.
struct GeneratedGroup {
  FiniteGroup group;
  std::vector<std::size_t> generator_elements;
};
GeneratedGroup group_from_generators(
    const std::vector<std::vector<std::size_t>>& perms);

// Word metric d(x,y) = length of the shortest product of generators (and
// their inverses) equal to x^-1 y, scaled to diameter 1. Left-invariant by
// construction. Throws when the generators do not generate the group.
PreMetric word_metric(const FiniteGroup& g,
                      const std::vector<std::size_t>& generators);

// rho(x) = max(d(e,x), d(e,x^-1)): inverse-symmetric distance from the
// identity.
std::vector<double> symmetrized_radius(const FiniteGroup& g,
                                       const PreMetric& d);

// Radii r_0 = 1 > r_1 > ... > r_N with r_n <= 2^-n, each chosen to separate
// two consecutive distinct rho-values where possible, truncated at the
// first level whose open rho-ball around the identity is {e}; and the
// piecewise-linear bump values f_n(x) = clamp((rho(x) - r_{n+1}) /
// (r_n - r_{n+1}), 0, 1) for n < N.
struct BumpFamily {
  std::vector<double> rho;             // length order
  std::vector<double> radii;           // r_0 .. r_N
  std::size_t truncation = 0;          // N
  std::vector<std::vector<double>> bumps;  // N rows of length order
};

BumpFamily build_bump_family(const FiniteGroup& g, const PreMetric& d);

// h(x,y) = sum_{n<N} 2^-(n+1) f_n(x^-1 y) + 2^-N [x^-1 y != e]: the
// truncated series plus its closed-form geometric tail. Exactly
// left-invariant and symmetric.
PreMetric left_invariant_premetric(const FiniteGroup& g,
                                   const BumpFamily& bumps);

// Per-level check of the separation bound: every pair with h < 2^-m has
// d < 2^-(m-1).
struct SeparationBound {
  int m = 0;
  std::size_t pairs_below = 0;  // pairs with h < 2^-m
  double max_d = 0.0;           // largest d among them
  double bound = 0.0;           // 2^-(m-1)
  bool pass = true;
};

struct GroupBuildResult {
  BumpFamily bumps;
  PreMetric h;                   // the series pre-metric
  CorrectResult correction;      // applied to h; corrected is the output
  bool output_left_invariant = false;
  std::vector<SeparationBound> separation;   // m = 1..N, on h vs d
  EquivalenceModuli equivalence;             // output vs d
  double d_scale = 1.0;          // diameter divided out of the input metric
};

// Full pipeline: validate d as a metric on the group's elements, normalize
// it to diameter 1, build bumps and the series pre-metric, repair it, and
// check invariance / separation / equivalence. d need not be
// left-invariant; the separation bounds are only guaranteed when it is.
GroupBuildResult build_invariant_metric(const FiniteGroup& g,
                                        const PreMetric& d,
                                        int depth = kDefaultDepth,
                                        double s_tolerance =
                                            kDefaultSTolerance);

// Exact check that pm(gx, gy) == pm(x, y) for all g, x, y.
bool is_left_invariant(const FiniteGroup& g, const PreMetric& pm);

}  // namespace metfix
