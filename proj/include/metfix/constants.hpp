#pragma once

#include <cmath>

namespace metfix {

// Entries with absolute value below this are snapped to zero during
// validation; also the symmetry / zero-diagonal tolerance.
inline constexpr double kZeroTolerance = 1e-12;

// Dyadic resolution of the correction function: the final level uses
// denominators 2^depth.
inline constexpr int kDefaultDepth = 10;

// Feasibility searches against analytic evaluators stop once the bracket is
// narrower than this and return the feasible (lower) end.
inline const double kDefaultSTolerance = std::ldexp(1.0, -40);

// Local-continuity diagnostic: the modulus at the finest observable scale
// must stay below this fraction of the diameter.
inline constexpr double kContinuityThreshold = 0.25;

// Default evaluation grid for the axiom checks: this many evenly spaced
// points spanning [0, max breakpoint].
inline constexpr int kAxiomGridPoints = 6;

// A corrected matrix built at depth D satisfies the triangle inequality up
// to 2 * 2^-D; emitted as a tolerance header so round-trip validation knows.
inline double depth_slack(int depth) { return 2.0 * std::ldexp(1.0, -depth); }

}  // namespace metfix
