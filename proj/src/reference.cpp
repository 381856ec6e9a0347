#include "metfix/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace metfix::ref {

EmpiricalTD empirical_td(const PreMetric& pm) {
  EmpiricalTD td;
  td.breakpoints = pm.breakpoints();
  const std::size_t m = td.breakpoints.size();
  const std::size_t n = pm.n;
  td.table.assign(m * m, 0.0);
  td.envelope_mode = false;

  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      double best = 0.0;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          if (pm.at(x, y) > td.breakpoints[p]) continue;
          for (std::size_t z = 0; z < n; ++z)
            if (pm.at(y, z) <= td.breakpoints[q])
              best = std::max(best, pm.at(x, z));
        }
      td.table[p * m + q] = best;
    }
  }
  return td;
}

std::vector<TriangleViolation> triangle_violations(const PreMetric& pm,
                                                   double tolerance) {
  std::vector<TriangleViolation> out;
  const std::size_t n = pm.n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double slack = pm.at(i, k) - pm.at(i, j) - pm.at(j, k);
        if (slack > tolerance) out.push_back({i, j, k, slack});
      }
  std::stable_sort(out.begin(), out.end(),
                   [](const TriangleViolation& a, const TriangleViolation& b) {
                     if (a.slack != b.slack) return a.slack > b.slack;
                     if (a.i != b.i) return a.i < b.i;
                     if (a.j != b.j) return a.j < b.j;
                     return a.k < b.k;
                   });
  return out;
}

ModulusTable local_continuity_modulus(const PreMetric& pm, double threshold) {
  ModulusTable mt;
  mt.deltas = pm.breakpoints();
  const std::size_t m = mt.deltas.size();
  const std::size_t n = pm.n;
  mt.omega.assign(m, 0.0);

  for (std::size_t p = 0; p < m; ++p) {
    double w = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (pm.at(x, y) > mt.deltas[p]) continue;
        for (std::size_t z = 0; z < n; ++z)
          w = std::max(w, std::abs(pm.at(x, z) - pm.at(z, y)));
      }
    mt.omega[p] = w;
  }

  mt.threshold = threshold * pm.diameter();
  std::size_t res = 0;
  while (res < m && mt.deltas[res] <= 0.0) ++res;
  if (res < m) {
    mt.resolution_delta = mt.deltas[res];
    mt.omega_at_resolution = mt.omega[res];
  } else {
    mt.resolution_delta = 0.0;
    mt.omega_at_resolution = mt.omega.empty() ? 0.0 : mt.omega[0];
  }
  mt.passes = mt.omega_at_resolution <= mt.threshold;
  return mt;
}

double max_feasible_s(const TdEvaluator& g, double c, double t,
                      double s_tolerance) {
  if (!(g.eval(0.0, c) < t)) return 0.0;
  if (const std::vector<double>* grid = g.step_grid()) {
    for (double s : *grid)
      if (!(g.eval(s, c) < t)) return std::min(s, 1.0);
    return 1.0;
  }
  if (g.eval(1.0, c) < t) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > s_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (g.eval(mid, c) < t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

DyadicCorrectionSequence build_dyadic_sequence(const TdEvaluator& g,
                                               int depth,
                                               double s_tolerance) {
  if (depth < 1)
    throw validation_error(validation_error::kind::bad_format,
                           "depth must be at least 1");
  DyadicCorrectionSequence seq;
  seq.depth = depth;
  const std::size_t N = std::size_t{1} << depth;
  seq.r.assign(N + 1, 0.0);
  seq.min_term.assign(N + 1, {});
  seq.r[N] = 1.0;

  for (int level = 1; level <= depth; ++level) {
    const std::size_t step = N >> level;
    const std::size_t step_old = step << 1;
    const std::size_t two_level = std::size_t{1} << level;

    for (std::size_t k = 3; k < two_level; k += 2) {
      const std::size_t idx = k * step;
      const std::size_t im = idx - step;
      double s = seq.q_of(idx);
      MinProvenance prov{MinTerm::cap_q, 0.0};
      auto consider = [&](double cand, MinTerm term, double qp) {
        if (cand < s) {
          s = cand;
          prov = {term, qp};
        }
      };
      consider(seq.r[idx + step], MinTerm::cap_r_next, 0.0);
      for (std::size_t j = step_old; im + j <= N; j += step_old)
        consider(ref::max_feasible_s(g, seq.r[j], seq.r[im + j], s_tolerance),
                 MinTerm::pair, seq.q_of(j));
      if (s <= seq.r[im])
        throw correction_infeasible_error(
            "level " + std::to_string(level) + ", q = " + std::to_string(k) +
            "/" + std::to_string(two_level) +
            ": no feasible room above the left neighbour");
      seq.r[idx] = 0.5 * (seq.r[im] + s);
      seq.min_term[idx] = prov;
    }

    const std::size_t idx = step;
    double s = seq.q_of(idx);
    MinProvenance prov{MinTerm::cap_q, 0.0};
    auto consider = [&](double cand, MinTerm term, double qp) {
      if (cand < s) {
        s = cand;
        prov = {term, qp};
      }
    };
    consider(seq.r[2 * idx], MinTerm::cap_r_double, 0.0);
    consider(ref::max_feasible_s(g, 0.5 * seq.r[2 * idx], seq.r[2 * idx],
                                 s_tolerance),
             MinTerm::pair_zero, 0.0);
    for (std::size_t j = 2 * step; j + idx <= N; j += step)
      consider(ref::max_feasible_s(g, seq.r[j], seq.r[j + idx], s_tolerance),
               MinTerm::pair, seq.q_of(j));
    if (s <= 0.0)
      throw correction_infeasible_error(
          "level " + std::to_string(level) +
          ", q = 1/" + std::to_string(two_level) +
          ": no feasible room above zero");
    seq.r[idx] = 0.5 * s;
    seq.min_term[idx] = prov;
  }

  for (std::size_t k = 0; k + 1 <= N; ++k)
    if (!(seq.r[k] < seq.r[k + 1]))
      throw correction_infeasible_error(
          "constructed sequence fails monotonicity at " + std::to_string(k) +
          "/" + std::to_string(N));
  for (std::size_t a = 1; a <= N; ++a)
    for (std::size_t b = 1; a + b <= N; ++b)
      if (!(g.eval(seq.r[a], seq.r[b]) < seq.r[a + b]))
        throw correction_infeasible_error(
            "constructed sequence fails the pairwise bound at " +
            std::to_string(a) + "/" + std::to_string(N) + ", " +
            std::to_string(b) + "/" + std::to_string(N));
  return seq;
}

}  // namespace metfix::ref
