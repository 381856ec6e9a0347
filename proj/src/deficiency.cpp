#include "metfix/deficiency.hpp"

#include <algorithm>
#include <cmath>

namespace metfix {

std::size_t EmpiricalTD::lower_rank(double x) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  if (it == breakpoints.begin()) return 0;  // x < 0: clamp to the zero cell
  return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

std::size_t EmpiricalTD::upper_rank(double x) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  std::size_t p = static_cast<std::size_t>(it - breakpoints.begin());
  return std::min(p, m() - 1);
}

double EmpiricalTD::eval(double a, double b) const {
  if (envelope_mode) return cell(upper_rank(a), upper_rank(b));
  return cell(lower_rank(a), lower_rank(b));
}

namespace {

// Exact rank of a value that is known to be a breakpoint.
std::size_t rank_of(const std::vector<double>& bp, double v) {
  auto it = std::lower_bound(bp.begin(), bp.end(), v);
  return static_cast<std::size_t>(it - bp.begin());
}

}  // namespace

EmpiricalTD empirical_td(const PreMetric& pm) {
  EmpiricalTD td;
  td.breakpoints = pm.breakpoints();
  const std::size_t m = td.breakpoints.size();
  const std::size_t n = pm.n;

  // Rank every entry once.
  std::vector<std::size_t> rank(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    rank[i] = rank_of(td.breakpoints, pm.values[i]);

  std::vector<double> table(m * m, 0.0);
#pragma omp parallel
  {
    std::vector<double> local(m * m, 0.0);
#pragma omp for schedule(dynamic)
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const std::size_t p = rank[x * n + y];
        for (std::size_t z = 0; z < n; ++z) {
          const std::size_t q = rank[y * n + z];
          double& c = local[p * m + q];
          c = std::max(c, pm.at(x, z));
        }
      }
    }
#pragma omp critical
    for (std::size_t i = 0; i < m * m; ++i)
      table[i] = std::max(table[i], local[i]);
  }

  // Running max in both directions turns per-rank maxima into the
  // cumulative table over h(x,y) <= v_p, h(y,z) <= v_q.
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q) {
      double c = table[p * m + q];
      if (p > 0) c = std::max(c, table[(p - 1) * m + q]);
      if (q > 0) c = std::max(c, table[p * m + q - 1]);
      table[p * m + q] = c;
    }

  td.table = std::move(table);
  td.envelope_mode = false;
  return td;
}

EmpiricalTD monotone_envelope(const EmpiricalTD& td) {
  EmpiricalTD env = td;
  env.envelope_mode = true;
  return env;
}

std::vector<double> default_axiom_grid(double hi) {
  std::vector<double> g(kAxiomGridPoints);
  for (int i = 0; i < kAxiomGridPoints; ++i)
    g[i] = hi * i / (kAxiomGridPoints - 1);
  return g;
}

AxiomReport check_td_axioms(const EmpiricalTD& td,
                            const std::vector<double>& grid) {
  AxiomReport rep;
  std::vector<double> pts(grid);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = 0; b < pts.size(); ++b) {
      if (td.eval(pts[a], pts[b]) != td.eval(pts[b], pts[a]))
        rep.symmetric = false;
      if (a > 0 && td.eval(pts[a - 1], pts[b]) > td.eval(pts[a], pts[b]))
        rep.increasing = false;
      if (b > 0 && td.eval(pts[a], pts[b - 1]) > td.eval(pts[a], pts[b]))
        rep.increasing = false;
    }
    if (td.eval(0.0, pts[a]) > pts[a]) rep.zero_bound = false;
  }

  // Qualitative continuity: every (y, t) with y < t must admit a positive
  // breakpoint delta shrinking the bound below t. Keep the delta with the
  // smallest achieved value as the witness (the earliest such on ties).
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const double y = pts[a], t = pts[b];
      ShrinkWitness w{y, t, 0.0, 0.0, false};
      bool first = true;
      for (std::size_t p = 1; p < td.m(); ++p) {
        const double delta = td.breakpoints[p];
        const double value = td.eval(delta, y + delta);
        if (first || value < w.value) {
          w.delta = delta;
          w.value = value;
          first = false;
        }
        if (value < t) break;  // smallest passing delta wins outright
      }
      w.pass = !first && w.value < t;
      if (!w.pass) rep.shrink = false;
      rep.shrink_witnesses.push_back(w);
    }
  }
  return rep;
}

namespace {

// Shared core: omega(delta) = max{ score(x,y) : key(x,y) <= delta } where
// key values are drawn from `key`; deltas default to key's breakpoints.
// The pass flag compares omega at the smallest positive delta against
// threshold * score_diameter: the finite-space stand-in for vanishing at 0.
ModulusTable modulus_from(const PreMetric& key,
                          const std::vector<double>& score_per_pair,
                          double score_diameter, double threshold,
                          std::vector<double> deltas) {
  ModulusTable mt;
  if (deltas.empty()) {
    mt.deltas = key.breakpoints();
  } else {
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    mt.deltas = std::move(deltas);
  }
  const std::size_t m = mt.deltas.size();
  mt.omega.assign(m, 0.0);
  const std::size_t n = key.n;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      // Smallest delta covering this pair; pairs beyond the last delta
      // never enter the table.
      auto it = std::lower_bound(mt.deltas.begin(), mt.deltas.end(),
                                 key.at(x, y));
      if (it == mt.deltas.end()) continue;
      const std::size_t p = static_cast<std::size_t>(it - mt.deltas.begin());
      mt.omega[p] = std::max(mt.omega[p], score_per_pair[x * n + y]);
    }
  for (std::size_t p = 1; p < m; ++p)
    mt.omega[p] = std::max(mt.omega[p], mt.omega[p - 1]);

  mt.threshold = threshold * score_diameter;
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

}  // namespace

ModulusTable local_continuity_modulus(const PreMetric& pm, double threshold,
                                      const std::vector<double>& deltas) {
  const std::size_t n = pm.n;
  std::vector<double> pair_score(n * n, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double s = 0.0;
      for (std::size_t z = 0; z < n; ++z)
        s = std::max(s, std::abs(pm.at(x, z) - pm.at(z, y)));
      pair_score[x * n + y] = s;
    }
  return modulus_from(pm, pair_score, pm.diameter(), threshold, deltas);
}

EquivalenceModuli uniform_equivalence_moduli(const PreMetric& h,
                                             const PreMetric& d,
                                             double threshold) {
  if (d.n != h.n)
    throw validation_error(validation_error::kind::point_mismatch,
                           "matrices compare different point counts");
  EquivalenceModuli eq;
  eq.forward = modulus_from(d, h.values, h.diameter(), threshold, {});
  eq.backward = modulus_from(h, d.values, d.diameter(), threshold, {});
  return eq;
}

}  // namespace metfix
