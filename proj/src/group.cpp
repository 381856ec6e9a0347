#include "metfix/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "metfix/deficiency.hpp"

namespace metfix {

namespace {

[[noreturn]] void bad_group(const std::string& what) {
  throw validation_error(validation_error::kind::invalid_group, what);
}

void check_axioms(FiniteGroup& g) {
  const std::size_t m = g.order;
  // Latin square: every row and column is a permutation.
  std::vector<char> seen(m);
  for (std::size_t a = 0; a < m; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t v = g.op(a, b);
      if (v >= m) bad_group("table entry out of range in row " +
                            std::to_string(a));
      if (seen[v]++) bad_group("row " + std::to_string(a) +
                               " is not a permutation (repeated " +
                               std::to_string(v) + ")");
    }
  }
  for (std::size_t b = 0; b < m; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t a = 0; a < m; ++a)
      if (seen[g.op(a, b)]++)
        bad_group("column " + std::to_string(b) + " is not a permutation");
  }

  // Two-sided identity.
  bool found = false;
  for (std::size_t e = 0; e < m && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < m && ok; ++x)
      ok = g.op(e, x) == x && g.op(x, e) == x;
    if (ok) {
      g.identity = e;
      found = true;
    }
  }
  if (!found) bad_group("no two-sided identity element");

  // Inverses.
  g.inv.assign(m, 0);
  for (std::size_t x = 0; x < m; ++x) {
    bool ok = false;
    for (std::size_t y = 0; y < m; ++y)
      if (g.op(x, y) == g.identity && g.op(y, x) == g.identity) {
        g.inv[x] = y;
        ok = true;
        break;
      }
    if (!ok) bad_group("element " + std::to_string(x) + " has no inverse");
  }

  // Associativity, exhaustive.
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c))) {
          std::ostringstream os;
          os << "associativity fails at (" << a << "," << b << "," << c
             << ")";
          bad_group(os.str());
        }
}

}  // namespace

FiniteGroup group_from_table(
    const std::vector<std::vector<std::size_t>>& m) {
  const std::size_t n = m.size();
  if (n == 0) bad_group("empty multiplication table");
  FiniteGroup g;
  g.order = n;
  g.mult.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n)
      bad_group("multiplication table is not square at row " +
                std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) g.mult[i * n + j] = m[i][j];
  }
  check_axioms(g);
  return g;
}

FiniteGroup cyclic_group(std::size_t m) {
  FiniteGroup g;
  g.order = m;
  g.mult.resize(m * m);
  g.inv.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    g.inv[a] = (m - a) % m;
    for (std::size_t b = 0; b < m; ++b) g.mult[a * m + b] = (a + b) % m;
  }
  g.identity = 0;
  return g;
}

FiniteGroup dihedral_group(std::size_t m) {
  // Element a + m*s: rotation by a, then s reflections (s in {0,1});
  // (a,s)(b,t) = (a + (-1)^s b mod m, s xor t).
  const std::size_t n = 2 * m;
  FiniteGroup g;
  g.order = n;
  g.mult.resize(n * n);
  g.inv.resize(n);
  auto enc = [m](std::size_t a, std::size_t s) { return a + m * s; };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t s = 0; s < 2; ++s) {
      const std::size_t x = enc(a, s);
      g.inv[x] = s ? x : enc((m - a) % m, 0);
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t t = 0; t < 2; ++t) {
          const std::size_t rot = s ? (a + m - b % m) % m : (a + b) % m;
          g.mult[x * n + enc(b, t)] = enc(rot, s ^ t);
        }
    }
  g.identity = 0;
  return g;
}

namespace {

using Perm = std::vector<std::size_t>;

Perm compose(const Perm& a, const Perm& b) {  // (a after b)(i) = a[b[i]]
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

FiniteGroup group_from_perm_set(const std::vector<Perm>& elems) {
  FiniteGroup g;
  g.order = elems.size();
  g.mult.resize(g.order * g.order);
  std::map<Perm, std::size_t> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;
  for (std::size_t a = 0; a < g.order; ++a)
    for (std::size_t b = 0; b < g.order; ++b) {
      auto it = index.find(compose(elems[a], elems[b]));
      if (it == index.end()) bad_group("permutation set is not closed");
      g.mult[a * g.order + b] = it->second;
    }
  check_axioms(g);
  return g;
}

}  // namespace

FiniteGroup symmetric_group(std::size_t k) {
  Perm p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> elems;
  do {
    elems.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return group_from_perm_set(elems);
}

GeneratedGroup group_from_generators(
    const std::vector<std::vector<std::size_t>>& perms) {
  if (perms.empty()) bad_group("no generators given");
  const std::size_t k = perms[0].size();
  for (const Perm& p : perms) {
    if (p.size() != k) bad_group("generators act on different point counts");
    std::vector<char> seen(k, 0);
    for (std::size_t v : p) {
      if (v >= k || seen[v]++) bad_group("generator is not a permutation");
    }
  }

  Perm id(k);
  std::iota(id.begin(), id.end(), 0);
  std::map<Perm, std::size_t> index;  // lexicographic, fixed by the map
  std::deque<Perm> frontier{id};
  index[id] = 0;
  std::vector<Perm> discovered{id};
  while (!frontier.empty()) {
    Perm cur = frontier.front();
    frontier.pop_front();
    for (const Perm& gen : perms) {
      Perm nxt = compose(gen, cur);
      if (index.emplace(nxt, index.size()).second) {
        discovered.push_back(nxt);
        frontier.push_back(std::move(nxt));
      }
    }
  }

  // Re-index lexicographically so the table is independent of BFS order.
  std::vector<Perm> elems(discovered.begin(), discovered.end());
  std::sort(elems.begin(), elems.end());

  GeneratedGroup out;
  out.group = group_from_perm_set(elems);
  for (const Perm& p : perms) {
    auto it = std::lower_bound(elems.begin(), elems.end(), p);
    out.generator_elements.push_back(
        static_cast<std::size_t>(it - elems.begin()));
  }
  return out;
}

PreMetric word_metric(const FiniteGroup& g,
                      const std::vector<std::size_t>& generators) {
  const std::size_t m = g.order;
  if (generators.empty()) bad_group("word metric needs generators");
  std::vector<std::size_t> gens;
  for (std::size_t s : generators) {
    if (s >= m) bad_group("generator index out of range");
    gens.push_back(s);
    gens.push_back(g.inv[s]);
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  const std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(m, kInf);
  std::deque<std::size_t> queue{g.identity};
  dist[g.identity] = 0;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t s : gens) {
      const std::size_t y = g.op(x, s);
      if (dist[y] == kInf) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  std::size_t diameter = 0;
  for (std::size_t v : dist) {
    if (v == kInf) bad_group("generators do not generate the group");
    diameter = std::max(diameter, v);
  }
  if (diameter == 0) bad_group("trivial group has no word metric");

  PreMetric pm;
  pm.n = m;
  pm.values.resize(m * m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      pm.at(x, y) = static_cast<double>(dist[g.op(g.inv[x], y)]) /
                    static_cast<double>(diameter);
  return pm;
}

std::vector<double> symmetrized_radius(const FiniteGroup& g,
                                       const PreMetric& d) {
  std::vector<double> rho(g.order);
  for (std::size_t x = 0; x < g.order; ++x)
    rho[x] = std::max(d.at(g.identity, x), d.at(g.identity, g.inv[x]));
  return rho;
}

BumpFamily build_bump_family(const FiniteGroup& g, const PreMetric& d) {
  BumpFamily fam;
  fam.rho = symmetrized_radius(g, d);
  fam.radii = {1.0};
  if (g.order <= 1) return fam;  // trivial group: empty family

  std::vector<double> levels(fam.rho);  // distinct rho values, ascending
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const double rho_min_positive = levels[0] > 0.0 ? levels[0] : levels[1];

  // Radii: cap = min(r_n/2, 2^-(n+1)); take the cap itself when it falls
  // strictly between two rho-values, otherwise the midpoint of the gap it
  // landed on. Stop at the first level whose open ball is {e}.
  for (int n = 0;; ++n) {
    const double cap =
        std::min(fam.radii.back() / 2.0, std::ldexp(1.0, -(n + 1)));
    double r = cap;
    auto hit = std::lower_bound(levels.begin(), levels.end(), cap);
    if (hit != levels.end() && *hit == cap) {
      // cap collides with an attained value; separate it from the value
      // below (rho(e) = 0 guarantees one exists).
      r = 0.5 * (*(hit - 1) + cap);
    }
    fam.radii.push_back(r);
    if (r <= rho_min_positive) break;  // open ball {rho < r} is {e}
  }
  fam.truncation = fam.radii.size() - 1;

  fam.bumps.assign(fam.truncation, std::vector<double>(g.order));
  for (std::size_t n = 0; n < fam.truncation; ++n) {
    const double hi = fam.radii[n], lo = fam.radii[n + 1];
    for (std::size_t x = 0; x < g.order; ++x)
      fam.bumps[n][x] =
          std::clamp((fam.rho[x] - lo) / (hi - lo), 0.0, 1.0);
  }
  return fam;
}

PreMetric left_invariant_premetric(const FiniteGroup& g,
                                   const BumpFamily& fam) {
  const std::size_t m = g.order;
  // Series value per element, then spread by left translation.
  std::vector<double> val(m, 0.0);
  for (std::size_t x = 0; x < m; ++x) {
    double s = 0.0;
    for (std::size_t n = 0; n < fam.truncation; ++n)
      s += std::ldexp(fam.bumps[n][x], -(static_cast<int>(n) + 1));
    if (x != g.identity)
      s += std::ldexp(1.0, -static_cast<int>(fam.truncation));
    val[x] = s;
  }
  PreMetric pm;
  pm.n = m;
  pm.values.resize(m * m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      pm.at(x, y) = val[g.op(g.inv[x], y)];
  return pm;
}

bool is_left_invariant(const FiniteGroup& g, const PreMetric& pm) {
  for (std::size_t t = 0; t < g.order; ++t)
    for (std::size_t x = 0; x < g.order; ++x)
      for (std::size_t y = 0; y < g.order; ++y)
        if (pm.at(g.op(t, x), g.op(t, y)) != pm.at(x, y)) return false;
  return true;
}

GroupBuildResult build_invariant_metric(const FiniteGroup& g,
                                        const PreMetric& d, int depth,
                                        double s_tolerance) {
  if (d.n != g.order)
    throw validation_error(validation_error::kind::point_mismatch,
                           "metric size does not match group order");
  // Scale-relative slack so rounding in decimal or rational inputs (k/6
  // word distances and the like) does not disqualify a genuine metric.
  if (!triangle_violations(d, kZeroTolerance * d.diameter()).empty())
    bad_group("input dissimilarity on the group is not a metric");

  GroupBuildResult out;
  PreMetric dn = d;
  out.d_scale = normalize(dn);

  out.bumps = build_bump_family(g, dn);
  out.h = left_invariant_premetric(g, out.bumps);

  if (g.order == 1) {
    out.correction.corrected = out.h;
    out.correction.was_metric = true;
    out.output_left_invariant = true;
    return out;
  }

  out.correction = correct_premetric(out.h, depth, s_tolerance);
  out.output_left_invariant =
      is_left_invariant(g, out.correction.corrected);

  const int N = static_cast<int>(out.bumps.truncation);
  for (int m = 1; m <= N; ++m) {
    SeparationBound sb;
    sb.m = m;
    sb.bound = std::ldexp(1.0, -(m - 1));
    const double cut = std::ldexp(1.0, -m);
    for (std::size_t x = 0; x < g.order; ++x)
      for (std::size_t y = 0; y < g.order; ++y)
        if (out.h.at(x, y) < cut) {
          ++sb.pairs_below;
          sb.max_d = std::max(sb.max_d, dn.at(x, y));
        }
    sb.pass = sb.max_d < sb.bound;
    out.separation.push_back(sb);
  }

  out.equivalence =
      uniform_equivalence_moduli(out.correction.corrected, dn);
  return out;
}

}  // namespace metfix
