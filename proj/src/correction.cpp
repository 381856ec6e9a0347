#include "metfix/correction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "metfix/deficiency.hpp"

namespace metfix {

double max_feasible_s(const TdEvaluator& g, double c, double t,
                      double s_tolerance) {
  if (!(g.eval(0.0, c) < t)) return 0.0;

  if (const std::vector<double>* grid = g.step_grid()) {
    // g(., c) is a nondecreasing step function jumping only at grid points,
    // so the feasible set is [0, w) with w the first infeasible grid point
    // (or all of [0,1] when none exists). w is exactly the supremum.
    auto first_bad = std::partition_point(
        grid->begin(), grid->end(),
        [&](double s) { return g.eval(s, c) < t; });
    if (first_bad == grid->end()) return 1.0;
    return std::min(*first_bad, 1.0);
  }

  if (g.eval(1.0, c) < t) return 1.0;
  double lo = 0.0, hi = 1.0;  // g(lo,c) < t <= g(hi,c)
  while (hi - lo > s_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (g.eval(mid, c) < t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

namespace {

std::string describe_point(int level, std::size_t k) {
  std::ostringstream os;
  os << "level " << level << ", q = " << k << "/" << (std::size_t{1} << level);
  return os.str();
}

// (C1)/(C2) exhaustive check; returns an error message or empty on pass.
std::string verify_conditions(const DyadicCorrectionSequence& seq,
                              const TdEvaluator& g) {
  const std::size_t N = seq.points();
  for (std::size_t k = 0; k + 1 <= N; ++k)
    if (!(seq.r[k] < seq.r[k + 1])) {
      std::ostringstream os;
      os << "monotonicity fails between " << k << "/" << N << " and "
         << (k + 1) << "/" << N << ": r = " << seq.r[k] << " vs "
         << seq.r[k + 1];
      return os.str();
    }

  long long bad = -1;
#pragma omp parallel for schedule(dynamic) reduction(max : bad)
  for (std::size_t a = 1; a <= N; ++a)
    for (std::size_t b = 1; a + b <= N; ++b)
      if (!(g.eval(seq.r[a], seq.r[b]) < seq.r[a + b]))
        bad = std::max(bad, static_cast<long long>(a * (N + 1) + b));
  if (bad >= 0) {
    const std::size_t a = static_cast<std::size_t>(bad) / (N + 1);
    const std::size_t b = static_cast<std::size_t>(bad) % (N + 1);
    std::ostringstream os;
    os << "pairwise bound fails at q = " << a << "/" << N << ", q' = " << b
       << "/" << N << ": g(r_q, r_q') = " << g.eval(seq.r[a], seq.r[b])
       << " >= r_{q+q'} = " << seq.r[a + b];
    return os.str();
  }
  return {};
}

}  // namespace

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

  // Tracks the minimum while remembering which term achieved it first.
  auto take_min = [](double& s, MinProvenance& p, double candidate,
                     MinTerm term, double q_prime) {
    if (candidate < s) {
      s = candidate;
      p = {term, q_prime};
    }
  };

  for (int level = 1; level <= depth; ++level) {
    const std::size_t step = N >> level;       // index stride of this level
    const std::size_t step_old = step << 1;    // stride of the level above
    const std::size_t two_level = std::size_t{1} << level;

    // General points q = k/2^level, odd k >= 3. Each depends only on values
    // from previous levels, so the level fills in parallel. Infeasibility is
    // reported for the smallest failing k to keep messages deterministic.
    long long fail_k = static_cast<long long>(two_level);
#pragma omp parallel for schedule(dynamic) reduction(min : fail_k)
    for (std::size_t k = 3; k < two_level; k += 2) {
      const std::size_t idx = k * step;
      const std::size_t im = idx - step;   // q-
      const std::size_t ip = idx + step;   // q+
      const double q = seq.q_of(idx);

      double s = q;
      MinProvenance prov{MinTerm::cap_q, 0.0};
      take_min(s, prov, seq.r[ip], MinTerm::cap_r_next, 0.0);
      for (std::size_t j = step_old; im + j <= N; j += step_old)
        take_min(s, prov,
                 max_feasible_s(g, seq.r[j], seq.r[im + j], s_tolerance),
                 MinTerm::pair, seq.q_of(j));

      if (s <= seq.r[im]) {
        fail_k = std::min(fail_k, static_cast<long long>(k));
      } else {
        seq.r[idx] = 0.5 * (seq.r[im] + s);
        seq.min_term[idx] = prov;
      }
    }
    if (fail_k < static_cast<long long>(two_level))
      throw correction_infeasible_error(
          describe_point(level, static_cast<std::size_t>(fail_k)) +
          ": no feasible room above the left neighbour");

    // Smallest point q = 1/2^level, last: its pairwise bounds read values
    // of this same level.
    {
      const std::size_t idx = step;
      const double q = seq.q_of(idx);
      double s = q;
      MinProvenance prov{MinTerm::cap_q, 0.0};
      take_min(s, prov, seq.r[2 * idx], MinTerm::cap_r_double, 0.0);
      take_min(s, prov,
               max_feasible_s(g, 0.5 * seq.r[2 * idx], seq.r[2 * idx],
                              s_tolerance),
               MinTerm::pair_zero, 0.0);
      for (std::size_t j = 2 * step; j + idx <= N; j += step)
        take_min(s, prov,
                 max_feasible_s(g, seq.r[j], seq.r[j + idx], s_tolerance),
                 MinTerm::pair, seq.q_of(j));

      if (s <= 0.0)
        throw correction_infeasible_error(
            describe_point(level, 1) +
            ": no feasible room above zero (s_q = " + std::to_string(s) +
            ")");
      seq.r[idx] = 0.5 * s;
      seq.min_term[idx] = prov;
    }
  }

  if (std::string msg = verify_conditions(seq, g); !msg.empty())
    throw correction_infeasible_error("constructed sequence fails " + msg);
  return seq;
}

double CorrectionFunction::value(double t) const {
  if (t <= 0.0) return 0.0;
  // Largest index with r < t; r[0] = 0 < t guarantees one exists.
  auto it = std::lower_bound(seq.r.begin(), seq.r.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - seq.r.begin()) - 1;
  return seq.q_of(k);
}

double CorrectionFunction::value_inf(double t) const {
  auto it = std::lower_bound(seq.r.begin(), seq.r.end(), t);
  std::size_t k = static_cast<std::size_t>(it - seq.r.begin());
  if (k > seq.points()) return 1.0;  // nothing reaches t: inf over empty set
  if (k == 0) k = 1;                 // positive dyadics only
  return seq.q_of(k);
}

SubadditivityReport verify_correction(
    const CorrectionFunction& f, const TdEvaluator& g,
    const std::vector<std::pair<double, double>>& grid) {
  SubadditivityReport rep;
  rep.checked = grid.size();
  rep.slack = depth_slack(f.depth());
  double worst = -HUGE_VAL;
  std::size_t bad = 0;
#pragma omp parallel for schedule(static) reduction(max : worst) \
    reduction(+ : bad)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [a, b] = grid[i];
    const double excess =
        f.value(g.eval(a, b)) - f.value(a) - f.value(b);
    worst = std::max(worst, excess);
    if (excess > rep.slack) ++bad;
  }
  rep.worst_excess = grid.empty() ? 0.0 : worst;
  rep.violations = bad;
  rep.pass = bad == 0;
  return rep;
}

std::vector<std::pair<double, double>> unit_square_grid(std::size_t k) {
  std::vector<std::pair<double, double>> grid;
  grid.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      grid.emplace_back(static_cast<double>(i) / (k - 1),
                        static_cast<double>(j) / (k - 1));
  return grid;
}

CorrectResult correct_premetric(const PreMetric& h, int depth,
                                double s_tolerance,
                                double continuity_threshold) {
  CorrectResult out;
  PreMetric pm = h;
  out.scale = normalize(pm);

  // pm has diameter 1 here, so kZeroTolerance is a relative slack: keeps
  // rounding noise in otherwise-tight triangles (decimal inputs, series
  // constructions) from counting as genuine violations.
  out.violations_before = triangle_violations(pm, kZeroTolerance);
  out.was_metric = out.violations_before.empty();
  out.continuity = local_continuity_modulus(pm, continuity_threshold);

  if (!out.was_metric && !out.continuity.passes) {
    std::ostringstream os;
    os << "input is not repairable: triangle violations present and the "
          "local-continuity diagnostic fails (omega("
       << out.continuity.resolution_delta
       << ") = " << out.continuity.omega_at_resolution << " > "
       << out.continuity.threshold
       << "); the dissimilarity jumps at its finest scale";
    throw correction_infeasible_error(os.str());
  }

  TableTdEvaluator g(empirical_td(pm));
  out.f.seq = build_dyadic_sequence(g, depth, s_tolerance);
  out.f.scale = out.scale;
  out.subadditivity = verify_correction(out.f, g, unit_square_grid(101));
  if (!out.subadditivity.pass)
    throw correction_infeasible_error(
        "corrected bound check failed on the unit grid (worst excess " +
        std::to_string(out.subadditivity.worst_excess) + ")");

  out.corrected.n = pm.n;
  out.corrected.labels = h.labels;
  out.corrected.values.resize(pm.n * pm.n);
  for (std::size_t i = 0; i < pm.values.size(); ++i)
    out.corrected.values[i] = out.scale * out.f.value(pm.values[i]);

  out.violations_after =
      triangle_violations(out.corrected, out.slack_bound());
  if (!out.violations_after.empty())
    throw correction_infeasible_error(
        "corrected matrix exceeds the documented slack in " +
        std::to_string(out.violations_after.size()) + " triangle(s)");
  out.equivalence = uniform_equivalence_moduli(h, out.corrected,
                                               continuity_threshold);
  return out;
}

}  // namespace metfix
