#include "metfix/premetric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace metfix {

double PreMetric::diameter() const {
  double d = 0.0;
  for (double v : values) d = std::max(d, v);
  return d;
}

double PreMetric::min_positive() const {
  double m = 0.0;
  for (double v : values)
    if (v > 0.0 && (m == 0.0 || v < m)) m = v;
  return m;
}

std::vector<double> PreMetric::breakpoints() const {
  std::vector<double> bp(values);
  bp.push_back(0.0);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

namespace {

std::string cell(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

}  // namespace

ValidateResult validate_premetric(const std::vector<std::vector<double>>& m,
                                  std::vector<std::string> labels,
                                  double zero_tolerance) {
  const std::size_t n = m.size();
  if (n == 0)
    throw validation_error(validation_error::kind::bad_format, "empty matrix");
  for (std::size_t i = 0; i < n; ++i)
    if (m[i].size() != n)
      throw validation_error(validation_error::kind::not_square,
                             "row " + std::to_string(i) + " has " +
                                 std::to_string(m[i].size()) +
                                 " entries, expected " + std::to_string(n));
  if (!labels.empty() && labels.size() != n)
    throw validation_error(validation_error::kind::bad_format,
                           "label count does not match matrix size");

  PreMetric pm;
  pm.n = n;
  pm.values.assign(n * n, 0.0);
  std::vector<std::string> warnings;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = m[i][j];
      if (!std::isfinite(v))
        throw validation_error(validation_error::kind::nonfinite,
                               "entry " + cell(i, j) + " is not finite");
      if (v < -zero_tolerance)
        throw validation_error(validation_error::kind::negative_entry,
                               "entry " + cell(i, j) + " is negative");
      if (std::abs(v) <= zero_tolerance) v = 0.0;
      pm.at(i, j) = v;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (pm.at(i, i) != 0.0)
      throw validation_error(validation_error::kind::nonzero_diagonal,
                             "diagonal entry " + cell(i, i) + " is nonzero");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = pm.at(i, j), b = pm.at(j, i);
      if (std::abs(a - b) > zero_tolerance)
        throw validation_error(validation_error::kind::asymmetric,
                               "entries " + cell(i, j) + " and " + cell(j, i) +
                                   " differ");
      if (a != b) {
        const double avg = 0.5 * (a + b);
        pm.at(i, j) = pm.at(j, i) = avg;
        warnings.push_back("symmetrized entries " + cell(i, j) + "/" +
                           cell(j, i) + " within tolerance");
      }
    }
  }

  // Merge distinct points at distance zero: keep the smallest index of each
  // class, drop the rest. Representative rows stand in for the class.
  std::vector<std::size_t> rep(n);
  std::iota(rep.begin(), rep.end(), 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pm.at(i, j) == 0.0 && rep[j] == j) rep[j] = rep[i];

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (rep[i] == i) keep.push_back(i);

  ValidateResult out;
  out.class_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.class_of[i] = rep[i];

  if (keep.size() == n) {
    pm.labels = std::move(labels);
    out.premetric = std::move(pm);
    out.warnings = std::move(warnings);
    return out;
  }

  warnings.push_back("merged " + std::to_string(n - keep.size()) +
                     " point(s) at distance zero into their representatives");
  PreMetric merged;
  merged.n = keep.size();
  merged.values.assign(merged.n * merged.n, 0.0);
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b)
      merged.at(a, b) = pm.at(keep[a], keep[b]);
  if (!labels.empty()) {
    merged.labels.reserve(merged.n);
    for (std::size_t a : keep) merged.labels.push_back(labels[a]);
  }
  // Remap class_of onto indices of the merged matrix.
  std::vector<std::size_t> pos(n, 0);
  for (std::size_t a = 0; a < keep.size(); ++a) pos[keep[a]] = a;
  for (std::size_t i = 0; i < n; ++i) out.class_of[i] = pos[rep[i]];

  out.premetric = std::move(merged);
  out.warnings = std::move(warnings);
  return out;
}

std::vector<TriangleViolation> triangle_violations(const PreMetric& pm,
                                                   double tolerance) {
  const std::size_t n = pm.n;
  // Per-i buckets so the OpenMP fill is deterministic after concatenation.
  std::vector<std::vector<TriangleViolation>> buckets(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double hik = pm.at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double slack = hik - pm.at(i, j) - pm.at(j, k);
        if (slack > tolerance) buckets[i].push_back({i, j, k, slack});
      }
    }
  }
  std::vector<TriangleViolation> out;
  for (auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const TriangleViolation& a, const TriangleViolation& b) {
                     if (a.slack != b.slack) return a.slack > b.slack;
                     if (a.i != b.i) return a.i < b.i;
                     if (a.j != b.j) return a.j < b.j;
                     return a.k < b.k;
                   });
  return out;
}

double normalize(PreMetric& pm) {
  const double d = pm.diameter();
  if (d == 0.0) {
    if (pm.n >= 2)
      throw validation_error(validation_error::kind::all_zero,
                             "matrix has no positive entry to scale by");
    return 1.0;
  }
  for (double& v : pm.values) v /= d;
  return d;
}

}  // namespace metfix
