#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "metfix/correction.hpp"
#include "metfix/deficiency.hpp"
#include "metfix/premetric.hpp"
#include "metfix/reference.hpp"

namespace {

using namespace metfix;

PreMetric squared_euclidean(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = coord(rng);
    ys[i] = coord(rng);
  }
  PreMetric pm;
  pm.n = n;
  pm.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      pm.at(i, j) = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
  normalize(pm);
  for (double& v : pm.values) v *= v;
  return pm;
}

template <class F>
double best_ms(F&& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

int threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int t) {
#ifdef _OPENMP
  omp_set_num_threads(t);
#else
  (void)t;
#endif
}

}  // namespace

int main() {
  const int max_threads = threads();
  std::printf("threads available: %d\n\n", max_threads);

  std::printf("deficiency table: serial per-cell oracle vs rank-bucketed "
              "parallel kernel\n");
  std::printf("%6s %6s %12s %12s %9s %7s\n", "n", "cells", "serial_ms",
              "parallel_ms", "speedup", "equal");
  for (std::size_t n : {8, 12, 16, 20}) {
    const PreMetric pm = squared_euclidean(n, 1234 + (unsigned)n);
    EmpiricalTD a, b;
    const double t_ref = best_ms([&] { a = ref::empirical_td(pm); }, 3);
    const double t_par = best_ms([&] { b = empirical_td(pm); }, 3);
    const bool equal =
        a.breakpoints == b.breakpoints && a.table == b.table;
    std::printf("%6zu %6zu %12.2f %12.2f %8.1fx %7s\n", n,
                a.table.size(), t_ref, t_par, t_ref / t_par,
                equal ? "yes" : "NO");
  }

  std::printf("\ntriangle scan: 1 thread vs %d threads\n", max_threads);
  std::printf("%6s %12s %12s %9s\n", "n", "t1_ms", "tN_ms", "speedup");
  for (std::size_t n : {200, 400}) {
    const PreMetric pm = squared_euclidean(n, 77);
    set_threads(1);
    const double t1 = best_ms([&] { triangle_violations(pm); }, 3);
    set_threads(max_threads);
    const double tn = best_ms([&] { triangle_violations(pm); }, 3);
    std::printf("%6zu %12.2f %12.2f %8.1fx\n", n, t1, tn, t1 / tn);
  }

  std::printf("\ndyadic construction at depth 10 against an empirical "
              "table (n = 30)\n");
  {
    const PreMetric pm = squared_euclidean(30, 9);
    TableTdEvaluator g(empirical_td(pm));
    DyadicCorrectionSequence sa, sb;
    const double t_ref =
        best_ms([&] { sa = ref::build_dyadic_sequence(g, 10); }, 3);
    const double t_par = best_ms([&] { sb = build_dyadic_sequence(g, 10); }, 3);
    std::printf("serial %.2f ms, parallel %.2f ms, speedup %.1fx, equal %s\n",
                t_ref, t_par, t_ref / t_par, sa.r == sb.r ? "yes" : "NO");
  }

  std::printf("\ndyadic construction at depth 12 against g(a,b) = "
              "max(a,b)\n");
  {
    AnalyticTdEvaluator g([](double x, double y) { return std::max(x, y); });
    DyadicCorrectionSequence sa, sb;
    const double t_ref =
        best_ms([&] { sa = ref::build_dyadic_sequence(g, 12); }, 3);
    const double t_par = best_ms([&] { sb = build_dyadic_sequence(g, 12); }, 3);
    std::printf("serial %.2f ms, parallel %.2f ms, speedup %.1fx, equal %s\n",
                t_ref, t_par, t_ref / t_par, sa.r == sb.r ? "yes" : "NO");
  }

  return 0;
}
