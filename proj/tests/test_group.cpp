#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "metfix/deficiency.hpp"
#include "metfix/group.hpp"
#include "metfix/premetric.hpp"

using namespace metfix;

namespace {

bool kind_is(const std::vector<std::vector<std::size_t>>& table,
             validation_error::kind k) {
  try {
    group_from_table(table);
  } catch (const validation_error& e) {
    return e.which() == k;
  }
  return false;
}

// h(0,y) indexed by the word distance to y (d has unit steps 1/diameter).
std::vector<double> by_word_distance(const PreMetric& h,
                                     const PreMetric& d) {
  const double unit = d.min_positive();
  std::vector<double> out;
  for (std::size_t y = 0; y < h.n; ++y) {
    const std::size_t idx =
        static_cast<std::size_t>(std::llround(d.at(0, y) / unit));
    if (out.size() <= idx) out.resize(idx + 1, -1.0);
    out[idx] = h.at(0, y);
  }
  return out;
}

}  // namespace

TEST_CASE("group_from_table validates axioms") {
  const FiniteGroup z2 = group_from_table({{0, 1}, {1, 0}});
  CHECK(z2.order == 2);
  CHECK(z2.identity == 0);
  CHECK(z2.inv == std::vector<std::size_t>{0, 1});
  CHECK(z2.op(1, 1) == 0);

  CHECK(kind_is({{0, 1}, {1, 1}}, validation_error::kind::invalid_group));
  CHECK(kind_is({{0, 1}, {1}}, validation_error::kind::invalid_group));
  CHECK(kind_is({}, validation_error::kind::invalid_group));
  CHECK(kind_is({{0, 1, 2}, {2, 0, 1}, {1, 2, 0}},  // Latin, no identity
                validation_error::kind::invalid_group));

  // Latin square with two-sided identity and inverses that still fails
  // associativity: (1*2)*3 = 1 but 1*(2*3) = 3.
  CHECK(kind_is({{0, 1, 2, 3, 4},
                 {1, 0, 4, 2, 3},
                 {2, 3, 0, 4, 1},
                 {3, 4, 1, 0, 2},
                 {4, 2, 3, 1, 0}},
                validation_error::kind::invalid_group));
}

TEST_CASE("built-in families") {
  const FiniteGroup z8 = cyclic_group(8);
  CHECK(z8.op(5, 6) == 3);
  CHECK(z8.inv[3] == 5);
  CHECK(z8.identity == 0);

  const FiniteGroup d4 = dihedral_group(4);
  CHECK(d4.order == 8);
  // Non-abelian: rotation * reflection != reflection * rotation.
  CHECK(d4.op(1, 4) != d4.op(4, 1));
  CHECK(d4.op(d4.op(1, 4), d4.op(1, 4)) == 0);  // reflections square to e
  group_from_table([&] {  // re-validate through the axiom checker
    std::vector<std::vector<std::size_t>> rows(d4.order);
    for (std::size_t a = 0; a < d4.order; ++a)
      for (std::size_t b = 0; b < d4.order; ++b)
        rows[a].push_back(d4.op(a, b));
    return rows;
  }());

  const FiniteGroup s3 = symmetric_group(3);
  CHECK(s3.order == 6);
  CHECK(s3.identity == 0);
}

TEST_CASE("permutation closure is order-independent") {
  const GeneratedGroup a = group_from_generators({{1, 0, 2}, {0, 2, 1}});
  const GeneratedGroup b = group_from_generators({{0, 2, 1}, {1, 0, 2}});
  CHECK(a.group.order == 6);
  CHECK(a.group.mult == b.group.mult);
  CHECK(a.generator_elements == std::vector<std::size_t>{2, 1});
  CHECK(b.generator_elements == std::vector<std::size_t>{1, 2});
  CHECK(a.group.mult == symmetric_group(3).mult);
}

TEST_CASE("word metric on Z/8") {
  const FiniteGroup z8 = cyclic_group(8);
  const PreMetric d = word_metric(z8, {1});
  CHECK(d.at(0, 1) == 0.25);
  CHECK(d.at(0, 4) == 1.0);
  CHECK(d.at(0, 7) == 0.25);
  CHECK(d.at(2, 3) == 0.25);  // left-invariance baked in
  CHECK(is_left_invariant(z8, d));
  CHECK(triangle_violations(d).empty());

  // 2 generates only the even residues.
  CHECK_THROWS_AS(word_metric(z8, {2}), validation_error);
  CHECK_THROWS_AS(word_metric(cyclic_group(1), {0}), validation_error);
}

TEST_CASE("symmetrized radius takes the max over inversion") {
  const FiniteGroup z3 = cyclic_group(3);
  PreMetric d;  // a valid metric, deliberately not left-invariant
  d.n = 3;
  d.values = {0.0, 0.4, 0.9, 0.4, 0.0, 1.0, 0.9, 1.0, 0.0};
  REQUIRE(triangle_violations(d).empty());
  const std::vector<double> rho = symmetrized_radius(z3, d);
  CHECK(rho == std::vector<double>{0.0, 0.9, 0.9});
}

TEST_CASE("bump family on Z/8: radii dodge attained levels") {
  const FiniteGroup z8 = cyclic_group(8);
  const PreMetric d = word_metric(z8, {1});
  const BumpFamily fam = build_bump_family(z8, d);

  // cap 1/2 collides with rho(2) = 1/2, so it moves to the midpoint of
  // (1/4, 1/2); cap 3/16 falls inside the gap (0, 1/4) and is kept.
  CHECK(fam.radii == std::vector<double>{1.0, 0.375, 0.1875});
  CHECK(fam.truncation == 2);

  const PreMetric h = left_invariant_premetric(z8, fam);
  CHECK(is_left_invariant(z8, h));
  const std::vector<double> prof = by_word_distance(h, d);
  REQUIRE(prof.size() == 5);
  CHECK(prof[0] == 0.0);
  CHECK(prof[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(prof[2] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(prof[3] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(prof[4] == 1.0);
  CHECK(triangle_violations(h).empty());  // already a metric here
}

TEST_CASE("bump family on Z/12: three levels") {
  const FiniteGroup g = cyclic_group(12);
  const PreMetric d = word_metric(g, {1});
  const BumpFamily fam = build_bump_family(g, d);

  const double r1 = 0.5 * (2.0 / 6.0 + 0.5);  // midpoint of (1/3, 1/2)
  CHECK(fam.radii == std::vector<double>{1.0, r1, r1 / 2, r1 / 4});
  CHECK(fam.truncation == 3);

  const PreMetric h = left_invariant_premetric(g, fam);
  const std::vector<double> prof = by_word_distance(h, d);
  REQUIRE(prof.size() == 7);
  CHECK(prof[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(prof[2] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(prof[3] == doctest::Approx(1.0 / 14 + 0.5).epsilon(1e-12));
  CHECK(prof[4] == doctest::Approx(3.0 / 14 + 0.5).epsilon(1e-12));
  CHECK(prof[5] == doctest::Approx(5.0 / 14 + 0.5).epsilon(1e-12));
  CHECK(prof[6] == 1.0);
  CHECK(triangle_violations(h).empty());
}

TEST_CASE("bump family on S3 and D4: same profile") {
  for (int which : {0, 1}) {
    FiniteGroup g;
    PreMetric d;
    if (which == 0) {
      const GeneratedGroup gg = group_from_generators({{1, 0, 2}, {0, 2, 1}});
      g = gg.group;
      d = word_metric(g, gg.generator_elements);
    } else {
      g = dihedral_group(4);
      d = word_metric(g, {1, 4});
    }
    CAPTURE(which);
    CHECK(d.diameter() == 1.0);

    const BumpFamily fam = build_bump_family(g, d);
    CHECK(fam.radii == std::vector<double>{1.0, 0.5, 0.25});
    CHECK(fam.truncation == 2);

    const PreMetric h = left_invariant_premetric(g, fam);
    CHECK(is_left_invariant(g, h));
    for (std::size_t x = 0; x < g.order; ++x)
      for (std::size_t y = 0; y < g.order; ++y)
        CHECK(h.at(x, y) == doctest::Approx(d.at(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("bump family on Z/2: single level") {
  const FiniteGroup z2 = cyclic_group(2);
  const PreMetric d = word_metric(z2, {1});
  const BumpFamily fam = build_bump_family(z2, d);
  CHECK(fam.radii == std::vector<double>{1.0, 0.5});
  CHECK(fam.truncation == 1);
  const PreMetric h = left_invariant_premetric(z2, fam);
  CHECK(h.at(0, 1) == 1.0);
  CHECK(h.at(0, 0) == 0.0);
}

TEST_CASE("build_invariant_metric end to end on Z/8") {
  const FiniteGroup z8 = cyclic_group(8);
  const PreMetric d = word_metric(z8, {1});
  const GroupBuildResult res = build_invariant_metric(z8, d, 8);

  CHECK(res.d_scale == 1.0);
  CHECK(res.correction.was_metric);
  CHECK(res.correction.violations_after.empty());
  CHECK(res.output_left_invariant);

  REQUIRE(res.separation.size() == 2);
  CHECK(res.separation[0].m == 1);
  CHECK(res.separation[0].max_d == 0.25);  // h < 1/2 reaches word distance 1
  CHECK(res.separation[0].bound == 1.0);
  CHECK(res.separation[0].pass);
  CHECK(res.separation[1].m == 2);
  CHECK(res.separation[1].max_d == 0.0);  // h < 1/4 only on the diagonal
  CHECK(res.separation[1].pairs_below == 8);
  CHECK(res.separation[1].pass);

  // The comparison moduli are tabulated over the observable scales of each
  // side; both collapse to zero at delta -> 0 (uniform equivalence on a
  // finite set). The pass flag itself is a fineness heuristic that an
  // 8-point space with resolution 1/4 legitimately does not meet.
  REQUIRE_FALSE(res.equivalence.forward.deltas.empty());
  REQUIRE_FALSE(res.equivalence.backward.deltas.empty());
  CHECK(res.equivalence.forward.omega.front() == 0.0);
  CHECK(res.equivalence.backward.omega.front() == 0.0);
  CHECK(std::is_sorted(res.equivalence.forward.omega.begin(),
                       res.equivalence.forward.omega.end()));
  CHECK(std::is_sorted(res.equivalence.backward.omega.begin(),
                       res.equivalence.backward.omega.end()));
  CHECK(triangle_violations(res.correction.corrected,
                            res.correction.slack_bound())
            .empty());
}

TEST_CASE("build_invariant_metric rejects bad inputs") {
  const FiniteGroup z3 = cyclic_group(3);
  PreMetric bad;
  bad.n = 3;
  bad.values = {0, 1, 3, 1, 0, 1, 3, 1, 0};  // triangle violation
  CHECK_THROWS_AS(build_invariant_metric(z3, bad), validation_error);

  const PreMetric d8 = word_metric(cyclic_group(8), {1});
  try {
    build_invariant_metric(z3, d8);
    FAIL("size mismatch not caught");
  } catch (const validation_error& e) {
    CHECK(e.which() == validation_error::kind::point_mismatch);
  }
}
