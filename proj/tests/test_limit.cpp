#include <doctest.h>

#include <cmath>
#include <vector>

#include "exgeo/limit.hpp"

#include "support.hpp"

using namespace exgeo;

namespace {

constexpr int kVm = 0, kVp = 1, kInt = 2;  // d=1 face ids

LimitQuery q_of(std::vector<QueryAtom> atoms) {
  LimitQuery q;
  q.atoms = std::move(atoms);
  return q;
}

LimitEvaluator gaussian_evaluator(double alpha = 2.0) {
  return LimitEvaluator(Kernel::gaussian_bump(1, 1.0),
                        TailModel(alpha, 1.0, TailVariant::pareto));
}

// For the unit gaussian bump (a=1) the cube-sup of the section at shift s is
// T(s) = exp(-max(0,|s|-1)^2), so the normalizing constant has the closed
// form  integral T(s)^alpha ds = 2 + sqrt(pi/alpha).
double gaussian_norm_constant(double alpha) {
  return 2.0 + std::sqrt(M_PI / alpha);
}

}  // namespace

TEST_CASE("normalizing constant matches its closed form") {
  for (double alpha : {2.0, 1.5}) {
    LimitEvaluator ev = gaussian_evaluator(alpha);
    CHECK(ev.denominator() ==
          doctest::Approx(gaussian_norm_constant(alpha)).epsilon(3e-4));
    const QuadratureReport rep = ev.report();
    CHECK(rep.converged);
    CHECK(rep.nodes > 0);
    CHECK(rep.truncation_bound < 1e-10);
  }
}

TEST_CASE("normalizing constant is alpha-homogeneous in the kernel scale") {
  const TailModel tail(2.0, 1.0, TailVariant::pareto);
  LimitEvaluator base(Kernel::gaussian_bump(1, 1.0), tail);
  // scaling the kernel by 3 scales its envelope cut by 3 as well, so pinning
  // delta_cut at 3e-8 reproduces the base window exactly and the rule
  // freezes the same nodes: the ratio is 3^alpha up to rounding
  LimitEvaluator scaled(Kernel::gaussian_bump(1, 1.0).scaled(3.0), tail,
                        QuadratureConfig{}, MorseConfig{}, 3e-8);
  CHECK(scaled.denominator() ==
        doctest::Approx(9.0 * base.denominator()).epsilon(1e-9));
}

TEST_CASE("joint count probabilities hit their closed forms") {
  LimitEvaluator ev = gaussian_evaluator();
  const double C = 2.0 + std::sqrt(M_PI / 2.0);

  const LimitQuery q_int = q_of({{kInt, 1, 1}});
  const LimitQuery q_vp = q_of({{kVp, 0, 1}});
  const LimitQuery q_both = q_of({{kInt, 1, 1}, {kVp, 0, 1}});

  // interior-present: T(s)^2 integrates to 2 over |s| <= 1
  CHECK(ev.probability(q_int) == doctest::Approx(2.0 / C).epsilon(3e-4));
  // the +1 vertex is always critical; its value integrates to sqrt(pi/2)
  CHECK(ev.probability(q_vp) ==
        doctest::Approx(std::sqrt(M_PI / 2.0) / C).epsilon(3e-4));
  // joint event: min of the two order statistics
  const double joint =
      std::sqrt(M_PI / 8.0) * std::erf(2.0 * std::sqrt(2.0)) / C;
  CHECK(ev.probability(q_both) == doctest::Approx(joint).epsilon(3e-4));

  // the trivial query reuses the very same nodes: exactly one, bitwise
  CHECK(ev.probability(q_of({})) == 1.0);

  // the batched sweep returns the same numbers as one-at-a-time calls
  const auto batch = ev.probabilities({q_int, q_vp, q_both});
  CHECK(batch[0] == ev.probability(q_int));
  CHECK(batch[1] == ev.probability(q_vp));
  CHECK(batch[2] == ev.probability(q_both));
}

TEST_CASE("probabilities are monotone in the count threshold") {
  LimitEvaluator ev(Kernel::oscillating(1, 0.5, (Vec(1) << 6.0).finished()),
                    TailModel(2.0, 1.0, TailVariant::pareto));
  double prev = 1.0;
  for (long n = 1; n <= 4; ++n) {
    const double p = ev.probability(q_of({{kInt, 1, n}}));
    CHECK(p >= 0.0);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
  // at most three interior maxima exist at any shift
  CHECK(ev.probability(q_of({{kInt, 1, 4}})) == 0.0);
}

TEST_CASE("negating the kernel leaves symmetric-tail probabilities alone") {
  const TailModel tail(2.0, 1.0, TailVariant::pareto);
  LimitEvaluator plus(Kernel::gaussian_bump(1, 1.0), tail);
  LimitEvaluator minus(Kernel::gaussian_bump(1, 1.0).scaled(-1.0), tail);
  for (const LimitQuery& q :
       {q_of({{kInt, 1, 1}}), q_of({{kVp, 0, 1}}), q_of({{kInt, 0, 1}})}) {
    CHECK(minus.probability(q) ==
          doctest::Approx(plus.probability(q)).epsilon(1e-10));
  }
}

TEST_CASE("query validation rejects malformed atoms") {
  LimitEvaluator ev = gaussian_evaluator();
  CHECK_THROWS_AS(ev.validate(q_of({{99, 0, 1}})), ValidationError);
  CHECK_THROWS_AS(ev.validate(q_of({{kInt, 2, 1}})), ValidationError);  // index > dim
  CHECK_THROWS_AS(ev.validate(q_of({{kInt, -1, 1}})), ValidationError);
  CHECK_THROWS_AS(ev.validate(q_of({{kInt, 1, -2}})), ValidationError);
  CHECK_NOTHROW(ev.validate(q_of({{kInt, 1, 0}})));
}

TEST_CASE("sampled levels follow the alpha-power law") {
  LimitEvaluator ev = gaussian_evaluator();
  const long n = 30000;
  const std::vector<double> v = ev.sample_levels(n, 424242, 9, 1);
  REQUIRE(static_cast<long>(v.size()) == n);
  for (double x : v) {
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  const double ks = testsup::ks_statistic(
      v, [](double x) { return x <= 0 ? 0.0 : (x >= 1 ? 1.0 : x * x); });
  CHECK(ks < testsup::ks_critical_01(n));
}

TEST_CASE("sampler frequencies agree with quadrature probabilities") {
  LimitEvaluator ev = gaussian_evaluator();
  const std::vector<LimitQuery> qs = {q_of({{kInt, 1, 1}}),
                                      q_of({{kVp, 0, 1}}),
                                      q_of({{kInt, 1, 1}, {kVp, 0, 1}}),
                                      q_of({})};
  const auto probs = ev.probabilities(qs);
  const long n = 20000;
  SampleCounters counters;
  const auto freqs = ev.query_frequencies(qs, n, 31337, 4, 1, &counters);
  REQUIRE(freqs.size() == qs.size());
  for (size_t i = 0; i < qs.size(); ++i) {
    const double se =
        std::sqrt(std::max(probs[i] * (1 - probs[i]), 1e-12) / n);
    CHECK(std::abs(freqs[i] - probs[i]) < 3.0 * se + 1e-12);
  }
  CHECK(freqs[3] == 1.0);  // the trivial query holds for every draw
  CHECK(counters.proposals >= n);
  CHECK(counters.degenerate_resamples == 0);  // gaussian sections are clean

  // batch results do not depend on the worker count
  const auto freqs4 = ev.query_frequencies(qs, n, 31337, 4, 4);
  for (size_t i = 0; i < qs.size(); ++i) CHECK(freqs[i] == freqs4[i]);
}

TEST_CASE("one mixture draw carries coherent excursion statistics") {
  LimitEvaluator ev = gaussian_evaluator();
  Rng rng(777);
  for (int i = 0; i < 20; ++i) {
    const LimitSample smp = ev.sample(rng);
    CHECK((smp.sign == 1 || smp.sign == -1));
    CHECK(smp.v > 0.0);
    CHECK(smp.v < 1.0);
    CHECK(ev.window().contains(smp.w));
    CHECK(smp.stats.level == smp.v);
    // the branch section is normalized by its own sup
    CHECK(smp.stats.sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(smp.stats.euler == 1);  // single bump above any sub-sup level
  }
}

TEST_CASE("expected Euler characteristic: unimodal kernels give exactly one") {
  LimitEvaluator ev = gaussian_evaluator();
  CHECK(ev.expected_euler() == doctest::Approx(1.0).epsilon(1e-6));

  const EcDistribution dist = ev.ec_distribution(5000, 99, 7, 1);
  CHECK(dist.n == 5000);
  CHECK(dist.mass_outside(1) == 0.0);
  CHECK(dist.mean == 1.0);
  REQUIRE(dist.histogram.size() == 1);
  CHECK(dist.histogram.at(1) == 5000);
}

TEST_CASE("expected Euler characteristic: oscillating kernel, two routes") {
  LimitEvaluator ev(Kernel::oscillating(1, 0.5, (Vec(1) << 6.0).finished()),
                    TailModel(2.0, 1.0, TailVariant::pareto));
  const double quad = ev.expected_euler();
  CHECK(quad > 1.0);  // multi-bump excursions push the mean above one

  const EcDistribution dist = ev.ec_distribution(8000, 5150, 11, 1);
  CHECK(dist.mass_outside(1) > 0.05);
  double var = 0.0;
  for (const auto& [ec, cnt] : dist.histogram)
    var += cnt * (ec - dist.mean) * (ec - dist.mean);
  var /= dist.n;
  const double se = std::sqrt(var / dist.n);
  CHECK(std::abs(dist.mean - quad) < 3.0 * se);
}

TEST_CASE("the EC curve of a gaussian kernel is flat at one") {
  LimitEvaluator ev = gaussian_evaluator();
  const EcCurve curve = ev.ec_curve({0.2, 0.5, 0.9, 1.0}, 2000, 13, 6, 1);
  REQUIRE(curve.mean.size() == 4);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(curve.mean[i] == 1.0);
    CHECK(curve.se[i] == 0.0);
  }
  // the excursion set is strictly above the level, so at the normalized peak
  // height it is empty for every draw
  CHECK(curve.mean[3] == 0.0);
  CHECK(curve.se[3] == 0.0);
  CHECK(curve.dist.mass_outside(1) == 0.0);

  CHECK_THROWS_AS(ev.ec_curve({0.0}, 10, 1, 6, 1), ValidationError);
  CHECK_THROWS_AS(ev.ec_curve({1.2}, 10, 1, 6, 1), ValidationError);
}

TEST_CASE("two-dimensional evaluator: constant factorizes and the law is clean") {
  // separable gaussian bump: T_2(s) = T(s_1) T(s_2), so the normalizing
  // constant is the square of the one-dimensional one
  QuadratureConfig loose;
  loose.points_per_axis = 17;
  loose.rtol = 5e-3;
  loose.max_refine = 2;
  LimitEvaluator ev(Kernel::gaussian_bump(2, 1.0),
                    TailModel(2.0, 1.0, TailVariant::pareto), loose);
  const double c1 = gaussian_norm_constant(2.0);
  CHECK(ev.denominator() == doctest::Approx(c1 * c1).epsilon(0.02));
  CHECK(ev.probability(q_of({})) == 1.0);

  const EcDistribution dist = ev.ec_distribution(1500, 2718, 3, 1);
  CHECK(dist.mass_outside(1) == 0.0);
  CHECK(dist.counters.degenerate_resamples == 0);
}

TEST_CASE("quadrature reports exhaustion instead of returning junk") {
  QuadratureConfig strangled;
  strangled.points_per_axis = 9;
  strangled.rtol = 1e-9;
  strangled.max_refine = 0;
  LimitEvaluator ev(Kernel::gaussian_bump(2, 1.0),
                    TailModel(2.0, 1.0, TailVariant::pareto), strangled);
  CHECK_THROWS_AS(ev.denominator(), BudgetExhausted);
}

TEST_CASE("per-shift catalogs are exposed and window-checked") {
  LimitEvaluator ev = gaussian_evaluator();
  const SectionCatalog cat = ev.catalog_at((Vec(1) << 0.4).finished());
  CHECK(cat.crit.outward_marked);
  CHECK(cat.sup_pos == doctest::Approx(1.0).epsilon(1e-10));

  // order statistics are nonincreasing in the rank past rank 1
  for (const auto& [key, vals] : cat.pos_order_stats)
    for (size_t m = 1; m + 1 <= vals.size(); ++m)
      CHECK(cat.order_stat_pos(key.first, key.second, (long)m) >=
            cat.order_stat_pos(key.first, key.second, (long)m + 1));

  const double l = ev.window().half_extent;
  CHECK_THROWS_AS(ev.catalog_at((Vec(1) << 1.01 * l).finished()),
                  ValidationError);
  CHECK_THROWS_AS(ev.catalog_at((Vec(2) << 0.0, 0.0).finished()),
                  ValidationError);
}
