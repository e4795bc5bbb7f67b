#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "exgeo/catalog.hpp"
#include "exgeo/field.hpp"
#include "exgeo/levy.hpp"
#include "exgeo/quadrature.hpp"
#include "exgeo/rng.hpp"

// High-level excursion laws of the compound-Poisson field, evaluated two
// independent ways:
//
//   * closed-form quadrature over the shift space of the order-statistic
//     integrands (probabilities of joint critical-point count events, the
//     normalizing constant, the expected Euler characteristic), and
//   * a mixture sampler (shift W from the eta density by rejection, branch
//     sign I, level V with P{V <= x} = x^alpha) whose excursion statistics
//     realize the same law draw by draw.
//
// The two paths share no numerics beyond the section catalogs, so their
// agreement is a meaningful cross-check rather than a tautology.
//
// Quadrature layout: integrands built from order statistics jump where a
// critical point of a section crosses a face boundary.  Along axis 0 the
// integrator locates those events by bisecting on the catalog's per-class
// count signature and integrates the smooth pieces separately; the remaining
// axes (d >= 2) use a plain midpoint tensor grid, which is adequate because
// the partially integrated rows are continuous in the outer variables.  In
// d = 1 the resulting rule (nodes, weights, catalogs) is frozen on first use:
// every query reuses identical nodes, so the trivial query integrates to
// exactly the normalizing constant and comes out as probability 1 with no
// quadrature slack.

namespace exgeo {

// One conjunct of a joint query: at least n critical points of the class
// (face_id, index).  n = 0 conjuncts are vacuously true for counting and
// enter the closed form through the sup convention.
struct QueryAtom {
  int face_id = 0;
  int index = 0;
  long n = 0;
};

// Conjunction of atoms; no atoms means the trivial query.
struct LimitQuery {
  std::vector<QueryAtom> atoms;
};

// Whether a realization's excursion statistics satisfy the joint event.
bool query_satisfied(const ExcursionStats& stats, const LimitQuery& q);

struct QuadratureReport {
  long nodes = 0;            // catalog evaluations in the accepted rule
  int refinements = 0;       // doublings performed past the base resolution
  double rel_change = 0.0;   // largest relative change at acceptance
  double truncation_bound = 0.0;  // envelope bound on mass outside the window
  bool converged = false;
};

struct LimitSample {
  Vec w;                 // shift drawn from the eta density
  int sign = 1;          // branch indicator I
  double v = 0.0;        // level in (0,1)
  ExcursionStats stats;  // of the normalized branch section above v
};

struct SampleCounters {
  long proposals = 0;
  long cheap_rejects = 0;         // killed by the radial envelope bound alone
  long degenerate_resamples = 0;  // catalog degeneracies, resampled
  long v_resamples = 0;           // level ties within degeneracy_tol
  SampleCounters& operator+=(const SampleCounters& o) {
    proposals += o.proposals;
    cheap_rejects += o.cheap_rejects;
    degenerate_resamples += o.degenerate_resamples;
    v_resamples += o.v_resamples;
    return *this;
  }
};

struct EcDistribution {
  std::map<long, long> histogram;
  long n = 0;
  double mean = 0.0;
  SampleCounters counters;

  double mass_outside(long ec) const;  // fraction of draws with EC != ec
};

// Monte Carlo mean EC of the normalized branch excursion above each fixed
// level, with the per-level standard error, plus the EC distribution at the
// random level V from the same draws.
struct EcCurve {
  std::vector<double> levels;
  std::vector<double> mean;
  std::vector<double> se;
  EcDistribution dist;
};

class LimitEvaluator {
public:
  // The morse config governs all catalog work; null-level dropping is forced
  // on (with a tolerance relative to the kernel sup unless one was given),
  // because positive/negative-part functionals are blind to roots at value
  // zero and kernels may legitimately carry degenerate zero-level sets.
  LimitEvaluator(Kernel kernel, TailModel tail, QuadratureConfig quad = {},
                 MorseConfig morse = {}, double delta_cut = 1e-8);

  const Kernel& kernel() const { return kernel_; }
  const TailModel& tail() const { return tail_; }
  const SimWindow& window() const { return window_; }
  const CubeStrata& strata() const { return strata_; }

  void validate(const LimitQuery& q) const;

  // Normalizing constant: integral over shifts of
  // w+ * sup_pos^alpha + w- * sup_neg^alpha.
  double denominator() const;

  // Report of the most recent quadrature (denominator is forced if nothing
  // ran yet).
  QuadratureReport report() const;

  // Limiting probability that all count thresholds are met jointly, as the
  // ratio of the order-statistic integral to the normalizing constant.  The
  // plural form evaluates every query in one sweep over the catalogs.
  double probability(const LimitQuery& q) const;
  std::vector<double> probabilities(const std::vector<LimitQuery>& qs) const;

  // Expected Euler characteristic of the limiting excursion description:
  // signed alpha-power sums of extended-outward critical values over the
  // normalizing constant.
  double expected_euler() const;

  // One draw of the limiting mixture (W, I, V) plus the excursion statistics
  // of the normalized branch section above V.
  LimitSample sample(Rng& rng, SampleCounters* counters = nullptr) const;

  // n independent draws; draw i uses substream_seed(seed, stream, i), so all
  // of these batch entry points return identical output for any worker count.
  std::vector<LimitSample> sample_batch(long n, std::uint64_t seed,
                                        std::uint64_t stream, int workers,
                                        SampleCounters* counters = nullptr) const;

  // Just the levels V of n draws (keeps memory flat for large-n law checks).
  std::vector<double> sample_levels(long n, std::uint64_t seed,
                                    std::uint64_t stream, int workers) const;

  // Fraction of n draws whose statistics satisfy each query.
  std::vector<double> query_frequencies(const std::vector<LimitQuery>& qs, long n,
                                        std::uint64_t seed, std::uint64_t stream,
                                        int workers,
                                        SampleCounters* counters = nullptr) const;

  // EC histogram + mean over n draws.
  EcDistribution ec_distribution(long n, std::uint64_t seed, std::uint64_t stream,
                                 int workers) const;

  // Monte Carlo EC-vs-level curve over n draws (levels in (0,1)).
  EcCurve ec_curve(const std::vector<double>& levels, long n, std::uint64_t seed,
                   std::uint64_t stream, int workers) const;

  // Catalog of one section; the shift must lie inside the window.
  SectionCatalog catalog_at(const Vec& s) const;

private:
  struct Rule1D {
    std::vector<double> s;
    std::vector<double> weight;
    std::vector<SectionCatalog> catalog;
    std::vector<double> events;  // located signature-change points
    QuadratureReport report;
  };

  // Integrand components extracted from one catalog; slot 0 is always the
  // normalizing-constant integrand, so ratios share one accumulation.
  using Components = std::function<void(const SectionCatalog&, std::vector<double>&)>;

  SectionCatalog catalog_nudged(Vec s, double nudge) const;
  double density(double sup_pos, double sup_neg) const;
  double density_bound(const Vec& s) const;  // radial-envelope upper bound
  void ensure_envelope() const;
  void ensure_rule() const;  // d == 1 frozen rule
  double truncation_bound() const;

  // Signature-partitioned adaptive integration along axis 0 with the other
  // coordinates fixed; accumulates component integrals into sums.
  void integrate_row(const Vec& outer, int n_components, const Components& f,
                     std::vector<double>& sums, long& nodes, double& worst_rel,
                     bool& all_converged) const;

  // Full-window integration; d == 1 reuses the frozen rule.
  std::vector<double> integrate(int n_components, const Components& f,
                                QuadratureReport& report) const;

  LimitSample sample_with_branch(Rng& rng, SampleCounters* counters,
                                 CriticalSet& branch) const;
  SampleCounters for_each_sample(
      long n, std::uint64_t seed, std::uint64_t stream, int workers,
      const std::function<void(long, const LimitSample&, const CriticalSet&)>& fn)
      const;

  Kernel kernel_;
  TailModel tail_;
  QuadratureConfig quad_;
  MorseConfig morse_;
  SimWindow window_;
  CubeStrata strata_;
  double wp_;
  double wm_;

  mutable std::mutex mu_;
  mutable bool rule_ready_ = false;
  mutable Rule1D rule_;
  mutable bool denom_ready_ = false;
  mutable double denom_ = 0.0;
  mutable QuadratureReport last_report_;
  mutable bool envelope_ready_ = false;
  mutable double envelope_ = 0.0;
};

}  // namespace exgeo
