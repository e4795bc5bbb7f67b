#include "exgeo/limit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "exgeo/parallel.hpp"

namespace exgeo {

bool query_satisfied(const ExcursionStats& stats, const LimitQuery& q) {
  for (const auto& a : q.atoms) {
    if (a.n == 0) continue;
    const auto it = stats.counts.find({a.face_id, a.index});
    const long have = it == stats.counts.end() ? 0 : it->second;
    if (have < a.n) return false;
  }
  return true;
}

double EcDistribution::mass_outside(long ec) const {
  if (n == 0) return 0.0;
  long outside = 0;
  for (const auto& [value, count] : histogram)
    if (value != ec) outside += count;
  return static_cast<double>(outside) / static_cast<double>(n);
}

namespace {

using Signature = std::map<std::pair<int, int>, int>;
using CatalogFn = std::function<SectionCatalog(double)>;
using ComponentsFn =
    std::function<void(const SectionCatalog&, std::vector<double>&)>;

struct SegmentOut {
  std::vector<double> integral;
  double rel_change = 0.0;
  bool converged = false;
  int doublings = 0;
  long evals = 0;
  std::vector<double> s;
  std::vector<double> weight;
  std::vector<SectionCatalog> catalogs;
};

// Adaptive midpoint rule on [a, b]: double the node count until every
// component's change falls within rtol of its own scale (floored so that
// components negligible against the axis total are not chased to relative
// precision).
SegmentOut integrate_segment(const CatalogFn& catalog_at, double a, double b,
                             int n_components, const ComponentsFn& f, int m0,
                             int max_doublings, double rtol, double scale_floor,
                             bool keep_nodes) {
  SegmentOut out;
  std::vector<double> comp(n_components);
  std::vector<double> prev;
  int m = m0;
  for (int pass = 0;; ++pass) {
    const double h = (b - a) / m;
    std::vector<double> sums(n_components, 0.0);
    std::vector<double> s_nodes;
    std::vector<SectionCatalog> cats;
    if (keep_nodes) {
      s_nodes.reserve(m);
      cats.reserve(m);
    }
    for (int i = 0; i < m; ++i) {
      const double x = a + (i + 0.5) * h;
      SectionCatalog c = catalog_at(x);
      ++out.evals;
      std::fill(comp.begin(), comp.end(), 0.0);
      f(c, comp);
      for (int k = 0; k < n_components; ++k) sums[k] += comp[k];
      if (keep_nodes) {
        s_nodes.push_back(x);
        cats.push_back(std::move(c));
      }
    }
    for (double& v : sums) v *= h;

    bool done = false;
    if (pass > 0) {
      double worst = 0.0;
      for (int k = 0; k < n_components; ++k) {
        const double scale = std::max(std::abs(sums[k]), scale_floor);
        if (scale > 0.0)
          worst = std::max(worst, std::abs(sums[k] - prev[k]) / scale);
      }
      out.rel_change = worst;
      out.converged = worst <= rtol;
      done = out.converged || pass >= max_doublings;
    }
    if (done) {
      out.integral = std::move(sums);
      out.doublings = pass;
      if (keep_nodes) {
        out.s = std::move(s_nodes);
        out.weight.assign(out.s.size(), h);
        out.catalogs = std::move(cats);
      }
      return out;
    }
    prev = std::move(sums);
    m *= 2;
  }
}

struct AxisResult {
  std::vector<double> integral;
  std::vector<double> events;
  double rel_change = 0.0;
  bool converged = true;
  long evals = 0;
  std::vector<double> s;
  std::vector<double> weight;
  std::vector<SectionCatalog> catalogs;
};

// One axis of integration: scan for per-class count changes, bisect each one
// down to a point, then integrate the smooth pieces adaptively.
AxisResult integrate_axis(const CatalogFn& catalog_at, double lo, double hi,
                          int scan_points, int m0, int max_doublings,
                          double rtol, int n_components, const ComponentsFn& f,
                          bool keep_nodes) {
  AxisResult out;
  out.integral.assign(n_components, 0.0);
  const double h = (hi - lo) / scan_points;

  std::vector<Signature> sig(scan_points);
  std::vector<double> comp(n_components);
  double scale = 0.0;
  for (int i = 0; i < scan_points; ++i) {
    const SectionCatalog c = catalog_at(lo + (i + 0.5) * h);
    ++out.evals;
    sig[i] = c.crit.counts();
    std::fill(comp.begin(), comp.end(), 0.0);
    f(c, comp);
    scale += std::abs(comp[0]) * h;
  }

  for (int i = 0; i + 1 < scan_points; ++i) {
    if (sig[i] == sig[i + 1]) continue;
    double a = lo + (i + 0.5) * h;
    double b = lo + (i + 1.5) * h;
    for (int it = 0; it < 60 && b - a > 1e-11 * (hi - lo); ++it) {
      const double mid = 0.5 * (a + b);
      ++out.evals;
      if (catalog_at(mid).crit.counts() == sig[i])
        a = mid;
      else
        b = mid;
    }
    out.events.push_back(0.5 * (a + b));
  }

  std::vector<double> bounds;
  bounds.reserve(out.events.size() + 2);
  bounds.push_back(lo);
  for (double e : out.events) bounds.push_back(e);
  bounds.push_back(hi);

  const double floor_val = 1e-3 * scale;
  for (size_t i = 0; i + 1 < bounds.size(); ++i) {
    SegmentOut seg =
        integrate_segment(catalog_at, bounds[i], bounds[i + 1], n_components, f,
                          m0, max_doublings, rtol, floor_val, keep_nodes);
    out.evals += seg.evals;
    for (int k = 0; k < n_components; ++k) out.integral[k] += seg.integral[k];
    out.rel_change = std::max(out.rel_change, seg.rel_change);
    out.converged = out.converged && seg.converged;
    if (keep_nodes) {
      out.s.insert(out.s.end(), seg.s.begin(), seg.s.end());
      out.weight.insert(out.weight.end(), seg.weight.begin(), seg.weight.end());
      for (auto& c : seg.catalogs) out.catalogs.push_back(std::move(c));
    }
  }
  return out;
}

double query_integrand(const SectionCatalog& cat, const LimitQuery& q,
                       const CubeStrata& strata, double wp, double wm,
                       double alpha) {
  double vp = cat.sup_pos;
  double vm = cat.sup_neg;
  for (const auto& a : q.atoms) {
    vp = std::min(vp, cat.order_stat_pos(a.face_id, a.index, a.n));
    const int k = strata.face(a.face_id).dim;
    // The negative branch reads the class with the complementary index: a
    // high point of f is a low point of -f.
    vm = std::min(vm, cat.order_stat_neg(a.face_id, k - a.index, a.n));
  }
  return wp * std::pow(vp, alpha) + wm * std::pow(vm, alpha);
}

EcDistribution make_distribution(const std::vector<long>& ec,
                                 const SampleCounters& counters) {
  EcDistribution d;
  d.n = static_cast<long>(ec.size());
  d.counters = counters;
  double sum = 0.0;
  for (long v : ec) {
    ++d.histogram[v];
    sum += static_cast<double>(v);
  }
  d.mean = d.n > 0 ? sum / static_cast<double>(d.n) : 0.0;
  return d;
}

}  // namespace

LimitEvaluator::LimitEvaluator(Kernel kernel, TailModel tail,
                               QuadratureConfig quad, MorseConfig morse,
                               double delta_cut)
    : kernel_(std::move(kernel)),
      tail_(std::move(tail)),
      quad_(quad),
      morse_(morse),
      window_(build_window(kernel_, delta_cut)),
      strata_(kernel_.dim()),
      wp_(tail_.w_plus()),
      wm_(tail_.w_minus()) {
  morse_.drop_null_level_roots = true;
  if (morse_.null_level_tol <= 0.0)
    morse_.null_level_tol = 1e-8 * kernel_.sup_abs();
}

void LimitEvaluator::validate(const LimitQuery& q) const {
  const long n_faces = static_cast<long>(strata_.faces().size());
  for (const auto& a : q.atoms) {
    if (a.face_id < 0 || a.face_id >= n_faces)
      throw ValidationError("query references face id " +
                            std::to_string(a.face_id) + " outside 0.." +
                            std::to_string(n_faces - 1));
    const int k = strata_.face(a.face_id).dim;
    if (a.index < 0 || a.index > k)
      throw ValidationError("query index " + std::to_string(a.index) +
                            " out of range for a face of dimension " +
                            std::to_string(k));
    if (a.n < 0) throw ValidationError("query count must be >= 0");
  }
}

double LimitEvaluator::density(double sup_pos, double sup_neg) const {
  return wp_ * std::pow(sup_pos, tail_.alpha()) +
         wm_ * std::pow(sup_neg, tail_.alpha());
}

double LimitEvaluator::density_bound(const Vec& s) const {
  double dist2 = 0.0;
  for (int j = 0; j < s.size(); ++j) {
    const double e = std::max(0.0, std::abs(s[j]) - 1.0);
    dist2 += e * e;
  }
  const double b =
      std::min(kernel_.sup_abs(), kernel_.radial_envelope(std::sqrt(dist2)));
  return (wp_ + wm_) * std::pow(b, tail_.alpha());
}

SectionCatalog LimitEvaluator::catalog_nudged(Vec s, double nudge) const {
  // Quadrature nodes can land exactly on a degenerate section (a
  // measure-zero event); moving the node a hair inside its own cell keeps
  // the integral intact and the rule total.  Event bisection parks nodes
  // arbitrarily close to a transition, and at far shifts the whole section
  // (and with it every boundary derivative) scales toward zero, so the
  // escape step grows geometrically before giving up.  Sections too small
  // for even the grown step to matter fall under the null-level drop.
  for (int attempt = 0;; ++attempt) {
    try {
      return build_catalog(kernel_, s, strata_, morse_);
    } catch (const DegenerateCritical&) {
      if (attempt >= 4 || nudge <= 0.0) throw;
      for (int j = 0; j < s.size(); ++j) s[j] += nudge;
      nudge = std::min(nudge * 64.0, 1e-2);
    }
  }
}

double LimitEvaluator::truncation_bound() const {
  const int d = window_.d;
  const double alpha = tail_.alpha();
  const auto shell = [&](double r) {
    const double e = std::min(kernel_.radial_envelope(r), kernel_.sup_abs());
    return std::pow(e, alpha) * 2.0 * d *
           std::pow(2.0 * (1.0 + r), d - 1);
  };
  const double r0 = window_.support_radius;
  return (wp_ + wm_) * adaptive_simpson(shell, r0, r0 + 50.0, 1e-8, 40);
}

void LimitEvaluator::ensure_rule() const {
  std::lock_guard<std::mutex> lk(mu_);
  if (rule_ready_) return;
  const double L = window_.half_extent;
  const int scan = quad_.points_per_axis > 0 ? quad_.points_per_axis : 129;
  const double nudge = 1e-7 * (2.0 * L / scan);
  const auto cat_at = [&](double x) {
    Vec s(1);
    s[0] = x;
    return catalog_nudged(s, nudge);
  };
  const auto den_only = [this](const SectionCatalog& c, std::vector<double>& out) {
    out[0] = density(c.sup_pos, c.sup_neg);
  };
  AxisResult axis = integrate_axis(cat_at, -L, L, scan, 9, 10, quad_.rtol, 1,
                                   den_only, /*keep_nodes=*/true);
  rule_.s = std::move(axis.s);
  rule_.weight = std::move(axis.weight);
  rule_.catalog = std::move(axis.catalogs);
  rule_.events = std::move(axis.events);
  rule_.report.nodes = axis.evals;
  rule_.report.refinements = 0;
  rule_.report.rel_change = axis.rel_change;
  rule_.report.converged = axis.converged;
  rule_.report.truncation_bound = truncation_bound();
  rule_ready_ = true;
}

std::vector<double> LimitEvaluator::integrate(int n_components,
                                              const Components& f,
                                              QuadratureReport& report) const {
  if (window_.d == 1) {
    ensure_rule();
    if (!rule_.report.converged)
      throw BudgetExhausted(
          "limit quadrature: the 1-d rule did not reach rtol; raise rtol or "
          "points_per_axis");
    std::vector<double> sums(n_components, 0.0);
    std::vector<double> comp(n_components);
    for (size_t i = 0; i < rule_.s.size(); ++i) {
      std::fill(comp.begin(), comp.end(), 0.0);
      f(rule_.catalog[i], comp);
      for (int k = 0; k < n_components; ++k)
        sums[k] += rule_.weight[i] * comp[k];
    }
    report = rule_.report;
    return sums;
  }

  const int d = window_.d;
  const double L = window_.half_extent;
  int n = quad_.points_per_axis > 0 ? quad_.points_per_axis
                                    : default_points_per_axis(d);
  std::vector<double> prev;
  for (int level = 0;; ++level) {
    std::vector<double> sums(n_components, 0.0);
    long nodes = 0;
    double row_worst = 0.0;
    bool rows_ok = true;
    const double cell = for_each_midpoint_node(
        d - 1, L, n, [&](const Vec& outer, long) {
          integrate_row(outer, n_components, f, sums, nodes, row_worst, rows_ok);
        });
    for (double& v : sums) v *= cell;
    if (!rows_ok)
      throw BudgetExhausted(
          "limit quadrature: a row integration did not reach rtol; raise rtol");
    if (level > 0) {
      double worst = 0.0;
      const double floor_val = 1e-12 * std::abs(sums[0]);
      for (int k = 0; k < n_components; ++k) {
        const double scale = std::max(std::abs(sums[k]), floor_val);
        if (scale > 0.0)
          worst = std::max(worst, std::abs(sums[k] - prev[k]) / scale);
      }
      if (worst <= quad_.rtol) {
        report.nodes = nodes;
        report.refinements = level;
        report.rel_change = worst;
        report.converged = true;
        report.truncation_bound = truncation_bound();
        return sums;
      }
    }
    if (level >= quad_.max_refine)
      throw BudgetExhausted(
          "limit quadrature: tensor refinement did not converge; raise "
          "max_refine or rtol");
    prev = std::move(sums);
    n *= 2;
  }
}

void LimitEvaluator::integrate_row(const Vec& outer, int n_components,
                                   const Components& f,
                                   std::vector<double>& sums, long& nodes,
                                   double& worst_rel, bool& all_converged) const {
  const int d = window_.d;
  const double L = window_.half_extent;
  constexpr int kScan = 33;
  constexpr int kM0 = 5;
  constexpr int kDoublings = 6;
  const double nudge = 1e-7 * (2.0 * L / kScan);
  const auto cat_at = [&](double x) {
    Vec s(d);
    s[0] = x;
    for (int j = 1; j < d; ++j) s[j] = outer[j - 1];
    return catalog_nudged(s, nudge);
  };
  AxisResult axis = integrate_axis(cat_at, -L, L, kScan, kM0, kDoublings,
                                   quad_.rtol, n_components, f,
                                   /*keep_nodes=*/false);
  for (int k = 0; k < n_components; ++k) sums[k] += axis.integral[k];
  nodes += axis.evals;
  worst_rel = std::max(worst_rel, axis.rel_change);
  all_converged = all_converged && axis.converged;
}

double LimitEvaluator::denominator() const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (denom_ready_) return denom_;
  }
  QuadratureReport rep;
  const auto den_only = [this](const SectionCatalog& c, std::vector<double>& out) {
    out[0] = density(c.sup_pos, c.sup_neg);
  };
  const auto sums = integrate(1, den_only, rep);
  if (sums[0] <= 0.0)
    throw ValidationError("limit law: normalizing constant vanishes on the window");
  std::lock_guard<std::mutex> lk(mu_);
  denom_ = sums[0];
  denom_ready_ = true;
  last_report_ = rep;
  return denom_;
}

QuadratureReport LimitEvaluator::report() const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (last_report_.nodes > 0) return last_report_;
  }
  denominator();
  std::lock_guard<std::mutex> lk(mu_);
  return last_report_;
}

std::vector<double> LimitEvaluator::probabilities(
    const std::vector<LimitQuery>& qs) const {
  for (const auto& q : qs) validate(q);
  const int nc = 1 + static_cast<int>(qs.size());
  const double alpha = tail_.alpha();
  const auto comps = [&](const SectionCatalog& c, std::vector<double>& out) {
    out[0] = density(c.sup_pos, c.sup_neg);
    for (size_t k = 0; k < qs.size(); ++k)
      out[1 + k] = query_integrand(c, qs[k], strata_, wp_, wm_, alpha);
  };
  QuadratureReport rep;
  const auto sums = integrate(nc, comps, rep);
  if (sums[0] <= 0.0)
    throw ValidationError("limit law: normalizing constant vanishes on the window");
  {
    std::lock_guard<std::mutex> lk(mu_);
    last_report_ = rep;
    if (window_.d == 1 && !denom_ready_) {
      denom_ = sums[0];
      denom_ready_ = true;
    }
  }
  std::vector<double> out(qs.size());
  for (size_t k = 0; k < qs.size(); ++k) out[k] = sums[1 + k] / sums[0];
  return out;
}

double LimitEvaluator::probability(const LimitQuery& q) const {
  return probabilities({q})[0];
}

double LimitEvaluator::expected_euler() const {
  const double alpha = tail_.alpha();
  const auto comps = [&](const SectionCatalog& c, std::vector<double>& out) {
    out[0] = density(c.sup_pos, c.sup_neg);
    double acc_p = 0.0;
    double acc_m = 0.0;
    for (const auto& p : c.crit.points) {
      // Integrating the level EC against the law of V collapses to signed
      // alpha-powers of the critical values; the branch normalizations
      // cancel against the mixture weights.
      if (p.extended_outward && p.value > 0.0) {
        const double sgn = (p.face_dim - p.index) % 2 ? -1.0 : 1.0;
        acc_p += sgn * std::pow(p.value, alpha);
      }
      if (p.extended_outward_negated && p.value < 0.0) {
        const double sgn = p.index % 2 ? -1.0 : 1.0;
        acc_m += sgn * std::pow(-p.value, alpha);
      }
    }
    out[1] = wp_ * acc_p + wm_ * acc_m;
  };
  QuadratureReport rep;
  const auto sums = integrate(2, comps, rep);
  if (sums[0] <= 0.0)
    throw ValidationError("limit law: normalizing constant vanishes on the window");
  {
    std::lock_guard<std::mutex> lk(mu_);
    last_report_ = rep;
    if (window_.d == 1 && !denom_ready_) {
      denom_ = sums[0];
      denom_ready_ = true;
    }
  }
  return sums[1] / sums[0];
}

void LimitEvaluator::ensure_envelope() const {
  std::lock_guard<std::mutex> lk(mu_);
  if (envelope_ready_) return;
  const int d = window_.d;
  const int n = d <= 2 ? 65 : default_points_per_axis(d);
  double mx = 0.0;
  for_each_midpoint_node(d, window_.half_extent, n, [&](const Vec& s, long) {
    const SupResult ext = field_extrema(SectionField(kernel_, s), strata_, morse_);
    mx = std::max(mx, density(std::max(ext.sup, 0.0), std::max(-ext.inf, 0.0)));
  });
  if (mx <= 0.0)
    throw ValidationError("limit sampler: the eta density vanishes on the window");
  envelope_ = 1.1 * mx;
  envelope_ready_ = true;
}

LimitSample LimitEvaluator::sample_with_branch(Rng& rng,
                                               SampleCounters* counters,
                                               CriticalSet& branch) const {
  ensure_envelope();
  const int d = window_.d;
  const double L = window_.half_extent;
  const double alpha = tail_.alpha();
  SampleCounters local;
  constexpr long kMaxProposals = 4000000;
  Vec s(d);
  for (long it = 0; it < kMaxProposals; ++it) {
    ++local.proposals;
    for (int j = 0; j < d; ++j) s[j] = rng.uniform(-L, L);
    const double u = rng.uniform();
    if (u * envelope_ >= density_bound(s)) {
      ++local.cheap_rejects;
      continue;
    }
    const SupResult ext =
        field_extrema(SectionField(kernel_, s), strata_, morse_);
    const double dens =
        density(std::max(ext.sup, 0.0), std::max(-ext.inf, 0.0));
    if (dens > envelope_)
      throw std::logic_error(
          "limit sampler: eta envelope violated; the lattice maximum "
          "underestimated the density peak");
    if (u * envelope_ >= dens) continue;

    SectionCatalog cat;
    try {
      cat = build_catalog(kernel_, s, strata_, morse_);
    } catch (const DegenerateCritical&) {
      ++local.degenerate_resamples;
      continue;
    }
    const double dp = wp_ * std::pow(cat.sup_pos, alpha);
    const double dm = wm_ * std::pow(cat.sup_neg, alpha);
    const int sign = rng.uniform() * (dp + dm) < dp ? 1 : -1;
    const double sup_branch = sign == 1 ? cat.sup_pos : cat.sup_neg;
    branch = sign == 1 ? std::move(cat.crit) : negate(cat.crit);
    for (auto& p : branch.points) p.value /= sup_branch;

    double v;
    for (;;) {
      v = std::pow(rng.uniform(), 1.0 / alpha);
      bool tie = false;
      for (const auto& p : branch.points)
        if (std::abs(p.value - v) <= morse_.degeneracy_tol) {
          tie = true;
          break;
        }
      if (!tie) break;
      ++local.v_resamples;
    }

    LimitSample out;
    out.w = s;
    out.sign = sign;
    out.v = v;
    out.stats = excursion_stats(branch, v);
    if (counters) *counters += local;
    return out;
  }
  if (counters) *counters += local;
  throw BudgetExhausted(
      "limit sampler: proposal budget exhausted; the acceptance rate is "
      "pathologically low for this kernel/window");
}

LimitSample LimitEvaluator::sample(Rng& rng, SampleCounters* counters) const {
  CriticalSet branch;
  return sample_with_branch(rng, counters, branch);
}

SampleCounters LimitEvaluator::for_each_sample(
    long n, std::uint64_t seed, std::uint64_t stream, int workers,
    const std::function<void(long, const LimitSample&, const CriticalSet&)>& fn)
    const {
  if (n < 0) throw ValidationError("sample count must be >= 0");
  ensure_envelope();
  std::vector<SampleCounters> per_draw(n);
  parallel_for(n, workers, [&](long i) {
    Rng rng(substream_seed(seed, stream, static_cast<std::uint64_t>(i)));
    CriticalSet branch;
    const LimitSample smp = sample_with_branch(rng, &per_draw[i], branch);
    fn(i, smp, branch);
  });
  SampleCounters total;
  for (const auto& c : per_draw) total += c;
  return total;
}

std::vector<LimitSample> LimitEvaluator::sample_batch(
    long n, std::uint64_t seed, std::uint64_t stream, int workers,
    SampleCounters* counters) const {
  std::vector<LimitSample> out(n);
  const SampleCounters total = for_each_sample(
      n, seed, stream, workers,
      [&](long i, const LimitSample& smp, const CriticalSet&) { out[i] = smp; });
  if (counters) *counters += total;
  return out;
}

std::vector<double> LimitEvaluator::sample_levels(long n, std::uint64_t seed,
                                                  std::uint64_t stream,
                                                  int workers) const {
  std::vector<double> out(n);
  for_each_sample(n, seed, stream, workers,
                  [&](long i, const LimitSample& smp, const CriticalSet&) {
                    out[i] = smp.v;
                  });
  return out;
}

std::vector<double> LimitEvaluator::query_frequencies(
    const std::vector<LimitQuery>& qs, long n, std::uint64_t seed,
    std::uint64_t stream, int workers, SampleCounters* counters) const {
  for (const auto& q : qs) validate(q);
  const size_t nq = qs.size();
  std::vector<std::uint8_t> hit(static_cast<size_t>(n) * nq, 0);
  const SampleCounters total = for_each_sample(
      n, seed, stream, workers,
      [&](long i, const LimitSample& smp, const CriticalSet&) {
        for (size_t k = 0; k < nq; ++k)
          hit[static_cast<size_t>(i) * nq + k] =
              query_satisfied(smp.stats, qs[k]) ? 1 : 0;
      });
  if (counters) *counters += total;
  std::vector<double> freq(nq, 0.0);
  for (long i = 0; i < n; ++i)
    for (size_t k = 0; k < nq; ++k)
      freq[k] += hit[static_cast<size_t>(i) * nq + k];
  for (double& fq : freq) fq /= static_cast<double>(n);
  return freq;
}

EcDistribution LimitEvaluator::ec_distribution(long n, std::uint64_t seed,
                                               std::uint64_t stream,
                                               int workers) const {
  std::vector<long> ec(n);
  const SampleCounters total = for_each_sample(
      n, seed, stream, workers,
      [&](long i, const LimitSample& smp, const CriticalSet&) {
        ec[i] = smp.stats.euler;
      });
  return make_distribution(ec, total);
}

EcCurve LimitEvaluator::ec_curve(const std::vector<double>& levels, long n,
                                 std::uint64_t seed, std::uint64_t stream,
                                 int workers) const {
  for (double v : levels)
    if (!(v > 0.0 && v <= 1.0))
      throw ValidationError("curve levels must lie in (0, 1]");
  const long nl = static_cast<long>(levels.size());
  std::vector<long> ec(n);
  std::vector<long> grid(static_cast<size_t>(n) * nl);
  const SampleCounters total = for_each_sample(
      n, seed, stream, workers,
      [&](long i, const LimitSample& smp, const CriticalSet& branch) {
        ec[i] = smp.stats.euler;
        for (long k = 0; k < nl; ++k)
          grid[static_cast<size_t>(i) * nl + k] =
              euler_characteristic_morse(branch, levels[k]);
      });
  EcCurve out;
  out.levels = levels;
  out.mean.assign(nl, 0.0);
  out.se.assign(nl, 0.0);
  if (n > 0) {
    for (long k = 0; k < nl; ++k) {
      double sum = 0.0;
      for (long i = 0; i < n; ++i) sum += grid[static_cast<size_t>(i) * nl + k];
      const double mean = sum / static_cast<double>(n);
      double var = 0.0;
      for (long i = 0; i < n; ++i) {
        const double dlt = grid[static_cast<size_t>(i) * nl + k] - mean;
        var += dlt * dlt;
      }
      out.mean[k] = mean;
      out.se[k] = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    }
  }
  out.dist = make_distribution(ec, total);
  return out;
}

SectionCatalog LimitEvaluator::catalog_at(const Vec& s) const {
  if (s.size() != window_.d)
    throw ValidationError("catalog shift has the wrong dimension");
  if (!window_.contains(s))
    throw ValidationError("catalog shift lies outside the simulation window");
  return build_catalog(kernel_, s, strata_, morse_);
}

}  // namespace exgeo
