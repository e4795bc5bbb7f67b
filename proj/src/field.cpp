#include "exgeo/field.hpp"

#include <cmath>

namespace exgeo {

SimWindow build_window(const Kernel& kernel, double delta_cut) {
  SimWindow w;
  w.d = kernel.dim();
  w.delta_cut = delta_cut;
  w.support_radius = kernel.support_radius(delta_cut);
  // For t in M and ||s||_inf > 1 + R we have ||s+t||_2 >= ||s||_inf - 1 > R,
  // so the box [-(1+R), 1+R]^d captures every shift that can matter on M.
  w.half_extent = 1.0 + w.support_radius;
  return w;
}

double FieldRealization::value(const Vec& t) const {
  double v = 0.0;
  for (const auto& a : atoms) v += a.x * kernel_.value(a.s + t);
  return v;
}

void FieldRealization::gradient(const Vec& t, Vec& out) const {
  out = Vec::Zero(dim());
  Vec g(dim());
  for (const auto& a : atoms) {
    kernel_.gradient(a.s + t, g);
    out += a.x * g;
  }
}

void FieldRealization::hessian(const Vec& t, Mat& out) const {
  out = Mat::Zero(dim(), dim());
  Mat h(dim(), dim());
  for (const auto& a : atoms) {
    kernel_.hessian(a.s + t, h);
    out += a.x * h;
  }
}

void FieldRealization::eval(const Vec& t, double& v, Vec& g, Mat& h) const {
  const int d = dim();
  v = 0.0;
  g = Vec::Zero(d);
  h = Mat::Zero(d, d);
  double av;
  Vec ag(d);
  Mat ah(d, d);
  for (const auto& a : atoms) {
    kernel_.eval(a.s + t, av, ag, ah);
    v += a.x * av;
    g += a.x * ag;
    h += a.x * ah;
  }
}

double section_sup_abs(const Kernel& kernel, const Vec& s, const CubeStrata& strata,
                       const MorseConfig& cfg) {
  const SectionField sec(kernel, s);
  const SupResult r = field_extrema(sec, strata, cfg);
  return r.abs_sup();
}

FieldSimulator::FieldSimulator(Kernel kernel, TailModel tail, SimWindow window,
                               double threshold, MorseConfig morse_cfg)
    : kernel_(std::move(kernel)),
      tail_(std::move(tail)),
      window_(window),
      threshold_(threshold),
      morse_cfg_(morse_cfg),
      strata_(window.d) {
  if (threshold_ < 0.0)
    throw ValidationError("FieldSimulator: threshold must be >= 0");
  if (window_.d != kernel_.dim())
    throw ValidationError("FieldSimulator: window/kernel dimension mismatch");
}

double FieldSimulator::keep_probability(const Vec& s) const {
  const double T = section_sup_abs(kernel_, s, strata_, morse_cfg_);
  if (T <= 0.0) return 0.0;
  return 2.0 * tail_.tail(threshold_ / T);
}

FieldRealization FieldSimulator::simulate(Rng& rng) const {
  const int d = window_.d;
  FieldRealization field(kernel_, threshold_);

  const long n0 = rng.poisson(window_.volume() * tail_.total_mass());
  field.atoms.reserve(static_cast<size_t>(n0));

  Vec s(d);
  for (long m = 0; m < n0; ++m) {
    for (int j = 0; j < d; ++j)
      s[j] = rng.uniform(-window_.half_extent, window_.half_extent);

    double conditioning = 0.0;  // magnitude threshold given the kept event
    if (threshold_ > 0.0) {
      const double u_keep = rng.uniform() * tail_.total_mass();
      // Cheap exact pre-test: T_g(s) is bounded by the radial envelope at the
      // distance from -s to M, so most far-out proposals die without a
      // critical point search.
      double dist2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double excess = std::max(0.0, std::abs(s[j]) - 1.0);
        dist2 += excess * excess;
      }
      const double t_bound =
          std::min(kernel_.sup_abs(), kernel_.radial_envelope(std::sqrt(dist2)));
      if (t_bound <= 0.0 || 2.0 * tail_.tail(threshold_ / t_bound) <= u_keep)
        continue;
      const double T = section_sup_abs(kernel_, s, strata_, morse_cfg_);
      if (T <= 0.0 || 2.0 * tail_.tail(threshold_ / T) <= u_keep) continue;
      conditioning = threshold_ / T;
    }

    Atom a;
    a.s = s;
    a.x = rng.sign() * tail_.sample_atom_magnitude(conditioning, rng);
    field.atoms.push_back(std::move(a));
  }
  return field;
}

FieldSimulator::Conditioned FieldSimulator::conditioned_realization(
    double level, Rng& rng, long max_tries) const {
  if (max_tries <= 0)
    throw ValidationError("conditioned_realization: max_tries must be positive");
  for (long t = 1; t <= max_tries; ++t) {
    FieldRealization f = simulate(rng);
    const SupResult ext = field_extrema(f, strata_, morse_cfg_);
    if (ext.sup > level) return {std::move(f), t, ext.sup};
  }
  throw BudgetExhausted(
      "conditioned_realization: no exceedance of level " + std::to_string(level) +
      " in " + std::to_string(max_tries) + " tries (level too extreme?)");
}

double FieldSimulator::intensity(const QuadratureConfig& qcfg) const {
  if (threshold_ == 0.0) return window_.volume() * tail_.total_mass();

  const int d = window_.d;
  int n = qcfg.points_per_axis > 0 ? qcfg.points_per_axis : default_points_per_axis(d);
  double prev = -1.0;
  for (int level = 0; level <= qcfg.max_refine; ++level) {
    double sum = 0.0;
    const double cell = for_each_midpoint_node(
        d, window_.half_extent, n,
        [&](const Vec& s, long) { sum += keep_probability(s); });
    const double theta = sum * cell;
    if (level > 0 && std::abs(theta - prev) <= qcfg.rtol * std::abs(theta)) return theta;
    prev = theta;
    n *= 2;
  }
  return prev;  // best available estimate; callers wanting strictness compare levels
}

FieldRealization simulate(const Kernel& kernel, const TailModel& tail,
                          const SimWindow& window, double threshold, Rng& rng,
                          const MorseConfig& cfg) {
  return FieldSimulator(kernel, tail, window, threshold, cfg).simulate(rng);
}

FieldSimulator::Conditioned conditioned_realization(
    const Kernel& kernel, const TailModel& tail, const SimWindow& window,
    double threshold, double level, Rng& rng, long max_tries,
    const MorseConfig& cfg) {
  return FieldSimulator(kernel, tail, window, threshold, cfg)
      .conditioned_realization(level, rng, max_tries);
}

}  // namespace exgeo
