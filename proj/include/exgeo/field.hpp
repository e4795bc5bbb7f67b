#pragma once

#include <vector>

#include "exgeo/cube.hpp"
#include "exgeo/kernel.hpp"
#include "exgeo/levy.hpp"
#include "exgeo/morse.hpp"
#include "exgeo/quadrature.hpp"
#include "exgeo/rng.hpp"

// Compound-Poisson moving averages  X(t) = sum_m x_m g(s_m + t)  over the
// cube M = [-1,1]^d.  Atom shifts live in a window box large enough that
// anything outside contributes less than delta_cut * sup|g| anywhere on M.
//
// Atoms are kept only when |x_m| * T_g(s_m) > threshold, where
// T_g(s) = sup_{t in M} |g(s+t)|; the sampler realizes this restricted
// Poisson measure *exactly* by thinning: propose Poisson(vol * total_mass)
// uniform shifts, keep each with probability 2*tail(threshold/T_g(s)) /
// total_mass, then draw the magnitude from the law conditioned on the kept
// event.  With threshold == 0 (the default everywhere) the keep test is
// vacuous and no T_g evaluations happen at all.

namespace exgeo {

struct SimWindow {
  int d = 0;
  double half_extent = 0.0;    // box [-half_extent, half_extent]^d
  double support_radius = 0.0; // envelope(R) <= delta_cut * sup|g|
  double delta_cut = 0.0;

  double volume() const {
    double v = 1.0;
    for (int j = 0; j < d; ++j) v *= 2.0 * half_extent;
    return v;
  }
  bool contains(const Vec& s) const {
    for (int j = 0; j < s.size(); ++j)
      if (std::abs(s[j]) > half_extent) return false;
    return true;
  }
};

SimWindow build_window(const Kernel& kernel, double delta_cut = 1e-8);

struct Atom {
  double x;  // signed magnitude
  Vec s;     // shift
};

class FieldRealization final : public ScalarField {
public:
  FieldRealization(Kernel kernel, double threshold)
      : kernel_(std::move(kernel)), threshold_(threshold) {}

  std::vector<Atom> atoms;

  const Kernel& kernel() const { return kernel_; }
  double threshold() const { return threshold_; }

  int dim() const override { return kernel_.dim(); }
  double value(const Vec& t) const override;
  void gradient(const Vec& t, Vec& out) const override;
  void hessian(const Vec& t, Mat& out) const override;
  void eval(const Vec& t, double& v, Vec& g, Mat& h) const override;

private:
  Kernel kernel_;
  double threshold_;
};

// sup_{t in M} |g(s + t)|, via the critical point machinery on the section.
double section_sup_abs(const Kernel& kernel, const Vec& s, const CubeStrata& strata,
                       const MorseConfig& cfg = {});

class FieldSimulator {
public:
  FieldSimulator(Kernel kernel, TailModel tail, SimWindow window, double threshold,
                 MorseConfig morse_cfg = {});

  FieldRealization simulate(Rng& rng) const;

  // Rejection-samples realizations until sup_M X > level.  `tries` counts the
  // simulations consumed.  Throws BudgetExhausted when max_tries runs out.
  struct Conditioned {
    FieldRealization field;
    long tries = 0;
    double sup = 0.0;
  };
  Conditioned conditioned_realization(double level, Rng& rng, long max_tries) const;

  // Expected atom count integral(2 tail(threshold/T_g(s)) ds), by midpoint
  // refinement; with threshold == 0 this is just vol * total_mass.
  double intensity(const QuadratureConfig& qcfg = {}) const;

  const Kernel& kernel() const { return kernel_; }
  const TailModel& tail() const { return tail_; }
  const SimWindow& window() const { return window_; }
  double threshold() const { return threshold_; }
  const CubeStrata& strata() const { return strata_; }
  const MorseConfig& morse_config() const { return morse_cfg_; }

private:
  double keep_probability(const Vec& s) const;  // 2 tail(threshold/T_g(s))

  Kernel kernel_;
  TailModel tail_;
  SimWindow window_;
  double threshold_;
  MorseConfig morse_cfg_;
  CubeStrata strata_;
};

// One-shot conveniences matching the simulator methods.
FieldRealization simulate(const Kernel& kernel, const TailModel& tail,
                          const SimWindow& window, double threshold, Rng& rng,
                          const MorseConfig& cfg = {});
FieldSimulator::Conditioned conditioned_realization(
    const Kernel& kernel, const TailModel& tail, const SimWindow& window,
    double threshold, double level, Rng& rng, long max_tries,
    const MorseConfig& cfg = {});

}  // namespace exgeo
