#pragma once

#include <string>

#include "exgeo/rng.hpp"
#include "exgeo/types.hpp"

// Symmetric local jump measures with regularly varying tails, in two flavors:
//
//   pareto  rho((u, inf)) = 1/2 * min(1, (u/x0)^-alpha)
//           (all atom magnitudes are >= x0; total mass 1)
//
//   typeG   rho(B) = E[ rho0(Z^-1 B) ],  Z ~ N(0,1),  rho0 the pareto measure
//           (a Gaussian-mixed jump law; same tail order u^-alpha)
//
// Both are symmetric, so the positive and negative tail weights coincide.
// The tail-equivalence weight  w = lim_u tail(u) / H(u)  with
// H(u) = 1/2 (u/x0)^-alpha is exactly 1 for pareto; for typeG it is computed
// at construction by evaluating the ratio at large u instead of trusting any
// closed-form constant (the test suite pins the alpha = 2 value via an
// independent identity).

namespace exgeo {

enum class TailVariant { pareto, typeG };

class TailModel {
public:
  TailModel(double alpha, double x0, TailVariant variant);

  double alpha() const { return alpha_; }
  double x0() const { return x0_; }
  TailVariant variant() const { return variant_; }
  std::string variant_name() const {
    return variant_ == TailVariant::pareto ? "pareto" : "typeG";
  }
  double total_mass() const { return 1.0; }
  double w_plus() const { return w_; }
  double w_minus() const { return w_; }

  // rho((u, inf)) for u > 0.
  double tail(double u) const;

  // Regular-variation scale H(u) = 1/2 (u/x0)^-alpha, defined for u >= x0.
  double scale_H(double u) const;

  // |X| drawn from rho conditioned on |X| > threshold (threshold == 0 means
  // the unconditional normalized law rho/|rho|).  The caller attaches the
  // symmetric sign.
  double sample_atom_magnitude(double threshold, Rng& rng) const;

private:
  double tail_typeG(double u) const;
  double sample_typeG(double threshold, Rng& rng) const;

  double alpha_;
  double x0_;
  TailVariant variant_;
  double w_;
};

}  // namespace exgeo
