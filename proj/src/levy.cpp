#include "exgeo/levy.hpp"

#include <cmath>

#include "exgeo/quadrature.hpp"

namespace exgeo {

namespace {

// standard normal pdf / upper tail
inline double phi(double z) {
  return 0.3989422804014326779399461 * std::exp(-0.5 * z * z);
}
inline double upper_Phi(double z) { return 0.5 * std::erfc(z * 0.7071067811865475244); }

// S(c) = integral_0^c phi(z) z^alpha dz.  The integrand is negligible past
// z ~ 40, so huge c costs nothing.
double tilted_mass(double c, double alpha) {
  const double hi = std::min(c, 40.0);
  if (hi <= 0.0) return 0.0;
  return adaptive_simpson([alpha](double z) { return phi(z) * std::pow(z, alpha); },
                          0.0, hi, 1e-12, 48);
}

// z ~ half-normal conditioned on z >= c (Robert's exponential proposal for
// deep tails).
double truncated_half_normal(double c, Rng& rng) {
  if (c <= 1.0) {
    for (;;) {
      const double z = std::abs(rng.normal());
      if (z >= c) return z;
    }
  }
  const double lambda = 0.5 * (c + std::sqrt(c * c + 4.0));
  for (;;) {
    const double z = c - std::log(rng.uniform()) / lambda;
    const double d = z - lambda;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return z;
  }
}

// z with density proportional to z^alpha phi(z) on (0, c).
double tilted_below(double c, double alpha, Rng& rng) {
  if (c <= 2.0) {
    // propose from z^alpha on (0,c), thin by the Gaussian factor
    for (;;) {
      const double z = c * std::pow(rng.uniform(), 1.0 / (alpha + 1.0));
      if (rng.uniform() <= std::exp(-0.5 * z * z)) return z;
    }
  }
  // propose from the untruncated tilted law via a Gamma draw
  for (;;) {
    const double z = std::sqrt(rng.gamma(0.5 * (alpha + 1.0), 2.0));
    if (z < c) return z;
  }
}

}  // namespace

TailModel::TailModel(double alpha, double x0, TailVariant variant)
    : alpha_(alpha), x0_(x0), variant_(variant), w_(1.0) {
  if (!(alpha > 0.0)) throw ValidationError("TailModel: alpha must be positive");
  if (!(x0 > 0.0)) throw ValidationError("TailModel: x0 must be positive");
  if (variant_ == TailVariant::typeG) {
    // w = lim tail/H, evaluated numerically at two well-separated points to
    // confirm the limit has been reached.
    const double r1 = tail_typeG(1e5 * x0_) / scale_H(1e5 * x0_);
    const double r2 = tail_typeG(1e6 * x0_) / scale_H(1e6 * x0_);
    if (std::abs(r1 - r2) > 1e-8 * std::abs(r2))
      throw std::logic_error("TailModel: typeG tail ratio failed to stabilize");
    w_ = r2;
  }
}

double TailModel::tail(double u) const {
  if (!(u > 0.0)) throw ValidationError("TailModel::tail: u must be positive");
  if (variant_ == TailVariant::pareto)
    return 0.5 * std::min(1.0, std::pow(u / x0_, -alpha_));
  return tail_typeG(u);
}

double TailModel::scale_H(double u) const {
  if (!(u >= x0_)) throw ValidationError("TailModel::scale_H: u must be >= x0");
  return 0.5 * std::pow(u / x0_, -alpha_);
}

double TailModel::tail_typeG(double u) const {
  // E[rho0((u/|Z|, inf))] split at the kink |Z| = u/x0:
  //   (x0/u)^alpha * S(c) + (1 - Phi(c)),  c = u/x0
  const double c = u / x0_;
  return std::pow(c, -alpha_) * tilted_mass(c, alpha_) + upper_Phi(c);
}

double TailModel::sample_atom_magnitude(double threshold, Rng& rng) const {
  if (threshold < 0.0)
    throw ValidationError("sample_atom_magnitude: threshold must be >= 0");
  if (variant_ == TailVariant::pareto) {
    const double base = std::max(threshold, x0_);
    return base * std::pow(rng.uniform(), -1.0 / alpha_);
  }
  return sample_typeG(threshold, rng);
}

double TailModel::sample_typeG(double threshold, Rng& rng) const {
  // X = Z * Y with Z ~ N(0,1), |Y| pareto(alpha, x0).  Given |X| > v the
  // mixing magnitude z = |Z| has density ~ phi(z) * min(1, (x0 z / v)^alpha);
  // we split it at c = v/x0 into an exact two-piece mixture, then draw |Y|
  // from its (closed-form) conditional Pareto law.
  double z;
  if (threshold == 0.0) {
    do {
      z = std::abs(rng.normal());
    } while (z == 0.0);
  } else {
    const double c = threshold / x0_;
    const double m_above = 2.0 * upper_Phi(c);
    const double m_below = 2.0 * std::pow(c, -alpha_) * tilted_mass(c, alpha_);
    if (rng.uniform() < m_above / (m_above + m_below))
      z = truncated_half_normal(c, rng);
    else
      z = tilted_below(c, alpha_, rng);
  }
  const double y = std::max(threshold / z, x0_) * std::pow(rng.uniform(), -1.0 / alpha_);
  return z * y;
}

}  // namespace exgeo
