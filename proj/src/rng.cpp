#include "exgeo/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace exgeo {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

long Rng::poisson(double mean) {
  if (!(mean >= 0.0))
    throw std::invalid_argument("poisson: mean must be >= 0");
  long n = 0;
  while (mean > 30.0) {
    n += poisson(30.0);
    mean -= 30.0;
  }
  if (mean == 0.0) return n;
  const double limit = std::exp(-mean);
  double prod = uniform();
  while (prod > limit) {
    ++n;
    prod *= uniform();
  }
  return n;
}

double Rng::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("gamma: shape and scale must be positive");
  if (shape < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    const double u = uniform();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

}  // namespace exgeo
