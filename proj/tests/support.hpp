#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "exgeo/types.hpp"

// Shared numeric oracles for the test suite.  Everything here is built from
// first principles (finite differences, trapezoid sums, empirical CDFs) so
// it can cross-check the library without sharing code paths with it.

namespace testsup {

using exgeo::Mat;
using exgeo::Vec;

// Central difference of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& t,
                       double h = 1e-5) {
  Vec g(t.size());
  Vec tp = t, tm = t;
  for (int j = 0; j < t.size(); ++j) {
    tp[j] = t[j] + h;
    tm[j] = t[j] - h;
    g[j] = (f(tp) - f(tm)) / (2.0 * h);
    tp[j] = t[j];
    tm[j] = t[j];
  }
  return g;
}

// Central difference of an analytic gradient; differencing the (separately
// verified) gradient keeps the Hessian check far from roundoff even when
// the field values are large.
inline Mat fd_hessian(const std::function<Vec(const Vec&)>& grad, const Vec& t,
                      double h = 1e-5) {
  const int d = static_cast<int>(t.size());
  Mat out(d, d);
  Vec tp = t, tm = t;
  for (int j = 0; j < d; ++j) {
    tp[j] = t[j] + h;
    tm[j] = t[j] - h;
    const Vec gp = grad(tp);
    const Vec gm = grad(tm);
    for (int i = 0; i < d; ++i) out(i, j) = (gp[i] - gm[i]) / (2.0 * h);
    tp[j] = t[j];
    tm[j] = t[j];
  }
  return out;
}

inline double trapezoid(const std::function<double(double)>& f, double a,
                        double b, int n) {
  const double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  return sum * h;
}

// Two-sided Kolmogorov-Smirnov statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> xs,
                           const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double c = cdf(xs[i]);
    d = std::max(d, std::abs(c - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
  }
  return d;
}

// Asymptotic two-sided KS critical value at significance 0.01.
inline double ks_critical_01(double n) {
  const double rn = std::sqrt(n);
  return 1.628 / (rn + 0.12 + 0.11 / rn);
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

}  // namespace testsup
