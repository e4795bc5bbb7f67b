#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

// Common fixed-capacity linear algebra types and error classes.
//
// Everything in this library works in spatial dimension d <= kMaxDim, so all
// vectors/matrices use Eigen types with a compile-time capacity bound: they
// are dynamically sized but live on the stack, which keeps the Newton /
// eigenvalue hot paths free of heap traffic.

namespace exgeo {

inline constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                          Eigen::ColMajor, kMaxDim, kMaxDim>;

// Invalid user input: bad dimension, malformed config, out-of-window request.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A critical point failed the non-degeneracy requirements (an eigenvalue of
// the restricted Hessian, or a boundary derivative deciding the
// extended-outward test, is indistinguishable from zero at the configured
// tolerance).  Monte Carlo drivers catch this, discard the realization and
// redraw; deterministic callers let it propagate.
class DegenerateCritical : public std::runtime_error {
public:
  explicit DegenerateCritical(const std::string& what) : std::runtime_error(what) {}
};

// An iterative scheme (quadrature refinement, rejection loop) exhausted its
// budget without meeting its target.
class BudgetExhausted : public std::runtime_error {
public:
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exgeo
