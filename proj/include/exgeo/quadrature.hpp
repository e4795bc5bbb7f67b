#pragma once

#include <functional>

#include "exgeo/types.hpp"

namespace exgeo {

// Controls for the midpoint tensor-grid rules used on window integrals.
// points_per_axis == 0 picks a dimension-appropriate default; refinement
// doubles the per-axis count until the integral's relative change falls
// below rtol or max_refine doublings have been spent.
struct QuadratureConfig {
  int points_per_axis = 0;
  double rtol = 1e-4;
  int max_refine = 3;
};

inline int default_points_per_axis(int d) {
  if (d <= 2) return 65;
  if (d == 3) return 17;
  return 9;
}

// Classic recursive adaptive Simpson on [a,b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10, int max_depth = 40);

// Visits every node of the d-dimensional midpoint grid with n points per axis
// over the box [-half_extent, half_extent]^d, in lexicographic order (axis 0
// fastest).  Returns the per-cell volume.
double for_each_midpoint_node(int d, double half_extent, int n_per_axis,
                              const std::function<void(const Vec&, long)>& visit);

}  // namespace exgeo
