#pragma once

#include <array>
#include <vector>

#include "exgeo/kernel.hpp"
#include "exgeo/types.hpp"

// Euler characteristic of an excursion set via a cubical complex on a regular
// grid over [-1,1]^d.  This is deliberately independent of the critical-point
// machinery: the only ingredients are point evaluations and the alternating
// cell count  chi = sum_k (-1)^k #(k-cells),  where a cell belongs to the
// complex iff the field exceeds the level at all of its corners.  At a grid
// fine enough to resolve the excursion set this equals the Morse-theoretic
// value, which is exactly the cross-check the test suite leans on.

namespace exgeo {

struct ValueGrid {
  int d = 0;
  std::array<int, kMaxDim> shape{};   // nodes per axis, each >= 2
  std::vector<double> values;         // axis 0 fastest (stride 1)

  long stride(int axis) const {
    long s = 1;
    for (int j = 0; j < axis; ++j) s *= shape[j];
    return s;
  }
  long size() const { return stride(d); }

  // Samples f at the inclusive lattice -1 + 2*i/(n-1) along every axis.
  // Endpoints are included so boundary strata are represented.
  static ValueGrid sample(const ScalarField& f, int nodes_per_axis);
};

long euler_characteristic_cubical(const ValueGrid& grid, double level);

}  // namespace exgeo
