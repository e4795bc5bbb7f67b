#include "exgeo/cubical.hpp"

namespace exgeo {

ValueGrid ValueGrid::sample(const ScalarField& f, int nodes_per_axis) {
  const int d = f.dim();
  if (d <= 0 || d > kMaxDim) throw ValidationError("ValueGrid: bad dimension");
  if (nodes_per_axis < 2) throw ValidationError("ValueGrid: need >= 2 nodes per axis");

  ValueGrid g;
  g.d = d;
  long total = 1;
  for (int j = 0; j < d; ++j) {
    g.shape[j] = nodes_per_axis;
    total *= nodes_per_axis;
  }
  g.values.resize(static_cast<size_t>(total));

  Vec t(d);
  std::array<int, kMaxDim> idx{};
  for (long lin = 0; lin < total; ++lin) {
    for (int j = 0; j < d; ++j)
      t[j] = -1.0 + 2.0 * idx[j] / (nodes_per_axis - 1);
    g.values[static_cast<size_t>(lin)] = f.value(t);
    for (int j = 0; j < d; ++j) {
      if (++idx[j] < nodes_per_axis) break;
      idx[j] = 0;
    }
  }
  return g;
}

long euler_characteristic_cubical(const ValueGrid& grid, double level) {
  const int d = grid.d;
  if (d <= 0) throw ValidationError("euler_characteristic_cubical: empty grid");

  std::array<long, kMaxDim> stride{};
  for (int j = 0; j < d; ++j) stride[j] = grid.stride(j);
  const long total = grid.size();
  const auto& v = grid.values;

  // above[i] amortizes the comparisons across all cells touching node i.
  std::vector<char> above(static_cast<size_t>(total));
  for (long i = 0; i < total; ++i) above[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] > level;

  long chi = 0;
  std::array<int, kMaxDim> idx{};
  const int nsub = 1 << d;

  for (long base = 0; base < total; ++base) {
    if (above[static_cast<size_t>(base)]) {
      // Enumerate cells with this node as their lexicographically-smallest
      // corner: each subset of axes along which the cell extends one step.
      for (int sub = 0; sub < nsub; ++sub) {
        bool feasible = true;
        int cell_dim = 0;
        for (int j = 0; j < d && feasible; ++j)
          if (sub & (1 << j)) {
            ++cell_dim;
            if (idx[j] + 1 >= grid.shape[j]) feasible = false;
          }
        if (!feasible) continue;

        bool all_above = true;
        for (int corner = sub; all_above; corner = (corner - 1) & sub) {
          long node = base;
          for (int j = 0; j < d; ++j)
            if (corner & (1 << j)) node += stride[j];
          all_above = above[static_cast<size_t>(node)];
          if (corner == 0) break;
        }
        if (all_above) chi += (cell_dim % 2 == 0) ? 1 : -1;
      }
    }
    for (int j = 0; j < d; ++j) {
      if (++idx[j] < grid.shape[j]) break;
      idx[j] = 0;
    }
  }
  return chi;
}

}  // namespace exgeo
