#include "exgeo/quadrature.hpp"

#include <cmath>

namespace exgeo {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double rel_tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * rel_tol * (std::abs(left + right) + 1e-300))
    return left + right + err / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, rel_tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, rel_tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol, max_depth);
}

double for_each_midpoint_node(int d, double half_extent, int n_per_axis,
                              const std::function<void(const Vec&, long)>& visit) {
  if (d <= 0 || d > kMaxDim) throw ValidationError("midpoint grid: bad dimension");
  if (n_per_axis < 1) throw ValidationError("midpoint grid: need >= 1 point per axis");

  const double h = 2.0 * half_extent / n_per_axis;
  long total = 1;
  for (int j = 0; j < d; ++j) total *= n_per_axis;

  Vec s(d);
  std::array<int, kMaxDim> idx{};
  for (long lin = 0; lin < total; ++lin) {
    for (int j = 0; j < d; ++j) s[j] = -half_extent + h * (idx[j] + 0.5);
    visit(s, lin);
    for (int j = 0; j < d; ++j) {
      if (++idx[j] < n_per_axis) break;
      idx[j] = 0;
    }
  }
  double cell = 1.0;
  for (int j = 0; j < d; ++j) cell *= h;
  return cell;
}

}  // namespace exgeo
