#include "exgeo/morse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace exgeo {

namespace {

constexpr double kEscapeBound = 3.0;  // iterates wandering past this are lost

struct Root {
  Vec t;          // full coordinates, fixed ones exactly at their signs
  double value;
};

std::string describe_point(const FaceDescriptor& face, const Vec& t, double value) {
  std::ostringstream os;
  os << "face " << face.face_id << " at (";
  for (int j = 0; j < t.size(); ++j) os << (j ? "," : "") << t[j];
  os << "), value " << value;
  return os.str();
}

// Damped Newton on the restriction of f to one face, from one seed.  Returns
// true on convergence; the converged point (full coordinates) and value land
// in `t` / `value`.  `grad`/`hess` are scratch sized to the full dimension.
bool newton_on_face(const ScalarField& f, const FaceDescriptor& face,
                    const MorseConfig& cfg, Vec& t, double& value, Vec& grad,
                    Mat& hess) {
  const int k = face.dim;
  const auto& free = face.free_coords;

  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1> gs(k), delta(k);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim> Hs(k, k);

  double v;
  f.eval(t, v, grad, hess);
  for (int m = 0; m < k; ++m) gs[m] = grad[free[m]];
  double gn = gs.template lpNorm<Eigen::Infinity>();

  for (int iter = 0; iter < cfg.max_newton_iter; ++iter) {
    if (gn < cfg.grad_tol) {
      value = v;
      return true;
    }
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) Hs(r, c) = hess(free[r], free[c]);
    delta = Hs.colPivHouseholderQr().solve(-gs);

    // Keep steps sane near rank-deficient Hessians.
    const double dn = delta.template lpNorm<Eigen::Infinity>();
    if (!std::isfinite(dn)) return false;
    if (dn > 0.5) delta *= 0.5 / dn;

    // Backtrack until the restricted gradient norm actually drops.
    double step = 1.0;
    bool improved = false;
    Vec t_try = t;
    for (int h = 0; h < 10; ++h) {
      for (int m = 0; m < k; ++m) t_try[free[m]] = t[free[m]] + step * delta[m];
      double v2;
      f.eval(t_try, v2, grad, hess);
      for (int m = 0; m < k; ++m) gs[m] = grad[free[m]];
      const double gn2 = gs.template lpNorm<Eigen::Infinity>();
      if (gn2 < gn) {
        t = t_try;
        v = v2;
        gn = gn2;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) return false;
    for (int m = 0; m < k; ++m)
      if (std::abs(t[free[m]]) > kEscapeBound) return false;
  }
  return false;
}

// Multistart Newton over one face; appends deduplicated roots strictly inside
// the open face.
void face_roots(const ScalarField& f, const FaceDescriptor& face,
                const MorseConfig& cfg, std::vector<Root>& out) {
  const int d = f.dim();
  const int k = face.dim;
  const auto& free = face.free_coords;
  const int n = cfg.seeds_per_axis;

  Vec base(d);
  for (int j = 0; j < d; ++j) base[j] = face.sign[j];

  Vec grad(d);
  Mat hess(d, d);

  long total_seeds = 1;
  for (int m = 0; m < k; ++m) total_seeds *= n;

  std::vector<int> idx(static_cast<size_t>(k), 0);
  for (long seed = 0; seed < total_seeds; ++seed) {
    Vec t = base;
    for (int m = 0; m < k; ++m)
      t[free[m]] = -1.0 + 2.0 * (idx[static_cast<size_t>(m)] + 0.5) / n;

    double value;
    if (newton_on_face(f, face, cfg, t, value, grad, hess)) {
      bool inside = true;
      for (int m = 0; m < k; ++m)
        if (std::abs(t[free[m]]) > 1.0 - cfg.boundary_tol) {
          inside = false;
          break;
        }
      if (inside) {
        bool duplicate = false;
        for (const auto& r : out)
          if ((r.t - t).norm() < cfg.dedup_radius) {
            duplicate = true;
            break;
          }
        if (!duplicate) out.push_back({t, value});
      }
    }

    // advance the seed multi-index
    for (int m = 0; m < k; ++m) {
      if (++idx[static_cast<size_t>(m)] < n) break;
      idx[static_cast<size_t>(m)] = 0;
    }
  }
}

}  // namespace

std::map<std::pair<int, int>, int> CriticalSet::counts() const {
  std::map<std::pair<int, int>, int> c;
  for (const auto& p : points) ++c[{p.face_id, p.index}];
  return c;
}

double CriticalSet::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::max(m, p.value);
  return m;
}

double CriticalSet::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::min(m, p.value);
  return m;
}

CriticalSet find_critical_points(const ScalarField& f, const CubeStrata& strata,
                                 const MorseConfig& cfg) {
  if (f.dim() != strata.dim())
    throw ValidationError("find_critical_points: field/strata dimension mismatch");
  const int d = strata.dim();

  CriticalSet cs;
  Vec grad(d);
  Mat hess(d, d);
  std::vector<Root> roots;

  for (const auto& face : strata.faces()) {
    if (face.dim == 0) {
      CriticalPoint p;
      p.location = face.center(d);
      p.face_id = face.face_id;
      p.face_dim = 0;
      p.index = 0;
      p.value = f.value(p.location);
      p.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
      cs.points.push_back(std::move(p));
      continue;
    }

    roots.clear();
    face_roots(f, face, cfg, roots);

    const int k = face.dim;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim> Hs(k, k);
    for (const auto& r : roots) {
      f.hessian(r.t, hess);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          Hs(a, b) = hess(face.free_coords[a], face.free_coords[b]);

      Eigen::SelfAdjointEigenSolver<
          Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>>
          es(Hs, Eigen::EigenvaluesOnly);
      const auto& ev = es.eigenvalues();

      double min_abs = std::numeric_limits<double>::infinity();
      int index = 0;
      for (int a = 0; a < k; ++a) {
        min_abs = std::min(min_abs, std::abs(ev[a]));
        if (ev[a] < 0.0) ++index;
      }

      if (min_abs <= cfg.degeneracy_tol) {
        if (cfg.drop_null_level_roots && std::abs(r.value) <= cfg.null_level_tol)
          continue;  // null-level critical manifold: invisible to f_+/f_-
        throw DegenerateCritical("degenerate restricted Hessian (min |eig| = " +
                                 std::to_string(min_abs) + ") at " +
                                 describe_point(face, r.t, r.value));
      }

      CriticalPoint p;
      p.location = r.t;
      p.face_id = face.face_id;
      p.face_dim = k;
      p.index = index;
      p.value = r.value;
      p.min_abs_eigenvalue = min_abs;
      cs.points.push_back(std::move(p));
    }
  }

  std::sort(cs.points.begin(), cs.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              if (a.face_id != b.face_id) return a.face_id < b.face_id;
              if (a.value != b.value) return a.value > b.value;
              return a.index < b.index;
            });
  return cs;
}

void mark_extended_outward(CriticalSet& cs, const ScalarField& f,
                           const MorseConfig& cfg) {
  const int d = f.dim();
  Vec grad(d);
  std::vector<size_t> null_ties;

  for (size_t i = 0; i < cs.points.size(); ++i) {
    auto& p = cs.points[i];
    p.extended_outward = true;
    p.extended_outward_negated = true;
    if (p.face_dim == d) continue;  // interior: no fixed coordinates

    f.gradient(p.location, grad);
    // Recover the fixed-coordinate signs from the location itself: fixed
    // coordinates sit exactly at -1/+1 by construction.
    bool tie = false;
    for (int j = 0; j < d; ++j) {
      if (std::abs(p.location[j]) != 1.0) continue;
      const double outward = p.location[j] * grad[j];
      if (std::abs(grad[j]) <= cfg.grad_tol) {
        tie = true;
        break;
      }
      if (outward < 0.0) p.extended_outward = false;
      if (outward > 0.0) p.extended_outward_negated = false;
    }
    if (tie) {
      if (cfg.drop_null_level_roots && std::abs(p.value) <= cfg.null_level_tol) {
        null_ties.push_back(i);
        continue;
      }
      throw DegenerateCritical(
          "extended-outward test tied (boundary derivative within grad_tol) at face " +
          std::to_string(p.face_id) + ", value " + std::to_string(p.value));
    }
  }

  for (auto it = null_ties.rbegin(); it != null_ties.rend(); ++it)
    cs.points.erase(cs.points.begin() + static_cast<long>(*it));
  cs.outward_marked = true;
}

CriticalSet filter_above(const CriticalSet& cs, double level) {
  CriticalSet out;
  out.outward_marked = cs.outward_marked;
  for (const auto& p : cs.points)
    if (p.value > level) out.points.push_back(p);
  return out;
}

CriticalSet negate(const CriticalSet& cs) {
  CriticalSet out;
  out.outward_marked = cs.outward_marked;
  out.points.reserve(cs.points.size());
  for (const auto& p : cs.points) {
    CriticalPoint q = p;
    q.value = -p.value;
    q.index = p.face_dim - p.index;
    q.extended_outward = p.extended_outward_negated;
    q.extended_outward_negated = p.extended_outward;
    out.points.push_back(std::move(q));
  }
  return out;
}

long euler_characteristic_morse(const CriticalSet& cs, double level) {
  if (!cs.outward_marked)
    throw std::logic_error("euler_characteristic_morse: call mark_extended_outward first");
  long chi = 0;
  for (const auto& p : cs.points) {
    if (!(p.value > level) || !p.extended_outward) continue;
    chi += ((p.face_dim - p.index) % 2 == 0) ? 1 : -1;
  }
  return chi;
}

ExcursionStats excursion_stats(const CriticalSet& cs, double level) {
  ExcursionStats st;
  st.level = level;
  st.sup = cs.max_value();
  st.euler = euler_characteristic_morse(cs, level);
  for (const auto& p : cs.points)
    if (p.value > level) ++st.counts[{p.face_id, p.index}];
  return st;
}

SupResult field_extrema(const ScalarField& f, const CubeStrata& strata,
                        const MorseConfig& cfg) {
  if (f.dim() != strata.dim())
    throw ValidationError("field_extrema: field/strata dimension mismatch");
  const int d = strata.dim();

  SupResult res;
  res.sup = -std::numeric_limits<double>::infinity();
  res.inf = std::numeric_limits<double>::infinity();
  res.argmax = Vec::Zero(d);

  auto consider = [&](const Vec& t, double v) {
    if (v > res.sup) {
      res.sup = v;
      res.argmax = t;
    }
    res.inf = std::min(res.inf, v);
  };

  std::vector<Root> roots;
  for (const auto& face : strata.faces()) {
    if (face.dim == 0) {
      const Vec t = face.center(d);
      consider(t, f.value(t));
      continue;
    }
    roots.clear();
    face_roots(f, face, cfg, roots);
    for (const auto& r : roots) consider(r.t, r.value);
  }
  return res;
}

}  // namespace exgeo
