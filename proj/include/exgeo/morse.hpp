#pragma once

#include <map>
#include <utility>
#include <vector>

#include "exgeo/cube.hpp"
#include "exgeo/kernel.hpp"

// Critical point analysis of a C^2 field on the stratified cube M = [-1,1]^d.
//
// For each face J the restriction f|J is a function of J's free coordinates;
// its critical points are the zeros of the restricted gradient, found by
// damped Newton iteration from a tensor grid of seeds.  Each converged root
// strictly inside the open face is classified by the eigenvalues of the
// restricted Hessian: the index is the number of negative eigenvalues, and an
// eigenvalue indistinguishable from zero makes the point degenerate.
// Vertices are critical by convention (index 0, infinite min-eigenvalue).
//
// A critical point is "extended outward" when every fixed coordinate j of its
// face satisfies sign_j * df/dt_j > 0 (vacuous for interior points).  The
// Euler characteristic of the excursion set {f >= u} is the alternating sum
// of (-1)^(face_dim - index) over extended-outward critical points with value
// above u; this is validated elsewhere against a cubical-complex computation
// that shares no code with this module.

namespace exgeo {

struct MorseConfig {
  double grad_tol = 1e-10;       // restricted-gradient norm at convergence;
                                 // also the tie tolerance for outward marking
  double degeneracy_tol = 1e-8;  // min |eigenvalue| below this => degenerate
  double dedup_radius = 1e-6;    // Newton roots closer than this (same face)
                                 // are the same critical point
  double boundary_tol = 1e-9;    // roots must clear the face boundary by this
  int seeds_per_axis = 9;
  int max_newton_iter = 50;

  // Opt-in for positive/negative-part catalogs: a converged root that is
  // degenerate AND sits at |value| <= null_level_tol is silently dropped
  // instead of raising DegenerateCritical.  Kernels like the oscillating
  // family have a whole critical manifold at value exactly 0; it carries no
  // mass for any functional of f_+ / f_- and must not poison the catalog.
  bool drop_null_level_roots = false;
  double null_level_tol = 0.0;
};

struct CriticalPoint {
  Vec location;
  int face_id = 0;
  int face_dim = 0;
  int index = 0;                      // negative eigenvalues of restricted Hessian
  double value = 0.0;
  double min_abs_eigenvalue = 0.0;    // +inf for vertices
  bool extended_outward = false;      // for f
  bool extended_outward_negated = false;  // for -f (index there is dim-index)
};

struct CriticalSet {
  std::vector<CriticalPoint> points;
  bool outward_marked = false;

  // Number of critical points per (face_id, index).
  std::map<std::pair<int, int>, int> counts() const;
  double max_value() const;  // -inf when empty
  double min_value() const;  // +inf when empty
};

// Per-realization excursion summary at one level.
struct ExcursionStats {
  std::map<std::pair<int, int>, int> counts;  // (face_id, index) -> N above level
  long euler = 0;
  double sup = 0.0;
  double level = 0.0;
};

// All critical points of f on the strata of M.  Throws DegenerateCritical on
// a degenerate restricted Hessian (unless the null-level opt-in applies).
// Points come back sorted by (face_id, descending value) and are not yet
// outward-marked.
CriticalSet find_critical_points(const ScalarField& f, const CubeStrata& strata,
                                 const MorseConfig& cfg = {});

// Fills the extended-outward flags (one gradient evaluation per point).
// A fixed-coordinate derivative within grad_tol of zero is an undecidable
// tie: DegenerateCritical, except under the null-level opt-in where the
// offending null-value point is removed instead.
void mark_extended_outward(CriticalSet& cs, const ScalarField& f,
                           const MorseConfig& cfg = {});

// Critical points with value strictly above the level (flags preserved).
CriticalSet filter_above(const CriticalSet& cs, double level);

// Critical data of -f derived from that of f: values negate, index becomes
// face_dim - index, the two outward flags swap.
CriticalSet negate(const CriticalSet& cs);

// Alternating sum over extended-outward points above the level.
// Requires outward_marked.
long euler_characteristic_morse(const CriticalSet& cs, double level);

// Counts + EC + sup at one level, from a marked critical set.
ExcursionStats excursion_stats(const CriticalSet& cs, double level);

// Global extrema of f over M: max over critical values and vertex values.
// Runs the same multistart Newton but skips classification entirely, so it
// cannot raise DegenerateCritical (a supremum does not care about index).
struct SupResult {
  double sup = 0.0;
  double inf = 0.0;
  Vec argmax;
  double abs_sup() const { return std::max(std::abs(sup), std::abs(inf)); }
};
SupResult field_extrema(const ScalarField& f, const CubeStrata& strata,
                        const MorseConfig& cfg = {});

}  // namespace exgeo
