#pragma once

#include <map>
#include <utility>
#include <vector>

#include "exgeo/cube.hpp"
#include "exgeo/kernel.hpp"
#include "exgeo/morse.hpp"

// Order-statistic catalog of one kernel section t -> g(s + t) on the cube.
//
// For every (face, index) class the catalog keeps the positive and negative
// parts of the critical values, sorted descending, together with the global
// sups of the positive and negative parts.  The m-th entry of such a list is
// the m-th largest positive (negative) part among that class's critical
// points; m beyond the class count means 0, and m = 0 means the global sup of
// the matching part regardless of class.  These are exactly the ingredients
// the limit-law evaluator consumes.

namespace exgeo {

struct SectionCatalog {
  Vec s;
  CriticalSet crit;      // extended-outward marked
  double sup_pos = 0.0;  // sup over the cube of max(f, 0)
  double sup_neg = 0.0;  // sup over the cube of max(-f, 0)
  std::map<std::pair<int, int>, std::vector<double>> pos_order_stats;
  std::map<std::pair<int, int>, std::vector<double>> neg_order_stats;

  // Critical points of the given (face_id, index) class.
  long count(int face_id, int index) const;

  // m-th largest positive/negative part within the class; 0 beyond the
  // count, global sup of the matching part at m = 0.
  double order_stat_pos(int face_id, int index, long m) const;
  double order_stat_neg(int face_id, int index, long m) const;
};

SectionCatalog build_catalog(const Kernel& kernel, const Vec& s,
                             const CubeStrata& strata,
                             const MorseConfig& cfg = {});

}  // namespace exgeo
