#include "exgeo/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace exgeo {

long SectionCatalog::count(int face_id, int index) const {
  const auto it = pos_order_stats.find({face_id, index});
  return it == pos_order_stats.end() ? 0 : static_cast<long>(it->second.size());
}

namespace {

double lookup(const std::map<std::pair<int, int>, std::vector<double>>& stats,
              double sup, int face_id, int index, long m) {
  if (m < 0) throw ValidationError("order statistic rank must be >= 0");
  if (m == 0) return sup;
  const auto it = stats.find({face_id, index});
  if (it == stats.end() || m > static_cast<long>(it->second.size())) return 0.0;
  return it->second[static_cast<size_t>(m - 1)];
}

}  // namespace

double SectionCatalog::order_stat_pos(int face_id, int index, long m) const {
  return lookup(pos_order_stats, sup_pos, face_id, index, m);
}

double SectionCatalog::order_stat_neg(int face_id, int index, long m) const {
  return lookup(neg_order_stats, sup_neg, face_id, index, m);
}

SectionCatalog build_catalog(const Kernel& kernel, const Vec& s,
                             const CubeStrata& strata, const MorseConfig& cfg) {
  if (s.size() != kernel.dim())
    throw ValidationError("build_catalog: shift dimension mismatch");

  SectionCatalog cat;
  cat.s = s;
  const SectionField section(kernel, s);
  cat.crit = find_critical_points(section, strata, cfg);
  mark_extended_outward(cat.crit, section, cfg);

  // The section attains its extrema at critical points (every vertex is one),
  // so the sups of the positive/negative parts come straight from the set.
  for (const auto& p : cat.crit.points) {
    cat.sup_pos = std::max(cat.sup_pos, p.value);
    cat.sup_neg = std::max(cat.sup_neg, -p.value);
    cat.pos_order_stats[{p.face_id, p.index}].push_back(std::max(p.value, 0.0));
    cat.neg_order_stats[{p.face_id, p.index}].push_back(std::max(-p.value, 0.0));
  }
  for (auto& [key, vals] : cat.pos_order_stats)
    std::sort(vals.begin(), vals.end(), std::greater<>());
  for (auto& [key, vals] : cat.neg_order_stats)
    std::sort(vals.begin(), vals.end(), std::greater<>());
  return cat;
}

}  // namespace exgeo
