#pragma once

#include <iosfwd>

#include "exgeo/config.hpp"

namespace exgeo {

// Command drivers behind the command-line tool.  Each one writes its tables
// (CSV with `# key: value` provenance comments) plus a JSON metadata file
// under cfg.out, and prints one summary line per major step to `log`.
// Outputs are byte-identical for identical configs regardless of the worker
// count.  Commands throw ValidationError for bad inputs and BudgetExhausted
// when an iteration cap or a quality floor is breached.

// Critical-point catalogs of kernel sections along a lattice of shifts (or
// the explicit shifts in cfg.s_values).
void cmd_catalog(const ExperimentConfig& cfg, std::ostream& log);

// Field realizations: one summary row per draw (atom count, extrema, and
// the excursion-set EC at each range fraction in cfg.ec_levels), plus
// optional grid dumps of the first cfg.n_dumps draws.
void cmd_simulate(const ExperimentConfig& cfg, std::ostream& log);

// High-level comparison: empirical conditional query frequencies from
// conditioned realizations at each level against the limit law evaluated by
// quadrature and by the limit sampler, plus the total-variation distance
// between the empirical and limit EC histograms.
void cmd_compare(const ExperimentConfig& cfg, std::ostream& log);

// Tail calibration: empirical P(sup > u) against the regular-variation
// scale, with the quadrature constant the ratio must stabilize to.
void cmd_tail(const ExperimentConfig& cfg, std::ostream& log);

// Limit EC distribution and mean EC-vs-level curve for each kernel family
// in cfg.kernels.
void cmd_ec_curve(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace exgeo
