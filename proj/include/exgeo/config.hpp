#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exgeo/kernel.hpp"
#include "exgeo/levy.hpp"
#include "exgeo/limit.hpp"
#include "exgeo/quadrature.hpp"

namespace exgeo {

// Flat key=value experiment configuration.  Unknown keys are rejected so a
// typo cannot silently fall back to a default.  `seed` has no default: every
// command requires one, either from the file or from the command line.
struct ExperimentConfig {
  int dim = 1;
  std::string family = "gaussian";  // gaussian | oscillating
  double a = 1.0;                   // kernel decay rate
  std::vector<double> theta;        // oscillation frequencies (dim entries)
  double alpha = 2.0;               // tail exponent
  double x0 = 1.0;                  // tail scale
  std::string variant = "pareto";   // pareto | typeG
  double threshold = 0.0;           // atom magnitude floor (0 = keep all)
  double delta_cut = 1e-8;          // kernel support cutoff for the window

  std::vector<double> levels = {10.0, 20.0, 40.0};  // excursion levels u
  // Normalized levels in (0, 1]; the curve grid for ec-curve, and the
  // per-realization range fractions at which `simulate` reports the EC.
  std::vector<double> ec_levels = {0.1, 0.2, 0.3, 0.4, 0.5,
                                   0.6, 0.7, 0.8, 0.9};

  long n_realizations = 10000;   // simulate / tail sample size
  long n_conditioned = 2000;     // compare: conditioned draws per level
  long n_limit_samples = 10000;  // limit-sampler draws
  long max_tries = 2000000;      // conditioning attempts per draw
  double acceptance_floor = 1e-3;  // tolerated fraction of discarded draws
  double tail_tol = 0.15;        // ratio drift allowance at the largest u

  std::string queries;                          // see parse_queries
  std::vector<std::string> kernels = {"gaussian"};  // ec-curve families
  std::vector<double> s_values;  // catalog shifts; empty = lattice

  int quad_points = 0;  // quadrature scan points per axis (0 = default)
  double quad_rtol = 1e-4;
  int quad_max_refine = 3;

  int s_points = 101;  // catalog lattice size
  int dump_grid = 33;  // lattice for realization dumps
  long n_dumps = 0;    // realizations to dump as grids

  std::optional<std::uint64_t> seed;
  int workers = 1;  // 0 = hardware concurrency
  std::string out = "out";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

// Canonical flat rendering: one sorted key=value line per field, doubles at
// full precision.  Equal configs render identically, so the FNV-1a hash of
// this string is a stable fingerprint for output provenance.
std::string canonical_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

Kernel make_kernel(const ExperimentConfig& cfg);
Kernel make_kernel(const ExperimentConfig& cfg, const std::string& family);
TailModel make_tail(const ExperimentConfig& cfg);
QuadratureConfig make_quadrature(const ExperimentConfig& cfg);

// Query grammar: queries are ';'-separated, atoms within one query are
// '&'-joined.  An atom reads FACE/INDEX>=COUNT where FACE spells the face
// with one character per coordinate: '*' free, '+' fixed at +1, '-' fixed
// at -1.  Example (dim 1): "*/1>=1&+/0>=1" asks for an interior index-1
// point and a +1-vertex point above the level simultaneously.
std::vector<LimitQuery> parse_queries(const std::string& text, int dim);
// The same split, but returning the trimmed per-query source text (row
// labels for result tables).
std::vector<std::string> split_query_labels(const std::string& text);

}  // namespace exgeo
