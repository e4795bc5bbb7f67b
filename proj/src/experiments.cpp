#include "exgeo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "exgeo/cube.hpp"
#include "exgeo/field.hpp"
#include "exgeo/morse.hpp"
#include "exgeo/parallel.hpp"

namespace exgeo {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t stream_tag(int cmd, int sub) {
  return (static_cast<std::uint64_t>(cmd) << 32) |
         static_cast<std::uint32_t>(sub);
}

constexpr int kCmdSimulate = 2;
constexpr int kCmdCompare = 3;
constexpr int kCmdTail = 4;
constexpr int kCmdEcCurve = 5;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::uint64_t require_seed(const ExperimentConfig& cfg) {
  if (!cfg.seed)
    throw ValidationError(
        "a seed is required: set seed= in the config or pass --seed");
  return *cfg.seed;
}

std::ofstream open_file(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  return f;
}

std::string hash_string(const ExperimentConfig& cfg) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

void csv_meta(std::ostream& f, const ExperimentConfig& cfg,
              const std::string& command) {
  f << "# format_version: 1\n";
  f << "# command: " << command << '\n';
  f << "# config_hash: " << hash_string(cfg) << '\n';
  f << "# seed: " << (cfg.seed ? std::to_string(*cfg.seed) : "unset") << '\n';
}

json config_json(const ExperimentConfig& cfg) {
  json j;
  std::istringstream lines(canonical_config(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    j[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return j;
}

json meta_base(const ExperimentConfig& cfg, const std::string& command) {
  json j;
  j["format_version"] = 1;
  j["command"] = command;
  j["config_hash"] = hash_string(cfg);
  j["seed"] = cfg.seed ? *cfg.seed : 0;
  j["config"] = config_json(cfg);
  return j;
}

json counters_json(const SampleCounters& c) {
  json j;
  j["proposals"] = c.proposals;
  j["cheap_rejects"] = c.cheap_rejects;
  j["degenerate_resamples"] = c.degenerate_resamples;
  j["v_resamples"] = c.v_resamples;
  return j;
}

json report_json(const QuadratureReport& r) {
  json j;
  j["nodes"] = r.nodes;
  j["refinements"] = r.refinements;
  j["rel_change"] = r.rel_change;
  j["truncation_bound"] = r.truncation_bound;
  j["converged"] = r.converged;
  return j;
}

void write_json(const std::string& dir, const std::string& name,
                const json& j) {
  auto f = open_file(dir, name);
  f << j.dump(2) << '\n';
}

// The catalog/evaluator configuration: degenerate roots pinned to the zero
// level are dropped rather than fatal, matching LimitEvaluator.
MorseConfig limit_style_morse(const Kernel& kernel) {
  MorseConfig m;
  m.drop_null_level_roots = true;
  m.null_level_tol = 1e-9 * kernel.sup_abs();
  return m;
}

double tv_distance(const std::map<long, long>& a, long na,
                   const std::map<long, long>& b, long nb) {
  if (na == 0 || nb == 0) return 1.0;
  double tv = 0.0;
  auto freq = [](const std::map<long, long>& h, long n, long k) {
    const auto it = h.find(k);
    return it == h.end() ? 0.0
                         : static_cast<double>(it->second) /
                               static_cast<double>(n);
  };
  std::map<long, long> keys;
  for (const auto& [k, v] : a) keys[k] = 1;
  for (const auto& [k, v] : b) keys[k] = 1;
  for (const auto& [k, v] : keys)
    tv += std::abs(freq(a, na, k) - freq(b, nb, k));
  return 0.5 * tv;
}

json histogram_json(const std::map<long, long>& h) {
  json j = json::object();
  for (const auto& [k, v] : h) j[std::to_string(k)] = v;
  return j;
}

}  // namespace

void cmd_catalog(const ExperimentConfig& cfg, std::ostream& log) {
  require_seed(cfg);
  const Kernel kernel = make_kernel(cfg);
  const SimWindow window = build_window(kernel, cfg.delta_cut);
  const CubeStrata strata(cfg.dim);
  const MorseConfig morse = limit_style_morse(kernel);

  std::vector<double> shifts;
  if (!cfg.s_values.empty()) {
    for (double s : cfg.s_values) {
      if (std::abs(s) > window.half_extent)
        throw ValidationError("catalog: shift " + fmt(s) +
                              " lies outside the simulation window (|s| <= " +
                              fmt(window.half_extent) + ")");
      shifts.push_back(s);
    }
  } else {
    const double L = window.half_extent;
    for (int i = 0; i < cfg.s_points; ++i)
      shifts.push_back(-L + 2.0 * L * i / (cfg.s_points - 1));
  }

  auto f = open_file(cfg.out, "catalog.csv");
  csv_meta(f, cfg, "catalog");
  f << "s,face_id,index,m,value_pos,value_neg,sup_pos,sup_neg\n";
  long rows = 0;
  Vec s = Vec::Zero(cfg.dim);
  for (double sv : shifts) {
    s[0] = sv;
    const SectionCatalog cat = build_catalog(kernel, s, strata, morse);
    for (const auto& [key, pos] : cat.pos_order_stats) {
      const auto [face_id, index] = key;
      for (long m = 1; m <= static_cast<long>(pos.size()); ++m) {
        f << fmt(sv) << ',' << face_id << ',' << index << ',' << m << ','
          << fmt(cat.order_stat_pos(face_id, index, m)) << ','
          << fmt(cat.order_stat_neg(face_id, index, m)) << ','
          << fmt(cat.sup_pos) << ',' << fmt(cat.sup_neg) << '\n';
        ++rows;
      }
    }
  }

  json meta = meta_base(cfg, "catalog");
  meta["shifts"] = shifts.size();
  meta["rows"] = rows;
  meta["window_half_extent"] = window.half_extent;
  write_json(cfg.out, "catalog_meta.json", meta);
  log << "catalog: " << rows << " rows over " << shifts.size()
      << " shifts -> " << cfg.out << "/catalog.csv\n";
}

void cmd_simulate(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = require_seed(cfg);
  const Kernel kernel = make_kernel(cfg);
  const TailModel tail = make_tail(cfg);
  const SimWindow window = build_window(kernel, cfg.delta_cut);
  const CubeStrata strata(cfg.dim);
  const MorseConfig morse;  // realizations keep strict degeneracy checks
  const FieldSimulator sim(kernel, tail, window, cfg.threshold, morse);

  const long n = cfg.n_realizations;
  const size_t nl = cfg.ec_levels.size();
  struct Row {
    long atoms = 0;
    double sup = 0.0, inf = 0.0;
    std::vector<long> ec;
    long discards = 0;
  };
  std::vector<Row> rows(n);
  std::vector<std::optional<FieldRealization>> dumps(
      std::min<long>(n, cfg.n_dumps));

  parallel_for(n, cfg.workers, [&](long i) {
    Rng rng(substream_seed(seed, stream_tag(kCmdSimulate, 0), i));
    Row& r = rows[i];
    for (int attempt = 0;; ++attempt) {
      FieldRealization field = sim.simulate(rng);
      r.atoms = static_cast<long>(field.atoms.size());
      r.ec.assign(nl, 0);
      if (r.atoms == 0) {
        r.sup = r.inf = 0.0;
      } else {
        try {
          CriticalSet crit = find_critical_points(field, strata, morse);
          mark_extended_outward(crit, field, morse);
          const SupResult ext = field_extrema(field, strata, morse);
          r.sup = ext.sup;
          r.inf = ext.inf;
          for (size_t k = 0; k < nl; ++k) {
            const double u = ext.inf + cfg.ec_levels[k] * (ext.sup - ext.inf);
            r.ec[k] = euler_characteristic_morse(crit, u);
          }
        } catch (const DegenerateCritical&) {
          ++r.discards;
          if (attempt >= 64)
            throw BudgetExhausted(
                "simulate: persistent degenerate realizations");
          continue;
        }
      }
      if (i < static_cast<long>(dumps.size())) dumps[i] = std::move(field);
      break;
    }
  });

  auto f = open_file(cfg.out, "realizations.csv");
  csv_meta(f, cfg, "simulate");
  f << "i,n_atoms,sup,inf";
  for (size_t k = 0; k < nl; ++k) f << ",ec_" << k;
  f << '\n';
  long discards = 0;
  for (long i = 0; i < n; ++i) {
    const Row& r = rows[i];
    discards += r.discards;
    f << i << ',' << r.atoms << ',' << fmt(r.sup) << ',' << fmt(r.inf);
    for (size_t k = 0; k < nl; ++k) f << ',' << r.ec[k];
    f << '\n';
  }

  for (size_t i = 0; i < dumps.size(); ++i) {
    auto df = open_file(cfg.out, "dump_" + std::to_string(i) + ".csv");
    csv_meta(df, cfg, "simulate");
    for (int j = 0; j < cfg.dim; ++j) df << 't' << j << ',';
    df << "value\n";
    const int g = cfg.dump_grid;
    std::vector<int> idx(cfg.dim, 0);
    Vec t(cfg.dim);
    for (;;) {
      for (int j = 0; j < cfg.dim; ++j) {
        t[j] = -1.0 + 2.0 * idx[j] / (g - 1);
        df << fmt(t[j]) << ',';
      }
      df << fmt(dumps[i]->value(t)) << '\n';
      int j = 0;
      while (j < cfg.dim && ++idx[j] == g) idx[j++] = 0;
      if (j == cfg.dim) break;
    }
  }

  json meta = meta_base(cfg, "simulate");
  meta["n_realizations"] = n;
  meta["discards"] = discards;
  meta["window_half_extent"] = window.half_extent;
  meta["intensity"] = sim.intensity(make_quadrature(cfg));
  write_json(cfg.out, "simulate_meta.json", meta);
  log << "simulate: " << n << " realizations (" << discards
      << " degenerate redraws) -> " << cfg.out << "/realizations.csv\n";
}

void cmd_compare(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = require_seed(cfg);
  const std::vector<LimitQuery> queries = parse_queries(cfg.queries, cfg.dim);
  const std::vector<std::string> labels = split_query_labels(cfg.queries);
  if (queries.empty())
    throw ValidationError("compare: at least one query is required");
  if (cfg.levels.empty())
    throw ValidationError("compare: at least one level is required");

  const Kernel kernel = make_kernel(cfg);
  const TailModel tail = make_tail(cfg);
  const LimitEvaluator ev(kernel, tail, make_quadrature(cfg), MorseConfig{},
                          cfg.delta_cut);
  const std::vector<double> limit_probs = ev.probabilities(queries);
  const QuadratureReport quad_report = ev.report();
  log << "compare: quadrature over " << quad_report.nodes << " catalog nodes\n";

  SampleCounters samp_cnt;
  const std::vector<LimitSample> batch = ev.sample_batch(
      cfg.n_limit_samples, seed, stream_tag(kCmdCompare, 1), cfg.workers,
      &samp_cnt);
  std::vector<double> limit_freqs(queries.size(), 0.0);
  std::map<long, long> hist_lim;
  for (const auto& smp : batch) {
    for (size_t k = 0; k < queries.size(); ++k)
      limit_freqs[k] += query_satisfied(smp.stats, queries[k]) ? 1.0 : 0.0;
    ++hist_lim[smp.stats.euler];
  }
  for (double& fq : limit_freqs) fq /= static_cast<double>(batch.size());
  log << "compare: " << batch.size() << " limit-sampler draws\n";

  const CubeStrata strata(cfg.dim);
  const MorseConfig morse;
  const FieldSimulator sim(kernel, tail, ev.window(), cfg.threshold, morse);

  struct Slot {
    std::vector<std::uint8_t> hit;
    long ec = 0;
    long tries = 0;
    long discards = 0;
  };

  auto f = open_file(cfg.out, "compare.csv");
  csv_meta(f, cfg, "compare");
  f << "u,query_id,empirical_freq,empirical_se,limit_quadrature,"
       "limit_sampler_freq,tv_ec\n";

  json per_level = json::array();
  long total_discards = 0;
  const long nc = cfg.n_conditioned;
  for (size_t ui = 0; ui < cfg.levels.size(); ++ui) {
    const double u = cfg.levels[ui];
    std::vector<Slot> slots(nc);
    parallel_for(nc, cfg.workers, [&](long i) {
      Rng rng(substream_seed(seed,
                             stream_tag(kCmdCompare, 16 + static_cast<int>(ui)),
                             i));
      Slot& sl = slots[i];
      sl.hit.assign(queries.size(), 0);
      for (int attempt = 0;; ++attempt) {
        const auto cond = sim.conditioned_realization(u, rng, cfg.max_tries);
        sl.tries += cond.tries;
        try {
          CriticalSet crit = find_critical_points(cond.field, strata, morse);
          mark_extended_outward(crit, cond.field, morse);
          const ExcursionStats st = excursion_stats(crit, u);
          for (size_t k = 0; k < queries.size(); ++k)
            sl.hit[k] = query_satisfied(st, queries[k]) ? 1 : 0;
          sl.ec = st.euler;
          return;
        } catch (const DegenerateCritical&) {
          ++sl.discards;
          if (attempt >= 64)
            throw BudgetExhausted(
                "compare: persistent degenerate conditioned realizations");
        }
      }
    });

    std::map<long, long> hist_emp;
    std::vector<double> emp(queries.size(), 0.0);
    long tries = 0, discards = 0;
    for (const Slot& sl : slots) {
      for (size_t k = 0; k < queries.size(); ++k) emp[k] += sl.hit[k];
      ++hist_emp[sl.ec];
      tries += sl.tries;
      discards += sl.discards;
    }
    total_discards += discards;
    const double tv =
        tv_distance(hist_emp, nc, hist_lim, static_cast<long>(batch.size()));
    json jl;
    jl["u"] = u;
    jl["n_conditioned"] = nc;
    jl["total_tries"] = tries;
    jl["discards"] = discards;
    jl["tv_ec"] = tv;
    jl["ec_histogram"] = histogram_json(hist_emp);
    per_level.push_back(jl);

    for (size_t k = 0; k < queries.size(); ++k) {
      const double freq = emp[k] / static_cast<double>(nc);
      const double se =
          std::sqrt(std::max(freq * (1.0 - freq), 1e-12) / nc);
      f << fmt(u) << ',' << labels[k] << ',' << fmt(freq) << ',' << fmt(se)
        << ',' << fmt(limit_probs[k]) << ',' << fmt(limit_freqs[k]) << ','
        << fmt(tv) << '\n';
    }
    log << "compare: u=" << fmt(u) << " done (" << tries << " tries, "
        << discards << " discards, tv_ec=" << fmt(tv) << ")\n";
  }

  json meta = meta_base(cfg, "compare");
  meta["levels"] = per_level;
  meta["limit_sampler"] = counters_json(samp_cnt);
  meta["limit_ec_histogram"] = histogram_json(hist_lim);
  meta["quadrature"] = report_json(quad_report);
  meta["total_discards"] = total_discards;
  write_json(cfg.out, "compare_meta.json", meta);

  const double total_draws =
      static_cast<double>(nc) * static_cast<double>(cfg.levels.size());
  const double discard_frac =
      total_discards / std::max(1.0, total_draws + total_discards);
  if (discard_frac > cfg.acceptance_floor)
    throw BudgetExhausted("compare: discard fraction " + fmt(discard_frac) +
                          " exceeds acceptance_floor " +
                          fmt(cfg.acceptance_floor));
}

void cmd_tail(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.levels.empty())
    throw ValidationError("tail: at least one level is required");
  for (double u : cfg.levels)
    if (u < cfg.x0)
      throw ValidationError(
          "tail: levels must be >= x0 (the regular-variation scale is only "
          "defined there)");

  const Kernel kernel = make_kernel(cfg);
  const TailModel tail = make_tail(cfg);
  const LimitEvaluator ev(kernel, tail, make_quadrature(cfg), MorseConfig{},
                          cfg.delta_cut);
  const double constant = ev.denominator();
  const CubeStrata strata(cfg.dim);
  const MorseConfig morse;
  const FieldSimulator sim(kernel, tail, ev.window(), cfg.threshold, morse);

  const long n = cfg.n_realizations;
  std::vector<double> sups(n);
  parallel_for(n, cfg.workers, [&](long i) {
    Rng rng(substream_seed(seed, stream_tag(kCmdTail, 0), i));
    const FieldRealization field = sim.simulate(rng);
    sups[i] = field.atoms.empty()
                  ? 0.0
                  : field_extrema(field, strata, morse).sup;
  });

  std::vector<double> sorted_levels = cfg.levels;
  std::sort(sorted_levels.begin(), sorted_levels.end());

  auto f = open_file(cfg.out, "tail.csv");
  csv_meta(f, cfg, "tail");
  f << "u,empirical,se,scale_h,ratio,constant,deviation\n";
  double last_dev = 0.0;
  json rows = json::array();
  for (double u : sorted_levels) {
    long hits = 0;
    for (double s : sups) hits += s > u;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
    const double h = tail.scale_H(u);
    const double ratio = p / h;
    const double dev = std::abs(ratio / constant - 1.0);
    last_dev = dev;
    f << fmt(u) << ',' << fmt(p) << ',' << fmt(se) << ',' << fmt(h) << ','
      << fmt(ratio) << ',' << fmt(constant) << ',' << fmt(dev) << '\n';
    json jr;
    jr["u"] = u;
    jr["hits"] = hits;
    jr["ratio"] = ratio;
    jr["deviation"] = dev;
    rows.push_back(jr);
    log << "tail: u=" << fmt(u) << " ratio=" << fmt(ratio) << " (constant "
        << fmt(constant) << ", deviation " << fmt(dev) << ")\n";
  }

  json meta = meta_base(cfg, "tail");
  meta["n_realizations"] = n;
  meta["constant"] = constant;
  meta["rows"] = rows;
  meta["quadrature"] = report_json(ev.report());
  write_json(cfg.out, "tail_meta.json", meta);

  if (last_dev > cfg.tail_tol)
    throw BudgetExhausted("tail: ratio at the largest level deviates " +
                          fmt(last_dev) + " from the quadrature constant "
                          "(allowance " + fmt(cfg.tail_tol) + ")");
}

void cmd_ec_curve(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.kernels.empty())
    throw ValidationError("ec-curve: at least one kernel family is required");
  if (cfg.ec_levels.empty())
    throw ValidationError("ec-curve: at least one curve level is required");

  const TailModel tail = make_tail(cfg);
  auto fc = open_file(cfg.out, "ec_curve.csv");
  csv_meta(fc, cfg, "ec-curve");
  fc << "kernel,level,mean_ec,se\n";
  auto fh = open_file(cfg.out, "ec_hist.csv");
  csv_meta(fh, cfg, "ec-curve");
  fh << "kernel,ec,count,freq\n";

  json per_kernel = json::array();
  for (size_t k = 0; k < cfg.kernels.size(); ++k) {
    const std::string& fam = cfg.kernels[k];
    const Kernel kernel = make_kernel(cfg, fam);
    const LimitEvaluator ev(kernel, tail, make_quadrature(cfg), MorseConfig{},
                            cfg.delta_cut);
    const EcCurve curve =
        ev.ec_curve(cfg.ec_levels, cfg.n_limit_samples, seed,
                    stream_tag(kCmdEcCurve, static_cast<int>(k)), cfg.workers);
    for (size_t i = 0; i < curve.levels.size(); ++i)
      fc << fam << ',' << fmt(curve.levels[i]) << ',' << fmt(curve.mean[i])
         << ',' << fmt(curve.se[i]) << '\n';
    for (const auto& [ec, count] : curve.dist.histogram)
      fh << fam << ',' << ec << ',' << count << ','
         << fmt(static_cast<double>(count) /
                static_cast<double>(curve.dist.n))
         << '\n';
    json jk;
    jk["kernel"] = fam;
    jk["n"] = curve.dist.n;
    jk["mean_ec"] = curve.dist.mean;
    jk["mass_outside_1"] = curve.dist.mass_outside(1);
    jk["counters"] = counters_json(curve.dist.counters);
    jk["histogram"] = histogram_json(curve.dist.histogram);
    per_kernel.push_back(jk);
    log << "ec-curve: " << fam << " mean EC " << fmt(curve.dist.mean)
        << ", mass outside 1 " << fmt(curve.dist.mass_outside(1)) << '\n';
  }

  json meta = meta_base(cfg, "ec-curve");
  meta["kernels"] = per_kernel;
  write_json(cfg.out, "ec_curve_meta.json", meta);
}

}  // namespace exgeo
