#include "exgeo/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "exgeo/cube.hpp"
#include "exgeo/types.hpp"

namespace exgeo {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("config: bad numeric value for " + key + ": '" + v +
                          "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("config: bad integer value for " + key + ": '" + v +
                          "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    // stoull wraps negative input around instead of failing; reject it here
    if (v.find('-') != std::string::npos) throw std::invalid_argument(v);
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("config: bad seed value for " + key + ": '" + v +
                          "'");
  }
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  for (const auto& piece : split(v, ',')) {
    const std::string p = trim(piece);
    if (p.empty()) continue;
    out.push_back(parse_double(key, p));
  }
  return out;
}

std::vector<std::string> parse_string_list(const std::string& v) {
  std::vector<std::string> out;
  for (const auto& piece : split(v, ',')) {
    const std::string p = trim(piece);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(xs[i]);
  }
  return out;
}

std::string fmt_list(const std::vector<std::string>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += xs[i];
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) +
                            ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "dim")
      cfg.dim = static_cast<int>(parse_long(key, val));
    else if (key == "family")
      cfg.family = val;
    else if (key == "a")
      cfg.a = parse_double(key, val);
    else if (key == "theta")
      cfg.theta = parse_double_list(key, val);
    else if (key == "alpha")
      cfg.alpha = parse_double(key, val);
    else if (key == "x0")
      cfg.x0 = parse_double(key, val);
    else if (key == "variant")
      cfg.variant = val;
    else if (key == "threshold")
      cfg.threshold = parse_double(key, val);
    else if (key == "delta_cut")
      cfg.delta_cut = parse_double(key, val);
    else if (key == "levels")
      cfg.levels = parse_double_list(key, val);
    else if (key == "ec_levels")
      cfg.ec_levels = parse_double_list(key, val);
    else if (key == "n_realizations")
      cfg.n_realizations = parse_long(key, val);
    else if (key == "n_conditioned")
      cfg.n_conditioned = parse_long(key, val);
    else if (key == "n_limit_samples")
      cfg.n_limit_samples = parse_long(key, val);
    else if (key == "max_tries")
      cfg.max_tries = parse_long(key, val);
    else if (key == "acceptance_floor")
      cfg.acceptance_floor = parse_double(key, val);
    else if (key == "tail_tol")
      cfg.tail_tol = parse_double(key, val);
    else if (key == "queries")
      cfg.queries = val;
    else if (key == "kernels")
      cfg.kernels = parse_string_list(val);
    else if (key == "s_values")
      cfg.s_values = parse_double_list(key, val);
    else if (key == "quad_points")
      cfg.quad_points = static_cast<int>(parse_long(key, val));
    else if (key == "quad_rtol")
      cfg.quad_rtol = parse_double(key, val);
    else if (key == "quad_max_refine")
      cfg.quad_max_refine = static_cast<int>(parse_long(key, val));
    else if (key == "s_points")
      cfg.s_points = static_cast<int>(parse_long(key, val));
    else if (key == "dump_grid")
      cfg.dump_grid = static_cast<int>(parse_long(key, val));
    else if (key == "n_dumps")
      cfg.n_dumps = parse_long(key, val);
    else if (key == "seed")
      cfg.seed = parse_u64(key, val);
    else if (key == "workers")
      cfg.workers = static_cast<int>(parse_long(key, val));
    else if (key == "out")
      cfg.out = val;
    else
      throw ValidationError("config line " + std::to_string(lineno) +
                            ": unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.dim < 1 || cfg.dim > kMaxDim)
    throw ValidationError("config: dim must be in 1.." +
                          std::to_string(kMaxDim));
  if (cfg.family != "gaussian" && cfg.family != "oscillating")
    throw ValidationError("config: unknown kernel family '" + cfg.family + "'");
  if (cfg.family == "oscillating" &&
      cfg.theta.size() != static_cast<size_t>(cfg.dim))
    throw ValidationError("config: oscillating kernels need dim theta entries");
  for (const auto& fam : cfg.kernels) {
    if (fam != "gaussian" && fam != "oscillating")
      throw ValidationError("config: unknown kernel family '" + fam +
                            "' in kernels");
    if (fam == "oscillating" &&
        cfg.theta.size() != static_cast<size_t>(cfg.dim))
      throw ValidationError(
          "config: oscillating kernels need dim theta entries");
  }
  if (cfg.variant != "pareto" && cfg.variant != "typeG")
    throw ValidationError("config: variant must be pareto or typeG");
  if (!(cfg.a > 0.0)) throw ValidationError("config: a must be positive");
  if (!(cfg.alpha > 0.0))
    throw ValidationError("config: alpha must be positive");
  if (!(cfg.x0 > 0.0)) throw ValidationError("config: x0 must be positive");
  if (cfg.threshold < 0.0)
    throw ValidationError("config: threshold must be >= 0");
  if (!(cfg.delta_cut > 0.0 && cfg.delta_cut < 1.0))
    throw ValidationError("config: delta_cut must be in (0, 1)");
  for (double u : cfg.levels)
    if (!(u > 0.0)) throw ValidationError("config: levels must be positive");
  for (double v : cfg.ec_levels)
    if (!(v > 0.0 && v <= 1.0))
      throw ValidationError("config: ec_levels must lie in (0, 1]");
  if (cfg.n_realizations < 0 || cfg.n_conditioned < 0 ||
      cfg.n_limit_samples < 0 || cfg.n_dumps < 0)
    throw ValidationError("config: sample counts must be >= 0");
  if (cfg.max_tries < 1)
    throw ValidationError("config: max_tries must be >= 1");
  if (!(cfg.acceptance_floor >= 0.0 && cfg.acceptance_floor <= 1.0))
    throw ValidationError("config: acceptance_floor must be in [0, 1]");
  if (!(cfg.tail_tol > 0.0))
    throw ValidationError("config: tail_tol must be positive");
  if (cfg.quad_points < 0)
    throw ValidationError("config: quad_points must be >= 0");
  if (!(cfg.quad_rtol > 0.0))
    throw ValidationError("config: quad_rtol must be positive");
  if (cfg.quad_max_refine < 0)
    throw ValidationError("config: quad_max_refine must be >= 0");
  if (cfg.s_points < 2) throw ValidationError("config: s_points must be >= 2");
  if (cfg.dump_grid < 2)
    throw ValidationError("config: dump_grid must be >= 2");
  if (cfg.workers < 0) throw ValidationError("config: workers must be >= 0");
  if (cfg.out.empty()) throw ValidationError("config: out must be nonempty");
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["dim"] = std::to_string(cfg.dim);
  kv["family"] = cfg.family;
  kv["a"] = fmt_double(cfg.a);
  kv["theta"] = fmt_list(cfg.theta);
  kv["alpha"] = fmt_double(cfg.alpha);
  kv["x0"] = fmt_double(cfg.x0);
  kv["variant"] = cfg.variant;
  kv["threshold"] = fmt_double(cfg.threshold);
  kv["delta_cut"] = fmt_double(cfg.delta_cut);
  kv["levels"] = fmt_list(cfg.levels);
  kv["ec_levels"] = fmt_list(cfg.ec_levels);
  kv["n_realizations"] = std::to_string(cfg.n_realizations);
  kv["n_conditioned"] = std::to_string(cfg.n_conditioned);
  kv["n_limit_samples"] = std::to_string(cfg.n_limit_samples);
  kv["max_tries"] = std::to_string(cfg.max_tries);
  kv["acceptance_floor"] = fmt_double(cfg.acceptance_floor);
  kv["tail_tol"] = fmt_double(cfg.tail_tol);
  kv["queries"] = cfg.queries;
  kv["kernels"] = fmt_list(cfg.kernels);
  kv["s_values"] = fmt_list(cfg.s_values);
  kv["quad_points"] = std::to_string(cfg.quad_points);
  kv["quad_rtol"] = fmt_double(cfg.quad_rtol);
  kv["quad_max_refine"] = std::to_string(cfg.quad_max_refine);
  kv["s_points"] = std::to_string(cfg.s_points);
  kv["dump_grid"] = std::to_string(cfg.dump_grid);
  kv["n_dumps"] = std::to_string(cfg.n_dumps);
  // workers and out are execution knobs, not experiment identity: the same
  // experiment must hash identically whether it ran on 1 core or 8.
  kv["seed"] = cfg.seed ? std::to_string(*cfg.seed) : "unset";
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string s = canonical_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Kernel make_kernel(const ExperimentConfig& cfg) {
  return make_kernel(cfg, cfg.family);
}

Kernel make_kernel(const ExperimentConfig& cfg, const std::string& family) {
  if (family == "gaussian") return Kernel::gaussian_bump(cfg.dim, cfg.a);
  if (family == "oscillating") {
    if (cfg.theta.size() != static_cast<size_t>(cfg.dim))
      throw ValidationError("config: oscillating kernels need dim theta entries");
    Vec theta(cfg.dim);
    for (int j = 0; j < cfg.dim; ++j) theta[j] = cfg.theta[j];
    return Kernel::oscillating(cfg.dim, cfg.a, theta);
  }
  throw ValidationError("config: unknown kernel family '" + family + "'");
}

TailModel make_tail(const ExperimentConfig& cfg) {
  const TailVariant v =
      cfg.variant == "pareto" ? TailVariant::pareto : TailVariant::typeG;
  return TailModel(cfg.alpha, cfg.x0, v);
}

QuadratureConfig make_quadrature(const ExperimentConfig& cfg) {
  QuadratureConfig q;
  q.points_per_axis = cfg.quad_points;
  q.rtol = cfg.quad_rtol;
  q.max_refine = cfg.quad_max_refine;
  return q;
}

std::vector<std::string> split_query_labels(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& piece : split(text, ';')) {
    const std::string p = trim(piece);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::vector<LimitQuery> parse_queries(const std::string& text, int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw ValidationError("queries: dim out of range");
  std::vector<LimitQuery> out;
  for (const auto& label : split_query_labels(text)) {
    LimitQuery q;
    for (const auto& raw_atom : split(label, '&')) {
      const std::string atom = trim(raw_atom);
      const auto slash = atom.find('/');
      const auto ge = atom.find(">=");
      if (slash == std::string::npos || ge == std::string::npos || ge < slash)
        throw ValidationError("queries: expected FACE/INDEX>=COUNT, got '" +
                              atom + "'");
      const std::string face = trim(atom.substr(0, slash));
      const std::string idx = trim(atom.substr(slash + 1, ge - slash - 1));
      const std::string cnt = trim(atom.substr(ge + 2));
      if (face.size() != static_cast<size_t>(dim))
        throw ValidationError("queries: face '" + face + "' must have " +
                              std::to_string(dim) + " characters");
      std::array<int8_t, kMaxDim> sign{};
      for (int j = 0; j < dim; ++j) {
        const char c = face[static_cast<size_t>(j)];
        if (c == '*')
          sign[static_cast<size_t>(j)] = 0;
        else if (c == '+')
          sign[static_cast<size_t>(j)] = 1;
        else if (c == '-')
          sign[static_cast<size_t>(j)] = -1;
        else
          throw ValidationError(
              "queries: face characters must be one of * + -, got '" +
              std::string(1, c) + "'");
      }
      QueryAtom qa;
      qa.face_id = CubeStrata::encode(sign, dim);
      qa.index = static_cast<int>(parse_long("query index", idx));
      qa.n = parse_long("query count", cnt);
      q.atoms.push_back(qa);
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace exgeo
