#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "exgeo/config.hpp"
#include "exgeo/experiments.hpp"

using namespace exgeo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("exgeo_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json slurp_json(const std::string& path) { return json::parse(slurp(path)); }

// Data lines of a CSV file: everything after the '#' preamble and the header.
struct Csv {
  std::string header;
  std::vector<std::vector<std::string>> rows;
};

Csv read_csv(const std::string& path) {
  Csv out;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (out.header.empty()) {
      out.header = line;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.rows.push_back(std::move(cells));
  }
  return out;
}

std::string hash_hex(const ExperimentConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

}  // namespace

TEST_CASE("catalog command: explicit shifts, exact schema, reproducible bytes") {
  ExperimentConfig cfg;
  cfg.seed = 11;
  cfg.s_values = {-0.3, 2.0};
  cfg.out = fresh_dir("catalog_a");
  std::ostringstream log;
  cmd_catalog(cfg, log);

  const Csv csv = read_csv(cfg.out + "/catalog.csv");
  CHECK(csv.header == "s,face_id,index,m,value_pos,value_neg,sup_pos,sup_neg");
  // the near shift resolves vertex-, vertex+ and the interior peak; the far
  // shift keeps only the two vertices
  REQUIRE(csv.rows.size() == 5);
  bool saw_peak = false;
  for (const auto& r : csv.rows) {
    REQUIRE(r.size() == 8);
    if (r[0] == "-0.3" && r[1] == "2") {
      saw_peak = true;
      CHECK(std::stod(r[2]) == 1);                         // index
      CHECK(std::stod(r[4]) == doctest::Approx(1.0));      // value_pos
      CHECK(std::stod(r[5]) == 0.0);                       // value_neg
      CHECK(std::stod(r[6]) == doctest::Approx(1.0));      // sup_pos
      CHECK(std::stod(r[7]) == 0.0);                       // sup_neg
    }
  }
  CHECK(saw_peak);

  const json meta = slurp_json(cfg.out + "/catalog_meta.json");
  CHECK(meta.at("format_version") == 1);
  CHECK(meta.at("command") == "catalog");
  CHECK(meta.at("config_hash") == hash_hex(cfg));
  CHECK(meta.at("seed") == 11);
  CHECK(meta.at("rows") == 5);
  CHECK(meta.at("shifts") == 2);
  CHECK_FALSE(meta.contains("workers"));

  // a second run reproduces both files byte for byte
  const std::string csv_a = slurp(cfg.out + "/catalog.csv");
  const std::string meta_a = slurp(cfg.out + "/catalog_meta.json");
  ExperimentConfig cfg2 = cfg;
  cfg2.out = fresh_dir("catalog_b");
  std::ostringstream log2;
  cmd_catalog(cfg2, log2);
  CHECK(slurp(cfg2.out + "/catalog.csv") == csv_a);
  CHECK(slurp(cfg2.out + "/catalog_meta.json") == meta_a);
}

TEST_CASE("catalog command: lattice default and window guard") {
  ExperimentConfig cfg;
  cfg.seed = 1;
  cfg.s_points = 101;
  cfg.out = fresh_dir("catalog_lattice");
  std::ostringstream log;
  cmd_catalog(cfg, log);
  const Csv csv = read_csv(cfg.out + "/catalog.csv");
  CHECK(csv.rows.size() >= 101);  // at least the vertex classes everywhere

  ExperimentConfig bad = cfg;
  bad.s_values = {100.0};
  bad.out = fresh_dir("catalog_bad");
  std::ostringstream log2;
  CHECK_THROWS_AS(cmd_catalog(bad, log2), ValidationError);

  ExperimentConfig unseeded;
  unseeded.out = fresh_dir("catalog_unseeded");
  std::ostringstream log3;
  CHECK_THROWS_AS(cmd_catalog(unseeded, log3), ValidationError);
}

TEST_CASE("simulate command: per-realization rows plus grid dumps") {
  ExperimentConfig cfg;
  cfg.seed = 21;
  cfg.n_realizations = 40;
  cfg.ec_levels = {0.25, 0.75};
  cfg.n_dumps = 2;
  cfg.dump_grid = 9;
  cfg.out = fresh_dir("simulate");
  std::ostringstream log;
  cmd_simulate(cfg, log);

  const Csv csv = read_csv(cfg.out + "/realizations.csv");
  CHECK(csv.header == "i,n_atoms,sup,inf,ec_0,ec_1");
  REQUIRE(csv.rows.size() == 40);
  for (size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& r = csv.rows[i];
    REQUIRE(r.size() == 6);
    CHECK(std::stol(r[0]) == static_cast<long>(i));
    CHECK(std::stol(r[1]) >= 0);
    CHECK(std::stod(r[2]) >= std::stod(r[3]));  // sup >= inf
  }

  for (int i = 0; i < 2; ++i) {
    const Csv dump = read_csv(cfg.out + "/dump_" + std::to_string(i) + ".csv");
    CHECK(dump.header == "t0,value");
    CHECK(dump.rows.size() == 9);  // dump_grid nodes in one dimension
  }
  CHECK_FALSE(fs::exists(cfg.out + "/dump_2.csv"));

  const json meta = slurp_json(cfg.out + "/simulate_meta.json");
  CHECK(meta.at("command") == "simulate");
  CHECK(meta.at("n_realizations") == 40);
  // unthresholded intensity equals the window volume
  const double L = meta.at("window_half_extent").get<double>();
  CHECK(meta.at("intensity").get<double>() == doctest::Approx(2.0 * L));
}

TEST_CASE("compare command: schema, determinism across worker counts") {
  ExperimentConfig cfg;
  cfg.seed = 31;
  cfg.levels = {3.0};
  cfg.queries = "*/1>=1 ; +/0>=1";
  cfg.n_conditioned = 120;
  cfg.n_limit_samples = 400;
  cfg.out = fresh_dir("compare_w1");
  std::ostringstream log;
  cmd_compare(cfg, log);

  const Csv csv = read_csv(cfg.out + "/compare.csv");
  CHECK(csv.header ==
        "u,query_id,empirical_freq,empirical_se,limit_quadrature,"
        "limit_sampler_freq,tv_ec");
  REQUIRE(csv.rows.size() == 2);  // one level x two queries
  CHECK(csv.rows[0][1] == "*/1>=1");
  CHECK(csv.rows[1][1] == "+/0>=1");
  for (const auto& r : csv.rows) {
    const double emp = std::stod(r[2]);
    const double quad = std::stod(r[4]);
    const double samp = std::stod(r[5]);
    const double tv = std::stod(r[6]);
    CHECK(emp >= 0.0);
    CHECK(emp <= 1.0);
    CHECK(quad > 0.0);
    CHECK(quad < 1.0);
    CHECK(samp >= 0.0);
    CHECK(samp <= 1.0);
    CHECK(tv >= 0.0);
    CHECK(tv <= 1.0);
  }

  const json meta = slurp_json(cfg.out + "/compare_meta.json");
  CHECK(meta.at("command") == "compare");
  CHECK(meta.at("levels").size() == 1);
  CHECK(meta.at("quadrature").at("converged") == true);
  CHECK_FALSE(meta.contains("workers"));

  // more workers, same bytes
  ExperimentConfig cfg3 = cfg;
  cfg3.workers = 3;
  cfg3.out = fresh_dir("compare_w3");
  std::ostringstream log3;
  cmd_compare(cfg3, log3);
  CHECK(slurp(cfg3.out + "/compare.csv") == slurp(cfg.out + "/compare.csv"));
  CHECK(slurp(cfg3.out + "/compare_meta.json") ==
        slurp(cfg.out + "/compare_meta.json"));

  ExperimentConfig noq = cfg;
  noq.queries = "";
  noq.out = fresh_dir("compare_noq");
  std::ostringstream log4;
  CHECK_THROWS_AS(cmd_compare(noq, log4), ValidationError);
}

TEST_CASE("tail command: ratio table against the quadrature constant") {
  ExperimentConfig cfg;
  cfg.seed = 41;
  cfg.levels = {2.0, 4.0};
  cfg.n_realizations = 4000;
  cfg.tail_tol = 0.9;  // the small-sample drift is not under test here
  cfg.out = fresh_dir("tail");
  std::ostringstream log;
  cmd_tail(cfg, log);

  const Csv csv = read_csv(cfg.out + "/tail.csv");
  CHECK(csv.header == "u,empirical,se,scale_h,ratio,constant,deviation");
  REQUIRE(csv.rows.size() == 2);
  const double C = 2.0 + std::sqrt(M_PI / 2.0);
  for (const auto& r : csv.rows) {
    CHECK(std::stod(r[5]) == doctest::Approx(C).epsilon(1e-3));
    // scale_h = (u/x0)^-2 / 2
    const double u = std::stod(r[0]);
    CHECK(std::stod(r[3]) == doctest::Approx(0.5 * std::pow(u, -2.0)));
    // ratio = empirical / scale_h
    CHECK(std::stod(r[4]) ==
          doctest::Approx(std::stod(r[1]) / std::stod(r[3])).epsilon(1e-9));
  }

  // levels below the tail-scale domain are rejected
  ExperimentConfig bad = cfg;
  bad.levels = {0.5};
  bad.out = fresh_dir("tail_bad");
  std::ostringstream log2;
  CHECK_THROWS_AS(cmd_tail(bad, log2), ValidationError);

  // an unattainably tight allowance trips the budget error after writing
  ExperimentConfig tight = cfg;
  tight.tail_tol = 1e-6;
  tight.out = fresh_dir("tail_tight");
  std::ostringstream log3;
  CHECK_THROWS_AS(cmd_tail(tight, log3), BudgetExhausted);
  CHECK(fs::exists(tight.out + "/tail.csv"));
  CHECK(fs::exists(tight.out + "/tail_meta.json"));
}

TEST_CASE("ec-curve command: flat unimodal curve and clean histogram") {
  ExperimentConfig cfg;
  cfg.seed = 51;
  cfg.kernels = {"gaussian"};
  cfg.ec_levels = {0.25, 0.5};
  cfg.n_limit_samples = 300;
  cfg.out = fresh_dir("ec_curve");
  std::ostringstream log;
  cmd_ec_curve(cfg, log);

  const Csv curve = read_csv(cfg.out + "/ec_curve.csv");
  CHECK(curve.header == "kernel,level,mean_ec,se");
  REQUIRE(curve.rows.size() == 2);
  for (const auto& r : curve.rows) {
    CHECK(r[0] == "gaussian");
    CHECK(std::stod(r[2]) == 1.0);
    CHECK(std::stod(r[3]) == 0.0);
  }

  const Csv hist = read_csv(cfg.out + "/ec_hist.csv");
  CHECK(hist.header == "kernel,ec,count,freq");
  REQUIRE(hist.rows.size() == 1);
  CHECK(hist.rows[0][1] == "1");
  CHECK(std::stol(hist.rows[0][2]) == 300);
  CHECK(std::stod(hist.rows[0][3]) == 1.0);

  const json meta = slurp_json(cfg.out + "/ec_curve_meta.json");
  CHECK(meta.at("kernels").size() == 1);
  CHECK(meta.at("kernels")[0].at("mass_outside_1") == 0.0);

  ExperimentConfig bad = cfg;
  bad.kernels = {};
  bad.out = fresh_dir("ec_bad");
  std::ostringstream log2;
  CHECK_THROWS_AS(cmd_ec_curve(bad, log2), ValidationError);
}
