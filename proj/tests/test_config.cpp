#include <doctest.h>

#include <string>

#include "exgeo/config.hpp"
#include "exgeo/cube.hpp"

using namespace exgeo;

TEST_CASE("empty text parses to the documented defaults") {
  const ExperimentConfig cfg = parse_config_text("");
  CHECK(cfg.dim == 1);
  CHECK(cfg.family == "gaussian");
  CHECK(cfg.alpha == 2.0);
  CHECK(cfg.x0 == 1.0);
  CHECK(cfg.variant == "pareto");
  CHECK(cfg.threshold == 0.0);
  CHECK(cfg.levels == std::vector<double>{10.0, 20.0, 40.0});
  CHECK(cfg.workers == 1);
  CHECK(cfg.out == "out");
  CHECK_FALSE(cfg.seed.has_value());
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("key=value lines, lists, comments and blank lines") {
  const ExperimentConfig cfg = parse_config_text(
      "# an experiment\n"
      "dim = 2\n"
      "family = oscillating\n"
      "theta = 6, 0\n"
      "\n"
      "alpha = 1.5\n"
      "variant = typeG\n"
      "levels = 5, 10, 20\n"
      "queries = **/2>=1 ; ++/0>=1\n"
      "kernels = gaussian, oscillating\n"
      "seed = 1234567\n"
      "workers = 0\n"
      "out = results/run1\n");
  CHECK(cfg.dim == 2);
  CHECK(cfg.family == "oscillating");
  REQUIRE(cfg.theta.size() == 2);
  CHECK(cfg.theta[0] == 6.0);
  CHECK(cfg.theta[1] == 0.0);
  CHECK(cfg.alpha == 1.5);
  CHECK(cfg.variant == "typeG");
  CHECK(cfg.levels == std::vector<double>{5.0, 10.0, 20.0});
  CHECK(cfg.queries == "**/2>=1 ; ++/0>=1");
  CHECK(cfg.kernels == std::vector<std::string>{"gaussian", "oscillating"});
  REQUIRE(cfg.seed.has_value());
  CHECK(*cfg.seed == 1234567u);
  CHECK(cfg.workers == 0);
  CHECK(cfg.out == "results/run1");
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("unknown keys and malformed numbers are hard errors") {
  CHECK_THROWS_AS(parse_config_text("dimension = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("dim 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("dim = two\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("alpha = 2.5x\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("seed = -4\n"), ValidationError);
  // the error message points at the offending line
  try {
    parse_config_text("dim = 1\nbogus = 3\n");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("validation catches out-of-range settings") {
  ExperimentConfig cfg;
  cfg.dim = 0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.dim = kMaxDim + 1;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.family = "triangle";
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.family = "oscillating";  // needs dim theta entries
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.kernels = {"oscillating"};  // same requirement through the curve list
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.variant = "gauss";
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.x0 = -1.0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.ec_levels = {0.5, 1.5};
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.ec_levels = {0.0};
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.delta_cut = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.levels = {10.0, -3.0};
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.max_tries = 0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = ExperimentConfig{};
  cfg.out = "";
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
}

TEST_CASE("the canonical rendering fingerprints the experiment, not the run") {
  ExperimentConfig a = parse_config_text("dim = 1\nalpha = 2\nseed = 9\n");
  ExperimentConfig b;
  b.seed = 9;
  CHECK(canonical_config(a) == canonical_config(b));
  CHECK(config_hash(a) == config_hash(b));

  // execution knobs do not change the fingerprint
  ExperimentConfig c = b;
  c.workers = 8;
  c.out = "somewhere/else";
  CHECK(canonical_config(c) == canonical_config(b));
  CHECK(config_hash(c) == config_hash(b));

  // experiment knobs do
  ExperimentConfig d = b;
  d.alpha = 1.9;
  CHECK(config_hash(d) != config_hash(b));
  ExperimentConfig e = b;
  e.seed = 10;
  CHECK(config_hash(e) != config_hash(b));
}

TEST_CASE("factories assemble the right objects") {
  ExperimentConfig cfg = parse_config_text(
      "dim = 2\nfamily = oscillating\ntheta = 6, 0\na = 0.5\n"
      "alpha = 1.5\nx0 = 0.8\nvariant = typeG\n"
      "quad_points = 21\nquad_rtol = 1e-3\nquad_max_refine = 2\n");
  const Kernel k = make_kernel(cfg);
  CHECK(k.family() == Kernel::Family::oscillating);
  CHECK(k.dim() == 2);
  CHECK(k.param_a() == 0.5);
  CHECK(k.sup_abs() == doctest::Approx(2.0));

  const Kernel kg = make_kernel(cfg, "gaussian");
  CHECK(kg.family() == Kernel::Family::gaussian_bump);

  const TailModel tail = make_tail(cfg);
  CHECK(tail.alpha() == 1.5);
  CHECK(tail.x0() == 0.8);
  CHECK(tail.variant() == TailVariant::typeG);

  const QuadratureConfig q = make_quadrature(cfg);
  CHECK(q.points_per_axis == 21);
  CHECK(q.rtol == 1e-3);
  CHECK(q.max_refine == 2);
}

TEST_CASE("query grammar covers faces, conjunctions and lists") {
  // one-dimensional face spellings
  const auto qs1 = parse_queries("*/1>=1; +/0>=1 & -/0>=2", 1);
  REQUIRE(qs1.size() == 2);
  REQUIRE(qs1[0].atoms.size() == 1);
  CHECK(qs1[0].atoms[0].face_id == 2);  // interior
  CHECK(qs1[0].atoms[0].index == 1);
  CHECK(qs1[0].atoms[0].n == 1);
  REQUIRE(qs1[1].atoms.size() == 2);
  CHECK(qs1[1].atoms[0].face_id == 1);  // vertex +1
  CHECK(qs1[1].atoms[0].index == 0);
  CHECK(qs1[1].atoms[1].face_id == 0);  // vertex -1
  CHECK(qs1[1].atoms[1].n == 2);

  // two-dimensional spellings agree with the stratification encoding
  const auto qs2 = parse_queries("**/2>=1; +-/0>=1; *+/1>=3", 2);
  REQUIRE(qs2.size() == 3);
  std::array<int8_t, kMaxDim> sign{};
  sign[0] = 0;
  sign[1] = 0;
  CHECK(qs2[0].atoms[0].face_id == CubeStrata::encode(sign, 2));
  sign[0] = 1;
  sign[1] = -1;
  CHECK(qs2[1].atoms[0].face_id == CubeStrata::encode(sign, 2));
  sign[0] = 0;
  sign[1] = 1;
  CHECK(qs2[2].atoms[0].face_id == CubeStrata::encode(sign, 2));
  CHECK(qs2[2].atoms[0].index == 1);
  CHECK(qs2[2].atoms[0].n == 3);

  // labels mirror the split
  const auto labels = split_query_labels(" */1>=1 ;  +/0>=1 & -/0>=2 ");
  REQUIRE(labels.size() == 2);
  CHECK(labels[0] == "*/1>=1");
  CHECK(labels[1] == "+/0>=1 & -/0>=2");

  // malformed atoms
  CHECK_THROWS_AS(parse_queries("*/1>1", 1), ValidationError);
  CHECK_THROWS_AS(parse_queries("**/1>=1", 1), ValidationError);
  CHECK_THROWS_AS(parse_queries("x/1>=1", 1), ValidationError);
  CHECK_THROWS_AS(parse_queries("*>=1", 1), ValidationError);
  CHECK_THROWS_AS(parse_queries("*/one>=1", 1), ValidationError);
}
