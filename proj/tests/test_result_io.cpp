#include "core/result_io.hpp"

#include <string>

#include "core/errors.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace fieldinfer;
using Json = nlohmann::json;

namespace {

BootstrapResult small_result(TauMode mode) {
  Field f = oracle::random_field(30, 30, 61);
  PositionGrid grid = make_position_grid(30, 30, 2, 2);
  BootstrapConfig cfg;
  cfg.replicates = 25;
  cfg.alpha = 0.1;
  cfg.mode = mode;
  cfg.seed = 9;
  cfg.smoother = {2, SmoothingKernel::quartic()};
  cfg.hac = {1.5, VarianceKernel::gaussian()};
  return run_lwmb(f, grid, cfg);
}

}  // namespace

TEST_CASE("result json carries the full band description") {
  BootstrapResult r = small_result(TauMode::kHomogeneous);
  Json j = Json::parse(result_to_json(r));
  CHECK(j["schema"] == "lwmb-result/1");
  CHECK(j["alpha"] == 0.1);
  CHECK(j["mode"] == "homogeneous");
  CHECK(j["k"] == 2);
  CHECK(j["b"] == 1.5);
  CHECK(j["seed"] == 9);
  CHECK(j["replicates"] == 25);
  CHECK(j["c_quantile"] == r.c_quantile);
  CHECK(j["t_nm"] == r.t_nm);
  CHECK(j["b_nm"] == r.b_nm);
  REQUIRE(j["positions"].size() == 4);
  CHECK(j["positions"][0]["x"].get<double>() == r.grid.positions[0].x);
  CHECK(j["positions"][0]["p"] == 10);
  REQUIRE(j["estimates"].size() == 4);
  REQUIRE(j["half_widths"].size() == 4);
  for (int v = 0; v < 4; v++) {
    CHECK(j["estimates"][v] == r.estimates[v]);
    CHECK(j["half_widths"][v] == r.half_widths[v]);
  }
  CHECK(!j.contains("sigma"));
  CHECK(!j.contains("verdict"));
}

TEST_CASE("result json adds sigma and verdict when present") {
  BootstrapResult r = small_result(TauMode::kHeterogeneous);
  test_mean(r, std::vector<double>(4, 0.0));
  Json j = Json::parse(result_to_json(r));
  CHECK(j["mode"] == "heterogeneous");
  REQUIRE(j.contains("sigma"));
  REQUIRE(j["sigma"].size() == 4);
  for (int v = 0; v < 4; v++) CHECK(j["sigma"][v] == r.sigma[v]);
  CHECK(j.contains("variance_clipped"));
  REQUIRE(j.contains("verdict"));
  CHECK(j["verdict"]["statistic"] == r.verdict->statistic);
  CHECK(j["verdict"]["reject"].is_boolean());
  REQUIRE(j["verdict"]["flags"].size() == 4);
}

TEST_CASE("study spec parses every key") {
  const char* text = R"({
    "study": "size-power",
    "n": 64, "m": 48, "grid": 5, "alpha": 0.1,
    "sims": 7, "replicates": 33, "k": 3, "b": 2.5,
    "auto_k": true, "auto_b": false, "k_max": 6,
    "mean": "sinusoidal", "noise": "ma",
    "modes": ["heterogeneous"], "seed": 99, "threads": 2,
    "kernel_g": "triangular", "kernel_k": "gaussian",
    "disc": {"height": 0.5, "radius": 0.2, "cx": 0.4, "cy": 0.6}
  })";
  StudySpec spec = parse_study_spec(text);
  CHECK(spec.kind == StudyKind::kSizePower);
  const StudyConfig& c = spec.config;
  CHECK(c.n == 64);
  CHECK(c.m == 48);
  CHECK(c.divisions == 5);
  CHECK(c.alpha == 0.1);
  CHECK(c.sims == 7);
  CHECK(c.replicates == 33);
  CHECK(c.k == 3);
  CHECK(c.b == 2.5);
  CHECK(c.auto_k);
  CHECK(!c.auto_b);
  CHECK(c.k_max == 6);
  CHECK(std::string(c.mean.name()) == "sinusoidal");
  CHECK(c.noise == NoiseKind::kMa);
  REQUIRE(c.modes.size() == 1);
  CHECK(c.modes[0] == TauMode::kHeterogeneous);
  CHECK(c.seed == 99);
  CHECK(c.threads == 2);
  CHECK(c.g.name() == "triangular");
  CHECK(c.kernel.name() == "gaussian");
  CHECK(c.alt_mean.disc.height == 0.5);
  CHECK(c.alt_mean.disc.cx == 0.4);
  CHECK(std::string(c.alt_mean.name()) == "disc");
}

TEST_CASE("study spec defaults and disc propagation") {
  StudySpec spec = parse_study_spec(R"({"study": "coverage"})");
  CHECK(spec.kind == StudyKind::kCoverage);
  CHECK(spec.config.n == 200);
  CHECK(spec.config.divisions == 20);
  CHECK(spec.config.modes.size() == 2);
  CHECK(std::string(spec.config.mean.name()) == "zero");

  StudySpec with_disc = parse_study_spec(
      R"({"study": "coverage", "mean": "disc", "disc": {"height": 0.7}})");
  CHECK(with_disc.config.mean.disc.height == 0.7);
  CHECK(with_disc.config.mean.disc.radius == 0.1);
}

TEST_CASE("study spec rejects malformed input") {
  CHECK_THROWS_AS(parse_study_spec("not json"), ConfigError);
  CHECK_THROWS_AS(parse_study_spec("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_study_spec(R"({"n": 10})"), ConfigError);
  CHECK_THROWS_AS(parse_study_spec(R"({"study": "banana"})"), ConfigError);
  CHECK_THROWS_AS(parse_study_spec(R"({"study": "coverage", "bogus": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_study_spec(R"({"study": "coverage", "n": "ten"})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_study_spec(R"({"study": "coverage", "alpha": "x"})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_study_spec(R"({"study": "coverage", "auto_k": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_study_spec(R"({"study": "coverage", "modes": []})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_study_spec(R"({"study": "coverage", "modes": ["spicy"]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_study_spec(R"({"study": "coverage", "disc": {"width": 1}})"),
      ConfigError);
  CHECK_THROWS_AS(parse_study_spec(R"({"study": "coverage", "mean": "x"})"),
                  ConfigError);
}

TEST_CASE("run_study emits the table for the parsed spec") {
  const char* text = R"({
    "study": "coverage", "n": 40, "m": 40, "grid": 2,
    "sims": 2, "replicates": 19, "k": 2, "b": 1.0,
    "mean": "elliptical", "noise": "iid", "modes": ["homogeneous"],
    "seed": 3
  })";
  std::string csv = run_study(parse_study_spec(text));
  CHECK(csv.rfind("Mean,Error,K,B,Grid,Mode,Coverage,Average width\n", 0) == 0);
  CHECK(csv.find("elliptical,iid,2,1,2x2,homogeneous,") != std::string::npos);
}
