#include "core/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace fieldinfer;

TEST_CASE("cross-validation scores match the brute-force oracle") {
  Field f = oracle::random_field(30, 30, 41);
  CvConfig cfg{3, SmoothingKernel::quartic()};
  CvResult r = cv_select_k(f, cfg);
  REQUIRE(r.scores.size() == 3);
  int want_best = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 3; k++) {
    double want = oracle::cv_score(f, k, SmoothingKernel::quartic());
    CHECK(r.scores[k - 1] == doctest::Approx(want).epsilon(1e-9));
    if (want < best) {
      best = want;
      want_best = k;
    }
  }
  CHECK(r.k_best == want_best);
}

TEST_CASE("cross-validation skips candidates without a scoring window") {
  Field f = oracle::random_field(13, 13, 42);
  CvResult r = cv_select_k(f, {5, SmoothingKernel::quartic()});
  REQUIRE(r.scores.size() == 5);
  for (int k = 1; k <= 3; k++) CHECK(std::isfinite(r.scores[k - 1]));
  CHECK(std::isnan(r.scores[3]));  // 4k+1 = 17 > 13
  CHECK(std::isnan(r.scores[4]));
  CHECK(r.k_best >= 1);
  CHECK(r.k_best <= 3);

  Field tiny = oracle::random_field(4, 4, 1);
  CHECK_THROWS_AS(cv_select_k(tiny, {3, SmoothingKernel::quartic()}),
                  BandwidthTooLargeError);
  CHECK_THROWS_AS(cv_select_k(f, {0, SmoothingKernel::quartic()}), ConfigError);
}

TEST_CASE("cross-validation is bandwidth-asymmetric in the lattice") {
  // Rectangular field: both axes must satisfy the window rule.
  Field f = oracle::random_field(40, 9, 43);
  CvResult r = cv_select_k(f, {4, SmoothingKernel::quartic()});
  CHECK(std::isfinite(r.scores[0]));
  CHECK(std::isfinite(r.scores[1]));  // 4*2+1 = 9 = m
  CHECK(std::isnan(r.scores[2]));
  CHECK(std::isnan(r.scores[3]));
}

TEST_CASE("block weight matrix reproduces the transformed interior mean") {
  Field f = oracle::random_field(14, 12, 44);
  SmootherConfig sc{2, SmoothingKernel::quartic()};
  ResidualField res = residual_field(f, sc);
  SqrtOperator qn = SqrtOperator::dense(build_row(VarianceKernel::gaussian(), 14, 3.0));
  SqrtOperator qm = SqrtOperator::dense(build_row(VarianceKernel::gaussian(), 12, 3.0));
  Eigen::MatrixXd w = vb_weight_matrix(res, qn, qm);
  REQUIRE(w.rows() == 14);
  REQUIRE(w.cols() == 12);

  Eigen::MatrixXd e = replicate_field(14, 12, 9, 0);
  double gamma_direct = (w.array() * e.array()).sum();
  Eigen::MatrixXd t = e;
  qn.apply_left(t);
  qm.apply_right(t);
  double acc = 0.0;
  int count = 0;
  for (int i = 1; i <= 14; i++)
    for (int j = 1; j <= 12; j++)
      if (res.in_interior(i, j)) {
        acc += res.at(i, j) * t(i - 1, j - 1);
        count++;
      }
  CHECK(count == 10 * 8);
  CHECK(gamma_direct == doctest::Approx(acc / count).epsilon(1e-10));
}

TEST_CASE("variance bandwidth selection is deterministic and in range") {
  Field f = oracle::random_field(32, 32, 45);
  VbConfig cfg;
  cfg.q = 0.3;
  cfg.replicates = 60;
  cfg.blocks = 6;
  cfg.seed = 5;
  VbResult a = select_variance_bandwidth(f, 2, cfg);
  VbResult b = select_variance_bandwidth(f, 2, cfg);
  CHECK(a.b_best == b.b_best);
  CHECK(a.losses == b.losses);
  CHECK(a.sigma2_star == b.sigma2_star);
  CHECK(a.sigma2_star > 0.0);
  REQUIRE(a.losses.size() == cfg.gammas.size());
  CHECK(std::count(cfg.gammas.begin(), cfg.gammas.end(), a.b_best) == 1);
  for (double loss : a.losses) CHECK(loss >= 0.0);
  // The winner attains the smallest loss.
  size_t best_idx = 0;
  for (size_t i = 1; i < a.losses.size(); i++)
    if (a.losses[i] < a.losses[best_idx]) best_idx = i;
  CHECK(a.losses[best_idx] ==
        *std::min_element(a.losses.begin(), a.losses.end()));
  std::vector<double> sorted = cfg.gammas;
  std::sort(sorted.begin(), sorted.end());
  CHECK(a.b_best == sorted[best_idx]);
}

TEST_CASE("zero residual field degenerates to the smallest candidate") {
  Field zero(24, 24);
  VbConfig cfg;
  cfg.q = 0.3;
  cfg.replicates = 20;
  cfg.blocks = 4;
  VbResult r = select_variance_bandwidth(zero, 2, cfg);
  CHECK(r.b_best == 1.0);
  CHECK(r.sigma2_star == 0.0);
  for (double loss : r.losses) CHECK(loss == 0.0);
}

TEST_CASE("undersized blocks are refused with guidance") {
  Field f = oracle::random_field(30, 30, 46);
  VbConfig cfg;  // q = 0.1 → side 4 < 2k+1 = 5
  cfg.replicates = 20;
  try {
    select_variance_bandwidth(f, 2, cfg);
    FAIL("expected BlockTooSmallError");
  } catch (const BlockTooSmallError& e) {
    CHECK(std::string(e.what()).find("q") != std::string::npos);
  }
}

TEST_CASE("variance bandwidth config validation") {
  Field f = oracle::random_field(30, 30, 47);
  VbConfig cfg;
  cfg.q = 0.3;
  cfg.replicates = 1;
  CHECK_THROWS_AS(select_variance_bandwidth(f, 2, cfg), ConfigError);
  cfg.replicates = 20;
  cfg.gammas.clear();
  CHECK_THROWS_AS(select_variance_bandwidth(f, 2, cfg), ConfigError);
  cfg = VbConfig{};
  cfg.q = 0.3;
  cfg.blocks = 0;
  CHECK_THROWS_AS(select_variance_bandwidth(f, 2, cfg), ConfigError);
  cfg = VbConfig{};
  cfg.q = 1.5;
  CHECK_THROWS_AS(select_variance_bandwidth(f, 2, cfg), ConfigError);
}
