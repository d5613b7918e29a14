#include "core/smoother.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace fieldinfer;

TEST_CASE("smoothing constants for the quartic kernel") {
  // k=1: window {0,1,0} → T = 1, B = 1.
  SmoothingConstants c1 = smoothing_constants({1, SmoothingKernel::quartic()});
  CHECK(c1.t_nm == 1.0);
  CHECK(c1.b_nm == 1.0);
  // k=2: window {0, 0.5625, 1, 0.5625, 0}, Σg = 2.125.
  SmoothingConstants c2 = smoothing_constants({2, SmoothingKernel::quartic()});
  CHECK(c2.t_nm == doctest::Approx(4.515625).epsilon(1e-15));
  CHECK(c2.b_nm == doctest::Approx(1.6328125).epsilon(1e-15));
  // Any k: agree with the brute-force double sums.
  for (int k : {3, 5, 10}) {
    SmoothingConstants c = smoothing_constants({k, SmoothingKernel::quartic()});
    CHECK(c.t_nm ==
          doctest::Approx(oracle::t_nm(k, SmoothingKernel::quartic()))
              .epsilon(1e-14));
    CHECK(c.b_nm ==
          doctest::Approx(oracle::b_nm(k, SmoothingKernel::quartic()))
              .epsilon(1e-14));
  }
}

TEST_CASE("uniform kernel constants count the window") {
  SmoothingConstants c = smoothing_constants({2, SmoothingKernel::uniform()});
  CHECK(c.t_nm == 25.0);
  CHECK(c.b_nm == 5.0);
}

TEST_CASE("point estimate equals the brute-force oracle") {
  Field f = oracle::random_field(25, 30, 4);
  for (int k : {1, 2, 4}) {
    SmootherConfig cfg{k, SmoothingKernel::quartic()};
    for (auto [p, q] : {std::pair{k + 1, k + 1}, std::pair{12, 15},
                        std::pair{25 - k, 30 - k}}) {
      Position pos{0, 0, p, q};
      CHECK(nw_estimate(f, pos, cfg) ==
            doctest::Approx(oracle::nw(f, p, q, k, SmoothingKernel::quartic()))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("estimator reproduces a constant field exactly up to rounding") {
  Field f(15, 15);
  for (double& v : f.values) v = 2.5;
  SmootherConfig cfg{3, SmoothingKernel::quartic()};
  Position pos{0, 0, 7, 7};
  CHECK(nw_estimate(f, pos, cfg) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("estimator is affine-equivariant") {
  Field f = oracle::random_field(20, 20, 9);
  Field g = f;
  for (double& v : g.values) v = 3.0 * v - 1.25;
  SmootherConfig cfg{2, SmoothingKernel::triangular()};
  Position pos{0, 0, 9, 11};
  double mf = nw_estimate(f, pos, cfg);
  double mg = nw_estimate(g, pos, cfg);
  CHECK(mg == doctest::Approx(3.0 * mf - 1.25).epsilon(1e-12));
}

TEST_CASE("anchor and bandwidth limits are enforced") {
  Field f = oracle::random_field(12, 12, 2);
  SmootherConfig cfg{3, SmoothingKernel::quartic()};
  CHECK_THROWS_AS(nw_estimate(f, Position{0, 0, 3, 6}, cfg), BoundaryError);
  CHECK_THROWS_AS(nw_estimate(f, Position{0, 0, 10, 6}, cfg), BoundaryError);
  CHECK_THROWS_AS(nw_estimate(f, Position{0, 0, 6, 13}, cfg), BoundaryError);
  nw_estimate(f, Position{0, 0, 4, 4}, cfg);  // boundary of the valid range
  nw_estimate(f, Position{0, 0, 9, 9}, cfg);
  SmootherConfig too_big{6, SmoothingKernel::quartic()};
  CHECK_THROWS_AS(nw_estimate(f, Position{0, 0, 7, 7}, too_big),
                  BandwidthTooLargeError);
  CHECK_THROWS_AS(nw_surface(f, too_big), BandwidthTooLargeError);
}

TEST_CASE("surface equals per-point estimates bit for bit") {
  Field f = oracle::random_field(20, 20, 31);
  SmootherConfig cfg{3, SmoothingKernel::quartic()};
  Eigen::MatrixXd surf = nw_surface(f, cfg);
  REQUIRE(surf.rows() == 14);
  REQUIRE(surf.cols() == 14);
  for (int p = 4; p <= 17; p++)
    for (int q = 4; q <= 17; q++) {
      double direct = nw_estimate(f, Position{0, 0, p, q}, cfg);
      CHECK(surf(p - 4, q - 4) == direct);  // exact: same kernel_dot path
    }
}

TEST_CASE("residuals live on the interior and vanish outside") {
  Field f = oracle::random_field(16, 14, 8);
  SmootherConfig cfg{2, SmoothingKernel::quartic()};
  ResidualField res = residual_field(f, cfg);
  CHECK(res.n == 16);
  CHECK(res.m == 14);
  CHECK(res.k == 2);
  for (int i = 1; i <= 16; i++)
    for (int j = 1; j <= 14; j++) {
      if (res.in_interior(i, j)) {
        double want = f.at(i, j) -
                      oracle::nw(f, i, j, 2, SmoothingKernel::quartic());
        CHECK(res.at(i, j) == doctest::Approx(want).epsilon(1e-12));
      } else {
        CHECK(res.at(i, j) == 0.0);
      }
    }
  // residual_from_surface reuses a precomputed surface identically.
  ResidualField res2 = residual_from_surface(f, cfg, nw_surface(f, cfg));
  CHECK((res2.values.array() == res.values.array()).all());
}

TEST_CASE("window weights are unit-norm and kernel-shaped") {
  SmootherConfig cfg{2, SmoothingKernel::quartic()};
  Position pos{0, 0, 8, 9};
  WindowWeights w = window_weights(pos, cfg, 20, 20);
  CHECK(w.p == 8);
  CHECK(w.q == 9);
  CHECK(w.k == 2);
  double sumsq = 0.0;
  for (int i = 6; i <= 10; i++)
    for (int j = 7; j <= 11; j++) sumsq += w.at(i, j) * w.at(i, j);
  CHECK(sumsq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.at(8, 9) == doctest::Approx(1.0 / 1.6328125).epsilon(1e-14));
}
