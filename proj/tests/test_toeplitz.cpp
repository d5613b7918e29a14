#include "core/toeplitz.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "core/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace fieldinfer;

namespace {

Eigen::MatrixXd psd_projection(const Eigen::MatrixXd& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

Eigen::VectorXd random_unit(int n, uint64_t seed) {
  Eigen::VectorXd v(n);
  uint64_t state = seed;
  for (int i = 0; i < n; i++) v[i] = 2.0 * oracle::lcg_unit(state) - 1.0;
  return v / v.norm();
}

Eigen::VectorXd apply_vec(const SqrtOperator& q, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(x.size());
  q.apply(x.data(), out.data());
  return out;
}

}  // namespace

TEST_CASE("kernel row holds lag values and validates") {
  ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 6, 2.0);
  CHECK(row.size == 6);
  REQUIRE(row.first_row.size() == 6);
  CHECK(row.first_row[0] == 1.0);
  CHECK(row.first_row[2] == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));

  auto off = VarianceKernel::custom(
      "off", [](double x) { return 0.9 * std::exp(-0.5 * x * x); });
  CHECK_THROWS_AS(build_row(off, 6, 2.0), ConfigError);

  auto wavy = VarianceKernel::custom("wavy", [](double x) {
    double a = std::fabs(x);
    if (a < 0.5) return 1.0;
    if (a < 1.5) return 0.2;
    return 0.5;  // increases again at lag 2
  });
  CHECK_THROWS_AS(build_row(wavy, 4, 1.0), ConfigError);
  CHECK_THROWS_AS(build_row(VarianceKernel::gaussian(), 6, 0.0), ConfigError);
  CHECK_THROWS_AS(build_row(VarianceKernel::gaussian(), 0, 1.0), ConfigError);
}

TEST_CASE("dense square root squares back to the kernel matrix") {
  for (double b : {1.0, 3.0, 8.0}) {
    ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 40, b);
    SqrtOperator q = SqrtOperator::dense(row);
    CHECK(q.mode() == SqrtOperator::Mode::kDense);
    REQUIRE(q.has_matrix());
    const Eigen::MatrixXd& qm = q.matrix();
    CHECK(max_abs(qm - qm.transpose()) == 0.0);  // stored symmetric
    Eigen::MatrixXd t = oracle::toeplitz_matrix(VarianceKernel::gaussian(), 40, b);
    CHECK(max_abs(qm * qm - t) < 1e-10);
  }
}

TEST_CASE("dense square root clips to the psd projection") {
  auto boxcar = VarianceKernel::custom(
      "boxcar", [](double x) { return std::fabs(x) <= 1.0 ? 1.0 : 0.0; });
  ToeplitzKernelRow row = build_row(boxcar, 12, 3.5);
  SqrtOperator q = SqrtOperator::dense(row);
  Eigen::MatrixXd t = oracle::toeplitz_matrix(boxcar, 12, 3.5);
  CHECK(max_abs(q.matrix() * q.matrix() - psd_projection(t)) < 1e-9);
}

TEST_CASE("apply matches the dense matrix") {
  ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 50, 4.0);
  SqrtOperator q = SqrtOperator::dense(row);
  for (uint64_t s = 1; s <= 5; s++) {
    Eigen::VectorXd x = random_unit(50, s);
    CHECK((apply_vec(q, x) - q.matrix() * x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("fft mode with corner correction agrees with dense") {
  // n=384, B=3 exercises the true circulant+corners path (patches disjoint).
  ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 384, 3.0);
  SqrtOperator qf = SqrtOperator::fft(row);
  CHECK(qf.mode() == SqrtOperator::Mode::kFft);
  CHECK(!qf.has_matrix());
  SqrtOperator qd = SqrtOperator::dense(row);
  for (uint64_t s = 1; s <= 8; s++) {
    Eigen::VectorXd x = random_unit(384, s);
    double err = (apply_vec(qf, x) - qd.matrix() * x).cwiseAbs().maxCoeff();
    CHECK(err < 1e-6);
  }
}

TEST_CASE("fft mode squares back to the kernel matrix") {
  ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 384, 3.0);
  SqrtOperator qf = SqrtOperator::fft(row);
  Eigen::MatrixXd t =
      oracle::toeplitz_matrix(VarianceKernel::gaussian(), 384, 3.0);
  for (uint64_t s = 1; s <= 4; s++) {
    Eigen::VectorXd x = random_unit(384, s);
    Eigen::VectorXd twice = apply_vec(qf, apply_vec(qf, x));
    CHECK((twice - t * x).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("fft mode falls back to a dense payload when patches overlap") {
  // n=300, B=12: the correction patches would cover the whole matrix.
  ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 300, 12.0);
  SqrtOperator qf = SqrtOperator::fft(row);
  CHECK(qf.mode() == SqrtOperator::Mode::kFft);
  CHECK(qf.has_matrix());
  SqrtOperator qd = SqrtOperator::dense(row);
  CHECK(max_abs(qf.matrix() - qd.matrix()) < 1e-12);
}

TEST_CASE("oversized dense fallback is refused") {
  ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 3000, 130.0);
  CHECK_THROWS_AS(SqrtOperator::fft(row), SizeError);
}

TEST_CASE("automatic picks dense up to the limit") {
  ToeplitzKernelRow small = build_row(VarianceKernel::gaussian(), 256, 2.0);
  CHECK(SqrtOperator::automatic(small).mode() == SqrtOperator::Mode::kDense);
  ToeplitzKernelRow big = build_row(VarianceKernel::gaussian(), 257, 2.0);
  CHECK(SqrtOperator::automatic(big).mode() == SqrtOperator::Mode::kFft);
  CHECK(SqrtOperator::automatic(big, 300).mode() == SqrtOperator::Mode::kDense);
}

TEST_CASE("matrix application on both sides") {
  ToeplitzKernelRow rown = build_row(VarianceKernel::gaussian(), 30, 2.0);
  ToeplitzKernelRow rowm = build_row(VarianceKernel::gaussian(), 20, 2.0);
  SqrtOperator qn = SqrtOperator::dense(rown);
  SqrtOperator qm = SqrtOperator::dense(rowm);
  Eigen::MatrixXd e(30, 20);
  uint64_t state = 77;
  for (int i = 0; i < 30; i++)
    for (int j = 0; j < 20; j++) e(i, j) = 2.0 * oracle::lcg_unit(state) - 1.0;

  Eigen::MatrixXd left = e;
  qn.apply_left(left);
  CHECK(max_abs(left - qn.matrix() * e) < 1e-12);

  Eigen::MatrixXd right = e;
  qm.apply_right(right);
  CHECK(max_abs(right - e * qm.matrix()) < 1e-12);

  Eigen::MatrixXd both = e;
  qn.apply_left(both);
  qm.apply_right(both);
  CHECK(max_abs(both - qn.matrix() * e * qm.matrix()) < 1e-10);
}

TEST_CASE("fft-mode matrix application matches dense") {
  ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 300, 2.0);
  SqrtOperator qf = SqrtOperator::fft(row);
  CHECK(!qf.has_matrix());
  CHECK_THROWS_AS(qf.matrix(), ConfigError);
  SqrtOperator qd = SqrtOperator::dense(row);
  Eigen::MatrixXd e(300, 5);
  uint64_t state = 13;
  for (int i = 0; i < 300; i++)
    for (int j = 0; j < 5; j++) e(i, j) = 2.0 * oracle::lcg_unit(state) - 1.0;
  Eigen::MatrixXd got = e;
  qf.apply_left(got);
  CHECK(max_abs(got - qd.matrix() * e) < 1e-6);

  Eigen::MatrixXd er = e.transpose();
  Eigen::MatrixXd gotr = er;
  qf.apply_right(gotr);
  CHECK(max_abs(gotr - er * qd.matrix()) < 1e-6);
}

TEST_CASE("size mismatch in apply is rejected") {
  ToeplitzKernelRow row = build_row(VarianceKernel::gaussian(), 20, 2.0);
  SqrtOperator q = SqrtOperator::dense(row);
  Eigen::MatrixXd e(19, 4);
  CHECK_THROWS_AS(q.apply_left(e), ShapeError);
  Eigen::MatrixXd e2(4, 19);
  CHECK_THROWS_AS(q.apply_right(e2), ShapeError);
}
