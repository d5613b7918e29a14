#include "core/toeplitz.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "core/errors.hpp"
#include "core/fft.hpp"

namespace fieldinfer {

namespace {

// Symmetric PSD square root of the Toeplitz matrix with the given lag values.
Eigen::MatrixXd dense_sqrt_from_lags(const std::vector<double>& lag, int n) {
  Eigen::MatrixXd t(n, n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) t(i, j) = lag[std::abs(i - j)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd q = es.eigenvectors() * lam.asDiagonal() *
                      es.eigenvectors().transpose();
  return 0.5 * (q + q.transpose());
}

}  // namespace

ToeplitzKernelRow build_row(const VarianceKernel& k, int size,
                            double bandwidth) {
  if (size < 1) throw ConfigError("toeplitz row size must be >= 1");
  if (!(bandwidth > 0.0))
    throw ConfigError("variance bandwidth must be positive");
  ToeplitzKernelRow row;
  row.size = size;
  row.bandwidth = bandwidth;
  row.kernel = k;
  row.first_row.resize(size);
  for (int t = 0; t < size; t++)
    row.first_row[t] = k(static_cast<double>(t) / bandwidth);
  if (std::fabs(row.first_row[0] - 1.0) > 1e-12)
    throw ConfigError("variance kernel must satisfy K(0) = 1");
  for (int t = 0; t < size; t++) {
    double v = row.first_row[t];
    if (!(v >= -1e-12) || !(v <= 1.0 + 1e-12))
      throw ConfigError("kernel row entries must lie in [0,1]");
    if (t > 0 && v > row.first_row[t - 1] + 1e-12)
      throw ConfigError("kernel row must be non-increasing");
  }
  return row;
}

SqrtOperator SqrtOperator::dense(const ToeplitzKernelRow& row) {
  if (row.size > kDenseCap)
    throw SizeError("dense square root limited to size " +
                    std::to_string(kDenseCap) + ", got " +
                    std::to_string(row.size));
  SqrtOperator op;
  op.mode_ = Mode::kDense;
  op.n_ = row.size;
  op.q_ = dense_sqrt_from_lags(row.first_row, row.size);
  return op;
}

SqrtOperator SqrtOperator::fft(const ToeplitzKernelRow& row) {
  if (row.size < 2) throw ConfigError("fft square root needs size >= 2");
  const int n = row.size;
  const double b = row.bandwidth;
  SqrtOperator op;
  op.mode_ = Mode::kFft;
  op.n_ = n;

  const size_t big = next_pow2(2 * static_cast<size_t>(n));
  op.big_ = big;
  std::vector<std::complex<double>> emb(big);
  for (size_t j = 0; j < big; j++) {
    size_t d = std::min(j, big - j);
    emb[j] = d < static_cast<size_t>(n)
                 ? row.first_row[d]
                 : row.kernel(static_cast<double>(d) / b);
  }
  fieldinfer::fft(emb, false);
  op.root_.resize(big);
  for (size_t j = 0; j < big; j++)
    op.root_[j] = std::sqrt(std::max(emb[j].real(), 0.0));

  const int pad = static_cast<int>(std::ceil(12.0 * b));
  const int w = pad + 24;
  const int w2 = w + pad + 24;
  if (2 * w >= n || w2 >= n) {
    // Patches would cover the whole matrix: use the exact dense payload.
    if (n > kDenseCap)
      throw SizeError("fft square root with bandwidth " + std::to_string(b) +
                      " needs a dense fallback beyond the cap at size " +
                      std::to_string(n));
    op.q_ = dense_sqrt_from_lags(row.first_row, n);
    return op;
  }

  const int n0 = std::min(n, w2 + pad + 48);
  std::vector<double> lag0(n0);
  for (int t = 0; t < n0; t++) lag0[t] = row.first_row[t];
  Eigen::MatrixXd q0 = dense_sqrt_from_lags(lag0, n0);

  // Position-space circulant row, for the corner difference.
  std::vector<std::complex<double>> ck(big);
  for (size_t j = 0; j < big; j++) ck[j] = op.root_[j];
  fieldinfer::fft(ck, true);

  op.w_ = w;
  op.w2_ = w2;
  op.corner_.resize(w, w2);
  for (int i = 0; i < w; i++)
    for (int j = 0; j < w2; j++) {
      size_t d = static_cast<size_t>(((i - j) % static_cast<long>(big) +
                                      static_cast<long>(big)) %
                                     static_cast<long>(big));
      op.corner_(i, j) = q0(i, j) - ck[d].real();
    }
  return op;
}

SqrtOperator SqrtOperator::automatic(const ToeplitzKernelRow& row,
                                     int dense_limit) {
  return row.size <= dense_limit ? dense(row) : fft(row);
}

const Eigen::MatrixXd& SqrtOperator::matrix() const {
  if (q_.size() == 0)
    throw ConfigError("no dense payload in fft mode at this size");
  return q_;
}

void SqrtOperator::apply(const double* in, double* out) const {
  if (q_.size() > 0) {
    Eigen::Map<const Eigen::VectorXd> v(in, n_);
    Eigen::Map<Eigen::VectorXd> y(out, n_);
    y.noalias() = q_ * v;
    return;
  }
  std::vector<std::complex<double>> buf(big_);
  for (int i = 0; i < n_; i++) buf[i] = in[i];
  fieldinfer::fft(buf, false);
  for (size_t j = 0; j < big_; j++) buf[j] *= root_[j];
  fieldinfer::fft(buf, true);
  for (int i = 0; i < n_; i++) out[i] = buf[i].real();
  // Corner corrections; the bottom-right patch is the persymmetric flip.
  for (int i = 0; i < w_; i++) {
    double acc_tl = 0.0, acc_br = 0.0;
    for (int j = 0; j < w2_; j++) {
      acc_tl += corner_(i, j) * in[j];
      acc_br += corner_(i, j) * in[n_ - 1 - j];
    }
    out[i] += acc_tl;
    out[n_ - 1 - i] += acc_br;
  }
}

void SqrtOperator::apply_left(Eigen::MatrixXd& mat) const {
  if (mat.rows() != n_)
    throw ShapeError("apply_left: matrix has " + std::to_string(mat.rows()) +
                     " rows, operator size is " + std::to_string(n_));
  if (q_.size() > 0) {
    mat = (q_ * mat).eval();
    return;
  }
  std::vector<double> tmp(n_);
  for (Eigen::Index c = 0; c < mat.cols(); c++) {
    apply(mat.col(c).data(), tmp.data());
    for (int i = 0; i < n_; i++) mat(i, c) = tmp[i];
  }
}

void SqrtOperator::apply_right(Eigen::MatrixXd& mat) const {
  if (mat.cols() != n_)
    throw ShapeError("apply_right: matrix has " + std::to_string(mat.cols()) +
                     " cols, operator size is " + std::to_string(n_));
  if (q_.size() > 0) {
    mat = (mat * q_).eval();
    return;
  }
  std::vector<double> row(n_), tmp(n_);
  for (Eigen::Index r = 0; r < mat.rows(); r++) {
    for (int j = 0; j < n_; j++) row[j] = mat(r, j);
    apply(row.data(), tmp.data());
    for (int j = 0; j < n_; j++) mat(r, j) = tmp[j];
  }
}

}  // namespace fieldinfer
