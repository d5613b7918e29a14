#ifndef FIELDINFER_TESTS_ORACLES_HPP_
#define FIELDINFER_TESTS_ORACLES_HPP_

// Deliberately naive reference implementations, written straight from the
// definitions with no shared code paths, loop reorderings or caches. The
// production code must agree with these.

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

#include "core/field.hpp"
#include "core/kernels.hpp"
#include "core/smoother.hpp"

namespace oracle {

inline double t_nm(int k, const fieldinfer::SmoothingKernel& g) {
  double acc = 0.0;
  for (int i = -k; i <= k; i++)
    for (int j = -k; j <= k; j++)
      acc += g(static_cast<double>(i) / k) * g(static_cast<double>(j) / k);
  return acc;
}

inline double b_nm(int k, const fieldinfer::SmoothingKernel& g) {
  double acc = 0.0;
  for (int i = -k; i <= k; i++)
    for (int j = -k; j <= k; j++) {
      double gg = g(static_cast<double>(i) / k) * g(static_cast<double>(j) / k);
      acc += gg * gg;
    }
  return std::sqrt(acc);
}

inline double nw(const fieldinfer::Field& f, int p, int q, int k,
                 const fieldinfer::SmoothingKernel& g) {
  double num = 0.0;
  for (int i = p - k; i <= p + k; i++)
    for (int j = q - k; j <= q + k; j++)
      num += f.at(i, j) * g(static_cast<double>(i - p) / k) *
             g(static_cast<double>(j - q) / k);
  return num / t_nm(k, g);
}

// Literal double-window covariance sum: both windows enumerated cell by cell.
inline double hac_cov(const fieldinfer::ResidualField& res,
                      const fieldinfer::Position& v1,
                      const fieldinfer::Position& v2, int k,
                      const fieldinfer::SmoothingKernel& g, double b,
                      const fieldinfer::VarianceKernel& kern) {
  double bn = b_nm(k, g);
  double acc = 0.0;
  for (int i1 = v1.p - k; i1 <= v1.p + k; i1++)
    for (int j1 = v1.q - k; j1 <= v1.q + k; j1++)
      for (int i2 = v2.p - k; i2 <= v2.p + k; i2++)
        for (int j2 = v2.q - k; j2 <= v2.q + k; j2++) {
          double c1 = g(static_cast<double>(i1 - v1.p) / k) *
                      g(static_cast<double>(j1 - v1.q) / k) / bn;
          double c2 = g(static_cast<double>(i2 - v2.p) / k) *
                      g(static_cast<double>(j2 - v2.q) / k) / bn;
          acc += c1 * c2 * kern((i1 - i2) / b) * kern((j1 - j2) / b) *
                 res.at(i1, j1) * res.at(i2, j2);
        }
  return acc;
}

inline Eigen::MatrixXd toeplitz_matrix(const fieldinfer::VarianceKernel& kern,
                                       int n, double b) {
  Eigen::MatrixXd t(n, n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) t(i, j) = kern(std::abs(i - j) / b);
  return t;
}

// Leave-one-out score with the centre observation removed from the numerator
// but the full-window normalizer kept.
inline double cv_score(const fieldinfer::Field& f, int k,
                       const fieldinfer::SmoothingKernel& g) {
  double t = t_nm(k, g);
  double score = 0.0;
  for (int i = 2 * k + 1; i <= f.n - 2 * k; i++)
    for (int j = 2 * k + 1; j <= f.m - 2 * k; j++) {
      double num = 0.0;
      for (int u = i - k; u <= i + k; u++)
        for (int v = j - k; v <= j + k; v++) {
          if (u == i && v == j) continue;
          num += f.at(u, v) * g(static_cast<double>(u - i) / k) *
                 g(static_cast<double>(v - j) / k);
        }
      double d = f.at(i, j) - num / t;
      score += d * d;
    }
  return score;
}

// Splitmix-style scrambler for small deterministic test fixtures; unrelated to
// the library generator on purpose.
inline double lcg_unit(uint64_t& state) {
  state = state * 6364136223846793005ull + 1442695040888963407ull;
  uint64_t x = state >> 11;
  return static_cast<double>(x) / 9007199254740992.0;
}

inline fieldinfer::Field random_field(int n, int m, uint64_t seed) {
  fieldinfer::Field f(n, m);
  uint64_t state = seed * 2654435761ull + 1;
  for (double& v : f.values) v = 2.0 * lcg_unit(state) - 1.0;
  return f;
}

}  // namespace oracle

#endif  // FIELDINFER_TESTS_ORACLES_HPP_
