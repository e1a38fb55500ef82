#pragma once

#include <cstdint>
#include <random>

#include "orthocoord/tensor.hpp"

namespace orthocoord {

using Rng = std::mt19937_64;

inline Matrix standard_normal_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) M(r, c) = normal(rng);
  return M;
}

inline Vector standard_normal_vector(int n, Rng& rng) {
  return standard_normal_matrix(n, 1, rng).col(0);
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of diag(R) moved into Q.
inline Matrix haar_orthogonal(int n, Rng& rng) {
  const Matrix A = standard_normal_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(A);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (R(i, i) < 0.0) Q.col(i) = -Q.col(i);
  }
  return Q;
}

/// Haar orthogonal matrix with determinant +1 (first row flipped if needed).
inline Matrix haar_special_orthogonal(int n, Rng& rng) {
  Matrix Q = haar_orthogonal(n, rng);
  if (Q.determinant() < 0.0) Q.row(0) = -Q.row(0);
  return Q;
}

inline Matrix random_skew(int n, Rng& rng) {
  const Matrix A = standard_normal_matrix(n, n, rng);
  return A - A.transpose();
}

}  // namespace orthocoord
