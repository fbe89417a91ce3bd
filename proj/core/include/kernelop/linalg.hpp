#pragma once

#include "kernelop/types.hpp"

namespace kernelop {

/// Eigenpairs of a symmetric matrix, eigenvalues descending.
struct EigenSystem {
  Vector eigenvalues;
  Matrix eigenvectors;  // columns
  Index rank = 0;       // #{eigenvalues > tol}
  double tol = 1e-14;
};

/// Divide-and-conquer symmetric eigensolver (LAPACK dsyevd). Only the lower triangle is read.
/// If dsyevd fails a one-time self-check, Eigen's solver is used instead (with a warning).
EigenSystem eigen_decompose(const Matrix& symmetric, double tol = 1e-14);

struct ThinSvd {
  Vector singular_values;  // descending
  Matrix U;                // m x k
  Matrix V;                // n x k
};

ThinSvd thin_svd(const Matrix& a);

}  // namespace kernelop
