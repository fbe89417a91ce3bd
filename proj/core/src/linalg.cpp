#include "kernelop/linalg.hpp"

#include <lapacke.h>

#include <cmath>

#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace kernelop {
namespace {

// Ascending eigenpairs via dsyevd; returns false if LAPACK reports an error.
bool lapack_syevd(Matrix& vectors, Vector& values) {
  const Index n = vectors.rows();
  values.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n), vectors.data(),
                                         static_cast<lapack_int>(n), values.data());
  return info == 0;
}

// Some OpenBLAS builds pick CPU kernels that return wrong eigenpairs; check once on a fixed matrix.
bool lapack_is_sound() {
  static std::once_flag once;
  static bool sound = false;
  std::call_once(once, [] {
    constexpr Index n = 160;
    Matrix a(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) a(i, j) = std::sin(0.37 * static_cast<double>(i * j + 1)) + (i == j ? 2.0 : 0.0);
    }
    a = (0.5 * (a + a.transpose())).eval();
    Matrix v = a;
    Vector w;
    sound = lapack_syevd(v, w) && (a * v - v * w.asDiagonal()).norm() <= 1e-10 * a.norm() &&
            (v.transpose() * v - Matrix::Identity(n, n)).norm() <= 1e-10;
    if (!sound) {
      std::cerr << "kernelop: LAPACK dsyevd failed a self-check; using Eigen's eigensolver instead "
                   "(for OpenBLAS, setting OPENBLAS_CORETYPE=Haswell usually fixes this)\n";
    }
  });
  return sound;
}

}  // namespace

EigenSystem eigen_decompose(const Matrix& symmetric, double tol) {
  if (symmetric.rows() != symmetric.cols()) throw std::invalid_argument("eigen_decompose: matrix is not square");
  EigenSystem eig;
  eig.tol = tol;
  const Index n = symmetric.rows();
  if (n == 0) return eig;

  if (lapack_is_sound()) {
    eig.eigenvectors = symmetric;
    if (!lapack_syevd(eig.eigenvectors, eig.eigenvalues)) throw std::runtime_error("dsyevd failed");
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric.selfadjointView<Eigen::Lower>());
    if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
    eig.eigenvalues = solver.eigenvalues();
    eig.eigenvectors = solver.eigenvectors();
  }

  // ascending -> descending
  for (Index i = 0; i < n / 2; ++i) {
    std::swap(eig.eigenvalues(i), eig.eigenvalues(n - 1 - i));
    eig.eigenvectors.col(i).swap(eig.eigenvectors.col(n - 1 - i));
  }
  eig.rank = 0;
  while (eig.rank < n && eig.eigenvalues(eig.rank) > tol) ++eig.rank;
  return eig;
}

ThinSvd thin_svd(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

}  // namespace kernelop
