#include "syre/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace syre::linalg {

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

SymEig sym_eig(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("sym_eig: matrix must be square");
  }
  if (m.size() == 0) {
    return SymEig{Vector(0), Matrix(0, 0)};
  }
  if (!is_symmetric(m)) {
    throw std::invalid_argument("sym_eig: matrix is not symmetric within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_eig: eigensolver failed to converge");
  }
  SymEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix pinv(const Matrix& m, double tol) {
  SymEig eig = sym_eig(m);
  const Index n = m.rows();
  if (n == 0) return Matrix(0, 0);
  const double lambda_max = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
  Vector inv = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double lam = eig.eigenvalues(i);
    if (lam < kNegativeEigTol) {
      throw std::invalid_argument("pinv: matrix has a negative eigenvalue (not PSD)");
    }
    if (lam > tol * lambda_max && lam > 0.0) {
      inv(i) = 1.0 / lam;
    }
  }
  return eig.eigenvectors * inv.asDiagonal() * eig.eigenvectors.transpose();
}

Index effective_rank(const Matrix& m, double threshold) {
  SymEig eig = sym_eig(m);
  Index count = 0;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > threshold) ++count;
  }
  return count;
}

Vector gaussian_vector(RngStream& rng, Index dim, double sigma) {
  if (sigma < 0.0) {
    throw std::invalid_argument("gaussian_vector: sigma must be non-negative");
  }
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.gaussian(sigma);
  return v;
}

}  // namespace syre::linalg
