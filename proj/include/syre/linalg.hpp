#pragma once

#include "syre/rng.hpp"
#include "syre/types.hpp"

namespace syre::linalg {

// Default tolerances; callers can override per call.
inline constexpr double kSymmetryTol = 1e-8;
inline constexpr double kPinvTol = 1e-10;
inline constexpr double kNegativeEigTol = -1e-8;

struct SymEig {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // columns match eigenvalues
};

bool is_symmetric(const Matrix& m, double tol = kSymmetryTol);

// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
// Throws std::invalid_argument for non-square or asymmetric input.
SymEig sym_eig(const Matrix& m);

// Moore-Penrose inverse of a symmetric PSD matrix: eigenvalues below
// tol * lambda_max are treated as zero. Throws if an eigenvalue falls below
// the negative-definiteness guard.
Matrix pinv(const Matrix& m, double tol = kPinvTol);

// Number of eigenvalues strictly greater than threshold.
Index effective_rank(const Matrix& m, double threshold);

// i.i.d. N(0, sigma^2) entries; sigma == 0 gives the zero vector.
Vector gaussian_vector(RngStream& rng, Index dim, double sigma);

}  // namespace syre::linalg
