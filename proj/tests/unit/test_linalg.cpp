#include <doctest.h>

#include "syre/linalg.hpp"

using namespace syre;
using namespace syre::linalg;

namespace {
Matrix random_symmetric(Index d, RngStream& rng) {
  Matrix g(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = rng.gaussian(1.0);
  return g + g.transpose();
}

Matrix random_psd(Index d, Index rank, RngStream& rng) {
  Matrix g(d, rank);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = rng.gaussian(1.0);
  return g * g.transpose();
}
}  // namespace

TEST_CASE("sym_eig on diagonal matrices") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const auto eig = sym_eig(m);
  CHECK(eig.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(eig.eigenvalues(2) == doctest::Approx(1.0));

  const auto zero = sym_eig(Matrix::Zero(2, 2));
  CHECK(zero.eigenvalues(0) == 0.0);
  CHECK(zero.eigenvalues(1) == 0.0);
}

TEST_CASE("sym_eig reconstructs random symmetric matrices") {
  RngStream rng(11);
  for (Index d : {10, 64, 512}) {
    const Matrix m = random_symmetric(d, rng);
    const auto eig = sym_eig(m);
    const Matrix rebuilt =
        eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
    const double scale = m.cwiseAbs().maxCoeff();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    for (Index i = 0; i + 1 < d; ++i) CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i + 1));
  }
}

TEST_CASE("sym_eig rejects bad input") {
  CHECK_THROWS_AS(sym_eig(Matrix::Zero(2, 3)), std::invalid_argument);
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(sym_eig(asym), std::invalid_argument);
}

TEST_CASE("pinv on simple cases") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 2.0;
  const Matrix p = pinv(m);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(1, 1) == doctest::Approx(0.0));
  const Matrix eye = Matrix::Identity(4, 4);
  CHECK((pinv(eye) - eye).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pinv satisfies the four Penrose identities on random PSD input") {
  RngStream rng(12);
  const Matrix a = random_psd(5, 2, rng);
  const Matrix ap = pinv(a);
  CHECK((a * ap * a - a).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((ap * a * ap - ap).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(((a * ap).transpose() - a * ap).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(((ap * a).transpose() - ap * a).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("pinv rejects indefinite matrices") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(pinv(m), std::invalid_argument);
}

TEST_CASE("effective_rank thresholds and monotonicity") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 0.5;
  m(2, 2) = 1e-5;
  CHECK(effective_rank(m, 1e-4) == 2);
  CHECK(effective_rank(Matrix::Identity(3, 3), 1e-4) == 3);
  // monotone non-increasing in the threshold
  RngStream rng(13);
  const Matrix a = random_psd(8, 5, rng);
  Index prev = 9;
  for (double t : {1e-10, 1e-6, 1e-4, 1e-2, 1.0, 100.0}) {
    const Index r = effective_rank(a, t);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("gaussian_vector basics") {
  RngStream rng(42);
  const Vector z = gaussian_vector(rng, 3, 0.0);
  CHECK(z.norm() == 0.0);
  RngStream a(42), b(42);
  const Vector va = gaussian_vector(a, 2, 1.0);
  const Vector vb = gaussian_vector(b, 2, 1.0);
  CHECK(va == vb);
  RngStream big(77);
  const Vector sample = gaussian_vector(big, 100000, 1.0);
  const double var = sample.squaredNorm() / static_cast<double>(sample.size());
  CHECK(var >= 0.98);
  CHECK(var <= 1.02);
}
