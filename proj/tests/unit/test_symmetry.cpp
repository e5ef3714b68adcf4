#include <doctest.h>

#include <cmath>

#include "syre/linalg.hpp"
#include "syre/models.hpp"
#include "syre/regularizer.hpp"
#include "syre/symmetry.hpp"

using namespace syre;

namespace {
ReflectionSymmetry axis_reflection(Index d, Index axis, Vector center = Vector()) {
  Matrix o = Matrix::Zero(d, 1);
  o(axis, 0) = 1.0;
  if (center.size() == 0) center = Vector::Zero(d);
  return ReflectionSymmetry(std::move(o), std::move(center));
}
}  // namespace

TEST_CASE("reflect sign-flips the projected coordinate") {
  const auto s = axis_reflection(2, 0);
  Vector phi(2);
  phi << 3.0, 4.0;
  const Vector r = reflect(phi, s);
  CHECK(r(0) == doctest::Approx(-3.0));
  CHECK(r(1) == doctest::Approx(4.0));
}

TEST_CASE("rank-zero reflection is the identity") {
  const auto s = ReflectionSymmetry::none(3);
  Vector phi(3);
  phi << 1.0, -2.0, 0.5;
  CHECK((reflect(phi, s) - phi).norm() == 0.0);
}

TEST_CASE("affine reflection about a center") {
  Vector center(2);
  center << 2.0, 0.0;
  const auto s = axis_reflection(2, 0, center);
  Vector phi(2);
  phi << 3.0, 4.0;
  const Vector r = reflect(phi, s);
  CHECK(r(0) == doctest::Approx(1.0));
  CHECK(r(1) == doctest::Approx(4.0));
}

TEST_CASE("reflection is an involution and preserves distance to the center") {
  RngStream rng(21);
  // random rank-3 orthonormal basis in dimension 8 via QR
  Matrix g(8, 3);
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i < 8; ++i) g(i, j) = rng.gaussian(1.0);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix o = qr.householderQ() * Matrix::Identity(8, 3);
  Vector center = o * linalg::gaussian_vector(rng, 3, 1.0);  // P center = center
  const ReflectionSymmetry s(o, center);
  for (int t = 0; t < 50; ++t) {
    const Vector phi = linalg::gaussian_vector(rng, 8, 2.0);
    CHECK((s.reflect(s.reflect(phi)) - phi).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs((s.reflect(phi) - center).norm() - (phi - center).norm()) <= 1e-10);
  }
}

TEST_CASE("constructor validates orthonormality and the center condition") {
  Matrix o = Matrix::Zero(3, 2);
  o(0, 0) = 1.0;
  o(0, 1) = 1.0;  // not orthonormal
  CHECK_THROWS_AS(ReflectionSymmetry::about_origin(o), std::invalid_argument);
  Matrix good = Matrix::Zero(3, 1);
  good(0, 0) = 1.0;
  Vector bad_center(3);
  bad_center << 0.0, 1.0, 0.0;  // P center != center
  CHECK_THROWS_AS(ReflectionSymmetry(good, bad_center), std::invalid_argument);
}

TEST_CASE("check_symmetry certifies exact symmetries and flags broken ones") {
  RngStream rng(22);
  auto net = std::make_shared<models::TwoLayerNet>(3, 4, 2,
                                                   models::TwoLayerNet::Activation::Tanh);
  Dataset data;
  data.inputs.resize(8, 3);
  data.targets.resize(8, 2);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 3; ++j) data.inputs(i, j) = rng.gaussian(1.0);
    for (Index j = 0; j < 2; ++j) data.targets(i, j) = rng.gaussian(1.0);
  }
  const Batch batch = Batch::full(data);

  // hidden-unit sign flip is an exact symmetry of the tanh net
  const auto flip = net->unit_sign_flip(1);
  CHECK(check_symmetry(*net, flip, 50, rng, batch) <= 1e-8);
  const auto swap = net->unit_swap(0, 2);
  CHECK(check_symmetry(*net, swap, 50, rng, batch) <= 1e-8);

  // the quartic objective is symmetric under each eigenvector reflection
  RngStream qrng(23);
  const auto quartic = models::QuarticBenchmark::unstructured(12, qrng);
  for (Index i : {Index(0), Index(5), Index(11)}) {
    CHECK(check_symmetry(quartic, quartic.eigen_reflection(i), 40, qrng) <= 1e-10);
  }

  // wrapping with a bias plus decay breaks the symmetry measurably
  const double gamma = 0.1;
  const double sigma0_rel = 2.0;
  auto wrapped = wrap(net, RegMode::Syre, gamma, sigma0_rel, 0.0, rng);
  const double sigma0_abs = wrapped.sigma0_abs();
  const double violation = check_symmetry(wrapped, flip, 200, rng, batch);
  CHECK(violation >= gamma * sigma0_abs / 10.0);
}

TEST_CASE("degree_of_symmetry counts small overlaps") {
  Matrix dirs = Matrix::Identity(4, 4);
  Vector w(4);
  w << 1.0, 0.0, 0.0, 0.0;
  const auto report = degree_of_symmetry(w, dirs, 1e-3);
  CHECK(report.degree == 3);
  CHECK(report.overlaps(0) == doctest::Approx(1.0));

  const auto all = degree_of_symmetry(Vector::Zero(4), dirs, 1e-3);
  CHECK(all.degree == 4);

  // anti-aligned direction counts as aligned through the absolute value
  Vector v(4);
  v << -1.0, 0.0, 0.0, 0.0;
  CHECK(degree_of_symmetry(v, dirs, 1e-3).degree == 3);
}

TEST_CASE("breaking_strength closed form with zero bias") {
  // constant base loss, D = I, gamma = 0.5, P = diag(1,0), center (1,0),
  // theta = (2,3): Delta = 4 gamma theta^T P theta* / ||P theta|| = 2
  auto base = std::make_shared<models::ConstantModel>(2);
  RngStream rng(31);
  auto obj = wrap(base, RegMode::WeightDecay, 0.5, 0.0, 0.0, rng);
  Vector center(2);
  center << 1.0, 0.0;
  Matrix o = Matrix::Zero(2, 1);
  o(0, 0) = 1.0;
  const ReflectionSymmetry s(o, center);
  Vector theta(2);
  theta << 2.0, 3.0;
  CHECK(breaking_strength(obj, theta, s) == doctest::Approx(2.0));
}

TEST_CASE("breaking_strength vanishes for gamma = 0 on a symmetric loss") {
  RngStream rng(32);
  auto net = std::make_shared<models::TwoLayerNet>(2, 3, 1,
                                                   models::TwoLayerNet::Activation::Tanh);
  Dataset data;
  data.inputs.resize(6, 2);
  data.targets.resize(6, 1);
  for (Index i = 0; i < 6; ++i) {
    data.inputs(i, 0) = rng.gaussian(1.0);
    data.inputs(i, 1) = rng.gaussian(1.0);
    data.targets(i, 0) = rng.gaussian(1.0);
  }
  auto obj = wrap(net, RegMode::None, 0.0, 0.0, 0.0, rng);
  const auto s = net->unit_sign_flip(0);
  const Vector theta = net->random_init(rng, 1.0);
  CHECK(std::abs(breaking_strength(obj, theta, s, Batch::full(data))) <= 1e-10);
}

TEST_CASE("breaking_strength is gaussian with std 4*gamma*sigma0 over bias draws") {
  // Monte-Carlo against the exact constant-loss expression
  const Index d = 12;
  auto base = std::make_shared<models::ConstantModel>(d);
  const double gamma = 0.2;
  const double sigma0_rel = 0.5;
  RngStream rng(33);
  auto obj = wrap(base, RegMode::Syre, gamma, sigma0_rel, 0.0, rng);
  const double sigma0_abs = obj.sigma0_abs();
  Matrix o = Matrix::Zero(d, 1);
  o(3, 0) = 1.0;
  const auto s = ReflectionSymmetry::about_origin(o);
  const Vector theta = Vector::Ones(d);

  const int draws = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < draws; ++t) {
    const auto fresh = obj.resample_bias(rng);
    const double delta = breaking_strength(fresh, theta, s);
    sum += delta;
    sum_sq += delta * delta;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt(sum_sq / draws - mean * mean);
  const double expected = 4.0 * gamma * sigma0_abs;
  CHECK(std::abs(mean) <= 5.0 * expected / std::sqrt(static_cast<double>(draws)));
  CHECK(sd / expected >= 0.95);
  CHECK(sd / expected <= 1.05);
}

TEST_CASE("breaking_strength refuses symmetric points") {
  auto base = std::make_shared<models::ConstantModel>(2);
  RngStream rng(34);
  auto obj = wrap(base, RegMode::WeightDecay, 0.5, 0.0, 0.0, rng);
  const auto s = axis_reflection(2, 0);
  Vector theta(2);
  theta << 0.0, 1.0;  // P theta = 0
  CHECK_THROWS_AS(breaking_strength(obj, theta, s), std::domain_error);
}

TEST_CASE("grad_projection_norm at symmetric points") {
  RngStream rng(35);
  auto net = std::make_shared<models::TwoLayerNet>(3, 4, 2,
                                                   models::TwoLayerNet::Activation::Tanh);
  Dataset data;
  data.inputs.resize(10, 3);
  data.targets.resize(10, 2);
  for (Index i = 0; i < 10; ++i) {
    for (Index j = 0; j < 3; ++j) data.inputs(i, j) = rng.gaussian(1.0);
    for (Index j = 0; j < 2; ++j) data.targets(i, j) = rng.gaussian(1.0);
  }
  const Batch batch = Batch::full(data);
  const auto s = net->unit_sign_flip(0);

  // unregularized symmetric model at P theta = 0: the gradient stays in the
  // symmetric subspace
  Vector theta = net->random_init(rng, 0.7);
  theta = net->with_dead_units(theta, {0});
  auto plain = wrap(net, RegMode::None, 0.0, 0.0, 0.0, rng);
  CHECK(grad_projection_norm(plain, theta, s, batch) <= 1e-10);

  // bias plus decay makes the projected gradient strictly positive,
  // median over draws >= 0.3 gamma sigma0 sqrt(rank)
  const double gamma = 0.01;
  const double sigma0_rel = 0.1;
  auto obj = wrap(net, RegMode::Syre, gamma, sigma0_rel, 0.0, rng);
  const double sigma0_abs = obj.sigma0_abs();
  std::vector<double> norms;
  for (int t = 0; t < 400; ++t) {
    const auto fresh = obj.resample_bias(rng);
    norms.push_back(grad_projection_norm(fresh, theta, s, batch));
    CHECK(norms.back() > 0.0);
  }
  std::sort(norms.begin(), norms.end());
  const double median = norms[norms.size() / 2];
  CHECK(median >= 0.3 * gamma * sigma0_abs * std::sqrt(static_cast<double>(s.rank())));

  // gamma = 0 with a bias equals the plain gradient at the same model point
  auto biased_only = wrap(net, RegMode::Syre, 0.0, sigma0_rel, 0.0, rng);
  const Vector probe = net->random_init(rng, 0.5);
  CHECK(grad_projection_norm(biased_only, probe, s, batch) ==
        doctest::Approx(grad_projection_norm(plain, probe, s, batch)));
}
