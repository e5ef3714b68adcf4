#include <doctest.h>

#include <cmath>

#include "syre/rng.hpp"

using namespace syre;

TEST_CASE("same seed gives identical streams") {
  RngStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42), d(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.gaussian(1.0) == d.gaussian(1.0));
  }
}

TEST_CASE("different seeds and forks decorrelate") {
  RngStream a(1), b(2);
  CHECK(a.next_u64() != b.next_u64());
  RngStream parent(7);
  RngStream f1 = parent.fork(0);
  RngStream f2 = parent.fork(1);
  CHECK(f1.next_u64() != f2.next_u64());
}

TEST_CASE("gaussian moments") {
  RngStream rng(123);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.gaussian(1.0);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) <= 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var >= 0.98);
  CHECK(var <= 1.02);
}

TEST_CASE("sigma zero gives exact zeros") {
  RngStream rng(9);
  for (int i = 0; i < 10; ++i) CHECK(rng.gaussian(0.0) == 0.0);
}

TEST_CASE("uniform stays in range") {
  RngStream rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(0.9, 1.1);
    CHECK(u >= 0.9);
    CHECK(u <= 1.1);
  }
}
