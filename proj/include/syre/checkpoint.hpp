#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "syre/regularizer.hpp"

namespace syre {

// Text checkpoint carrying everything needed to re-evaluate a trained
// objective: dimension, optimization-coordinate theta, the static bias theta0,
// the diagonal D, mode, gamma, and the run seed. Values are written as C hex
// floats, so the round trip is bit-exact within a build.
struct Checkpoint {
  Index dim = 0;
  Vector theta;
  Vector theta0;
  Vector reg_diag;
  std::string mode = "none";
  double gamma = 0.0;
  std::uint64_t seed = 0;
};

Checkpoint make_checkpoint(const RegularizedObjective& obj, const Vector& theta,
                           std::uint64_t seed);

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace syre
