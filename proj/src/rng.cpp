#include "syre/rng.hpp"

#include <cmath>
#include <numbers>

namespace syre {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), state_(mix64(seed + kGolden * (stream_id + 1))) {}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::gaussian(double sigma) {
  if (sigma == 0.0) return 0.0;
  if (have_spare_) {
    have_spare_ = false;
    return sigma * spare_;
  }
  // u1 in (0, 1] so log is finite
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return sigma * r * std::cos(phi);
}

RngStream RngStream::fork(std::uint64_t stream_id) const {
  return RngStream(mix64(seed_ ^ mix64(stream_id + 0x5851F42D4C957F2DULL)));
}

}  // namespace syre
