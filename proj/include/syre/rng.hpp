#pragma once

#include <cstdint>

namespace syre {

// Counter-based splittable PRNG (splitmix64 core) with Box-Muller gaussians.
// Identical seed gives an identical sample sequence within a build; parallel
// trials fork independent streams via fork(stream_id).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  // uniform in [0, 1)
  double uniform();
  double uniform(double lo, double hi);

  // N(0, sigma^2); sigma == 0 returns exactly 0
  double gaussian(double sigma = 1.0);

  // independent child stream derived from (seed, stream_id)
  RngStream fork(std::uint64_t stream_id) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t state_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;  // cached unit normal
};

}  // namespace syre
