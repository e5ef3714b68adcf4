#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "syre/model.hpp"
#include "syre/rng.hpp"

namespace syre::idx {

struct IdxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw IDX payloads: big-endian magic (0x00000803 images, 0x00000801 labels),
// big-endian 32-bit dims, then unsigned bytes.
struct Images {
  Index count = 0, rows = 0, cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
};
struct Labels {
  std::vector<std::uint8_t> values;
};

Images read_images(const std::filesystem::path& path);
Labels read_labels(const std::filesystem::path& path);
void write_images(const Images& images, const std::filesystem::path& path);
void write_labels(const Labels& labels, const std::filesystem::path& path);

// Dataset with pixels scaled to [0,1] then by alpha, one-hot labels over
// `classes`. subset = 0 keeps everything.
Dataset load_mnist_idx(const std::filesystem::path& image_path,
                       const std::filesystem::path& label_path, Index subset = 0,
                       double alpha = 1.0, Index classes = 10);

// Offline stand-in: gaussian inputs labeled by a fixed random linear scorer.
Dataset synthetic_classification(RngStream& rng, Index n, Index d_in, Index classes,
                                 double alpha = 1.0);

}  // namespace syre::idx
