#include "syre/idx.hpp"

#include <fstream>

namespace syre::idx {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_u32_be(std::istream& in, std::streamoff offset, const char* what) {
  std::uint8_t bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (in.gcount() != 4) {
    throw IdxError(std::string("IDX parse error at byte ") + std::to_string(offset) +
                   ": truncated " + what);
  }
  return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
         (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
  const std::uint8_t bytes[4] = {std::uint8_t(v >> 24), std::uint8_t(v >> 16),
                                 std::uint8_t(v >> 8), std::uint8_t(v)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

}  // namespace

Images read_images(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxError("cannot open IDX file: " + path.string());
  const std::uint32_t magic = read_u32_be(in, 0, "magic");
  if (magic != kImageMagic) {
    throw IdxError("IDX parse error at byte 0: bad image magic in " + path.string());
  }
  Images img;
  img.count = read_u32_be(in, 4, "image count");
  img.rows = read_u32_be(in, 8, "row count");
  img.cols = read_u32_be(in, 12, "column count");
  const size_t total = static_cast<size_t>(img.count) * img.rows * img.cols;
  img.pixels.resize(total);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(total));
  if (static_cast<size_t>(in.gcount()) != total) {
    throw IdxError("IDX parse error at byte " + std::to_string(16 + in.gcount()) +
                   ": truncated pixel data");
  }
  return img;
}

Labels read_labels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxError("cannot open IDX file: " + path.string());
  const std::uint32_t magic = read_u32_be(in, 0, "magic");
  if (magic != kLabelMagic) {
    throw IdxError("IDX parse error at byte 0: bad label magic in " + path.string());
  }
  const std::uint32_t count = read_u32_be(in, 4, "label count");
  Labels labels;
  labels.values.resize(count);
  in.read(reinterpret_cast<char*>(labels.values.data()), count);
  if (static_cast<std::uint32_t>(in.gcount()) != count) {
    throw IdxError("IDX parse error at byte " + std::to_string(8 + in.gcount()) +
                   ": truncated label data");
  }
  return labels;
}

void write_images(const Images& images, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IdxError("cannot open IDX file for writing: " + path.string());
  write_u32_be(out, kImageMagic);
  write_u32_be(out, static_cast<std::uint32_t>(images.count));
  write_u32_be(out, static_cast<std::uint32_t>(images.rows));
  write_u32_be(out, static_cast<std::uint32_t>(images.cols));
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
}

void write_labels(const Labels& labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IdxError("cannot open IDX file for writing: " + path.string());
  write_u32_be(out, kLabelMagic);
  write_u32_be(out, static_cast<std::uint32_t>(labels.values.size()));
  out.write(reinterpret_cast<const char*>(labels.values.data()),
            static_cast<std::streamsize>(labels.values.size()));
}

Dataset load_mnist_idx(const std::filesystem::path& image_path,
                       const std::filesystem::path& label_path, Index subset, double alpha,
                       Index classes) {
  const Images img = read_images(image_path);
  const Labels lab = read_labels(label_path);
  if (static_cast<Index>(lab.values.size()) != img.count) {
    throw IdxError("IDX image/label counts differ");
  }
  const Index n = subset > 0 ? std::min(subset, img.count) : img.count;
  const Index d = img.rows * img.cols;
  Dataset data;
  data.alpha = alpha;
  data.inputs.resize(n, d);
  data.targets = Matrix::Zero(n, classes);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      data.inputs(i, j) = alpha * static_cast<double>(img.pixels[i * d + j]) / 255.0;
    }
    const Index label = lab.values[static_cast<size_t>(i)];
    if (label >= classes) throw IdxError("IDX label exceeds class count");
    data.targets(i, label) = 1.0;
  }
  return data;
}

Dataset synthetic_classification(RngStream& rng, Index n, Index d_in, Index classes,
                                 double alpha) {
  Matrix scorer(classes, d_in);
  for (Index k = 0; k < classes; ++k)
    for (Index j = 0; j < d_in; ++j) scorer(k, j) = rng.gaussian(1.0);
  Dataset data;
  data.alpha = alpha;
  data.inputs.resize(n, d_in);
  data.targets = Matrix::Zero(n, classes);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d_in; ++j) data.inputs(i, j) = alpha * rng.gaussian(1.0);
    Index best = 0;
    (scorer * data.inputs.row(i).transpose()).maxCoeff(&best);
    data.targets(i, best) = 1.0;
  }
  return data;
}

}  // namespace syre::idx
