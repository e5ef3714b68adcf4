#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "syre/checkpoint.hpp"
#include "syre/config.hpp"
#include "syre/csv.hpp"
#include "syre/idx.hpp"
#include "syre/linalg.hpp"
#include "syre/models.hpp"

using namespace syre;

namespace {
std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "syre_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

const config::Schema kSchema = {
    {"alpha", {config::FieldType::Real, "1.0", "scale"}},
    {"steps", {config::FieldType::Integer, "100", "steps"}},
    {"name", {config::FieldType::Text, "default", "label"}},
    {"flag", {config::FieldType::Boolean, "false", "switch"}},
};
}  // namespace

TEST_CASE("config parsing, defaults and echo") {
  const auto cfg = config::parse_text("alpha = 2.5\n# comment\n\nflag = true\n", kSchema);
  CHECK(cfg.get_real("alpha") == 2.5);
  CHECK(cfg.get_int("steps") == 100);
  CHECK(cfg.get_text("name") == "default");
  CHECK(cfg.get_bool("flag"));

  // the serialized echo re-parses to an identical config
  const auto echoed = config::parse_text(cfg.serialize(), kSchema);
  CHECK(echoed == cfg);
}

TEST_CASE("config rejects unknown keys and bad types") {
  CHECK_THROWS_AS(config::parse_text("bogus = 1\n", kSchema), config::ConfigError);
  CHECK_THROWS_AS(config::parse_text("steps = banana\n", kSchema), config::ConfigError);
  CHECK_THROWS_AS(config::parse_text("alpha == 1\n", kSchema), config::ConfigError);
  CHECK_THROWS_AS(config::parse_text("alpha = 1\nalpha = 2\n", kSchema), config::ConfigError);
}

TEST_CASE("result tables round-trip through csv") {
  csv::ResultTable t({"x", "label", "y"});
  t.add_row({csv::format_real(1.5), "first", csv::format_int(3)});
  t.add_row({csv::format_real(-0.25), "second", csv::format_int(-7)});
  const auto path = temp_dir() / "table.csv";
  t.save(path);
  const auto loaded = csv::ResultTable::load(path);
  CHECK(loaded.columns() == t.columns());
  CHECK(loaded.rows() == 2);
  CHECK(loaded.real_at(0, "x") == 1.5);
  CHECK(loaded.text_at(1, "label") == "second");
  CHECK(loaded.real_at(1, "y") == -7.0);
  CHECK(loaded.to_csv() == t.to_csv());
}

TEST_CASE("quantiles") {
  std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  CHECK(csv::median(v) == doctest::Approx(2.5));
  CHECK(csv::quantile(v, 0.0) == 1.0);
  CHECK(csv::quantile(v, 1.0) == 4.0);
}

TEST_CASE("idx fixtures round-trip and parse errors name the offset") {
  const auto dir = temp_dir();
  idx::Images img;
  img.count = 4;
  img.rows = 28;
  img.cols = 28;
  img.pixels.resize(4 * 28 * 28);
  RngStream rng(91);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.next_u64() % 256);
  idx::Labels lab;
  lab.values = {0, 3, 9, 1};
  idx::write_images(img, dir / "imgs.idx");
  idx::write_labels(lab, dir / "labels.idx");

  const auto img2 = idx::read_images(dir / "imgs.idx");
  CHECK(img2.count == 4);
  CHECK(img2.pixels == img.pixels);
  const auto lab2 = idx::read_labels(dir / "labels.idx");
  CHECK(lab2.values == lab.values);

  const Dataset data = idx::load_mnist_idx(dir / "imgs.idx", dir / "labels.idx");
  CHECK(data.size() == 4);
  CHECK(data.input_dim() == 784);
  CHECK(data.targets(1, 3) == 1.0);
  CHECK(data.inputs.maxCoeff() <= 1.0);

  // alpha rescales every pixel
  const Dataset half = idx::load_mnist_idx(dir / "imgs.idx", dir / "labels.idx", 0, 0.5);
  CHECK(half.inputs.maxCoeff() <= 0.5);
  CHECK((half.inputs * 2.0 - data.inputs).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(half.alpha == 0.5);

  // wrong magic errors at byte 0
  {
    std::ofstream bad(dir / "bad.idx", std::ios::binary);
    const char junk[8] = {0, 0, 1, 42, 0, 0, 0, 0};
    bad.write(junk, 8);
  }
  try {
    idx::read_images(dir / "bad.idx");
    FAIL("expected IdxError");
  } catch (const idx::IdxError& e) {
    CHECK(std::string(e.what()).find("byte 0") != std::string::npos);
  }

  // truncated pixels error past the header
  {
    std::ofstream trunc(dir / "trunc.idx", std::ios::binary);
    const unsigned char header[16] = {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2};
    trunc.write(reinterpret_cast<const char*>(header), 16);
    trunc.put(5);
  }
  CHECK_THROWS_AS(idx::read_images(dir / "trunc.idx"), idx::IdxError);
}

TEST_CASE("synthetic classification fallback") {
  RngStream rng(92);
  const Dataset data = idx::synthetic_classification(rng, 100, 8, 5);
  CHECK(data.size() == 100);
  CHECK(data.input_dim() == 8);
  CHECK(data.target_dim() == 5);
  for (Index i = 0; i < data.size(); ++i) {
    CHECK(data.targets.row(i).sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  RngStream rng(93);
  auto base = std::make_shared<models::ReparamRegression>(6);
  auto obj = wrap(base, RegMode::Syre, 0.07, 1.3, 0.0, rng);
  const Vector theta = linalg::gaussian_vector(rng, 12, 0.8);
  const Checkpoint c = make_checkpoint(obj, theta, 4242);
  const auto path = temp_dir() / "run.ckpt";
  save_checkpoint(c, path);
  const Checkpoint back = load_checkpoint(path);
  CHECK(back.dim == c.dim);
  CHECK(back.mode == "syre");
  CHECK(back.gamma == c.gamma);
  CHECK(back.seed == 4242);
  CHECK(back.theta == c.theta);      // bitwise via hex floats
  CHECK(back.theta0 == c.theta0);
  CHECK(back.reg_diag == c.reg_diag);
  // the stored bias reconstructs the model-coordinate parameters
  CHECK(((back.theta + back.theta0) - obj.to_model(theta)).norm() == 0.0);
}
