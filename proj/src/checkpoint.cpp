#include "syre/checkpoint.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace syre {

namespace {

constexpr const char* kHeader = "syre-checkpoint v1";

std::string hex_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

void write_vector(std::ostream& out, const char* name, const Vector& v) {
  out << name;
  for (Index i = 0; i < v.size(); ++i) out << ' ' << hex_double(v(i));
  out << '\n';
}

Vector read_vector(std::istream& in, const std::string& expected, Index dim) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint: truncated file");
  std::istringstream ss(line);
  std::string name;
  ss >> name;
  if (name != expected) throw std::runtime_error("checkpoint: expected field " + expected);
  Vector v(dim);
  std::string tok;
  for (Index i = 0; i < dim; ++i) {
    if (!(ss >> tok)) throw std::runtime_error("checkpoint: short vector for " + expected);
    v(i) = std::strtod(tok.c_str(), nullptr);
  }
  return v;
}

}  // namespace

Checkpoint make_checkpoint(const RegularizedObjective& obj, const Vector& theta,
                           std::uint64_t seed) {
  Checkpoint c;
  c.dim = obj.dim();
  c.theta = theta;
  c.theta0 = obj.bias();
  c.reg_diag = obj.reg_diag();
  c.mode = to_string(obj.mode());
  c.gamma = obj.gamma();
  c.seed = seed;
  return c;
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
  out << kHeader << '\n';
  out << "d " << c.dim << '\n';
  out << "mode " << c.mode << '\n';
  out << "gamma " << hex_double(c.gamma) << '\n';
  out << "seed " << c.seed << '\n';
  write_vector(out, "theta", c.theta);
  write_vector(out, "theta0", c.theta0);
  write_vector(out, "D", c.reg_diag);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error("checkpoint: bad header");
  }
  Checkpoint c;
  std::string key;
  in >> key >> c.dim;
  if (key != "d") throw std::runtime_error("checkpoint: expected field d");
  in >> key >> c.mode;
  if (key != "mode") throw std::runtime_error("checkpoint: expected field mode");
  std::string value;
  in >> key >> value;
  if (key != "gamma") throw std::runtime_error("checkpoint: expected field gamma");
  c.gamma = std::strtod(value.c_str(), nullptr);
  in >> key >> c.seed;
  if (key != "seed") throw std::runtime_error("checkpoint: expected field seed");
  std::getline(in, line);  // finish the seed line
  c.theta = read_vector(in, "theta", c.dim);
  c.theta0 = read_vector(in, "theta0", c.dim);
  c.reg_diag = read_vector(in, "D", c.dim);
  return c;
}

}  // namespace syre
