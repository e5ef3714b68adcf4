#include "syre/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace syre::csv {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("ResultTable: no columns");
}

void ResultTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw std::invalid_argument("ResultTable: row width does not match header");
  }
  rows_.push_back(std::move(cells));
}

size_t ResultTable::column_index(const std::string& column) const {
  const auto it = std::find(columns_.begin(), columns_.end(), column);
  if (it == columns_.end()) throw std::invalid_argument("ResultTable: no column " + column);
  return static_cast<size_t>(it - columns_.begin());
}

double ResultTable::real_at(size_t row, const std::string& column) const {
  return std::strtod(rows_.at(row)[column_index(column)].c_str(), nullptr);
}

std::string ResultTable::text_at(size_t row, const std::string& column) const {
  return rows_.at(row)[column_index(column)];
}

std::vector<double> ResultTable::column_reals(const std::string& column) const {
  const size_t idx = column_index(column);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(std::strtod(row[idx].c_str(), nullptr));
  return out;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) out << ',';
    out << columns_[i];
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

void ResultTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("ResultTable: cannot open " + path.string());
  out << to_csv();
}

ResultTable ResultTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ResultTable: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("ResultTable: empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.push_back("");
    return cells;
  };
  ResultTable table(split(line));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    table.add_row(split(line));
  }
  return table;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_int(long x) { return std::to_string(x); }

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<size_t>(pos);
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace syre::csv
