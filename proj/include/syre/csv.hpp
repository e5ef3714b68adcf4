#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace syre::csv {

// Column-named result table; cells are stored as formatted strings so the
// emitted files are byte-stable. Numeric cells use %.17g, enough to
// round-trip doubles.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);

  size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::string>& row(size_t i) const { return rows_[i]; }

  double real_at(size_t row, const std::string& column) const;
  std::string text_at(size_t row, const std::string& column) const;
  std::vector<double> column_reals(const std::string& column) const;

  std::string to_csv() const;
  void save(const std::filesystem::path& path) const;

  static ResultTable load(const std::filesystem::path& path);

 private:
  size_t column_index(const std::string& column) const;

  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_real(double x);
std::string format_int(long x);

// summary helpers used by reports
double median(std::vector<double> values);
double quantile(std::vector<double> values, double q);  // linear interpolation

}  // namespace syre::csv
