#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>

#include "syre/csv.hpp"
#include "syre/experiments.hpp"

namespace syre::experiments {

namespace {

using csv::ResultTable;

bool is_numeric_column(const ResultTable& t, const std::string& col) {
  if (t.rows() == 0) return false;
  for (size_t r = 0; r < t.rows(); ++r) {
    const std::string& cell = t.text_at(r, col);
    char* end = nullptr;
    std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') return false;
  }
  return true;
}

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
};

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  double ss_res = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double pred = my + fit.slope * (lx[i] - mx);
    ss_res += (ly[i] - pred) * (ly[i] - pred);
  }
  if (n > 2) {
    fit.stderr_slope = std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx);
  }
  return fit;
}

void summarize_generic(const ResultTable& t, std::ostream& out) {
  out << "  rows: " << t.rows() << '\n';
  if (t.rows() == 0) {
    out << "  (no rows)\n";
    return;
  }
  for (const std::string& col : t.columns()) {
    if (!is_numeric_column(t, col)) continue;
    std::vector<double> vals = t.column_reals(col);
    out << "  " << col << ": median " << csv::format_real(csv::median(vals)) << "  iqr ["
        << csv::format_real(csv::quantile(vals, 0.25)) << ", "
        << csv::format_real(csv::quantile(vals, 0.75)) << "]\n";
  }
}

// median |Delta| per gamma*sigma0 grid point, then a log-log slope fit
void summarize_theorem3(const ResultTable& t, std::ostream& out) {
  std::set<double> grid;
  for (size_t r = 0; r < t.rows(); ++r) grid.insert(t.real_at(r, "gamma_sigma0"));
  std::vector<double> xs, ys;
  for (double g : grid) {
    std::vector<double> abs_deltas;
    for (size_t r = 0; r < t.rows(); ++r) {
      if (t.real_at(r, "gamma_sigma0") == g) abs_deltas.push_back(t.real_at(r, "abs_delta"));
    }
    xs.push_back(g);
    ys.push_back(csv::median(abs_deltas));
  }
  const SlopeFit fit = fit_loglog(xs, ys);
  out << "  log-log slope of median |Delta| vs gamma*sigma0: " << csv::format_real(fit.slope)
      << " (stderr " << csv::format_real(fit.stderr_slope) << ", 95% ci +-"
      << csv::format_real(1.96 * fit.stderr_slope) << ")\n";
}

// Pareto frontier of (objective, degree), lower is better in both
void summarize_benchmark(const ResultTable& t, std::ostream& out) {
  for (const std::string spectrum : {"unstructured", "structured"}) {
    struct Point {
      double obj;
      double degree;
      std::string label;
    };
    std::vector<Point> points;
    for (size_t r = 0; r < t.rows(); ++r) {
      if (t.text_at(r, "spectrum") != spectrum) continue;
      points.push_back({t.real_at(r, "objective"), t.real_at(r, "degree"),
                        t.text_at(r, "method") + " gamma=" + t.text_at(r, "gamma") +
                            " phi=" + t.text_at(r, "phi") + " drop=" + t.text_at(r, "dropout") +
                            " sigma0=" + t.text_at(r, "sigma0_rel")});
    }
    if (points.empty()) continue;
    out << "  " << spectrum << " Pareto frontier (objective, degree):\n";
    for (const Point& p : points) {
      bool dominated = false;
      for (const Point& q : points) {
        if ((q.obj < p.obj && q.degree <= p.degree) || (q.obj <= p.obj && q.degree < p.degree)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) {
        out << "    (" << csv::format_real(p.obj) << ", " << p.degree << ")  " << p.label << '\n';
      }
    }
  }
}

void write_plot_script(const std::filesystem::path& dir, const std::string& stem) {
  std::ofstream gp(dir / ("plot_" + stem + ".gnuplot"));
  gp << "# gnuplot script for " << stem << ".csv\n";
  gp << "set datafile separator ','\n";
  gp << "set key autotitle columnhead\n";
  gp << "set term pngcairo size 900,600\n";
  gp << "set output '" << stem << ".png'\n";
  if (stem == "benchmark") {
    gp << "set xlabel 'objective'\nset ylabel 'degree of symmetry'\n";
    gp << "plot 'benchmark.csv' using 'objective':'degree' with points\n";
  } else if (stem == "theorem3") {
    gp << "set logscale xy\nset xlabel 'gamma*sigma0'\nset ylabel '|Delta|'\n";
    gp << "plot 'theorem3.csv' using 'gamma_sigma0':'abs_delta' with points\n";
  } else if (stem == "ridge") {
    gp << "set xlabel 'alpha'\nset ylabel 'test loss'\nset logscale y\n";
    gp << "plot 'ridge.csv' using 'alpha':'test_loss' with points\n";
  } else {
    gp << "plot '" << stem << ".csv' using 0:2 with points\n";
  }
}

}  // namespace

void write_report(const std::filesystem::path& dir, std::ostream& out) {
  std::vector<std::filesystem::path> csvs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") csvs.push_back(entry.path());
  }
  std::sort(csvs.begin(), csvs.end());
  if (csvs.empty()) {
    out << "no result tables in " << dir.string() << '\n';
    return;
  }
  for (const auto& path : csvs) {
    const ResultTable t = ResultTable::load(path);
    const std::string stem = path.stem().string();
    out << stem << ":\n";
    summarize_generic(t, out);
    if (stem == "theorem3" && t.rows() > 0) summarize_theorem3(t, out);
    if (stem == "benchmark" && t.rows() > 0) summarize_benchmark(t, out);
    write_plot_script(dir, stem);
    out << '\n';
  }
}

}  // namespace syre::experiments
