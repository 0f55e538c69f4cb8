#include "roughlab/stochastic.hpp"

#include <cmath>
#include <stdexcept>

namespace roughlab {

std::mt19937_64 RngSpec::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

PiecewisePath sample_brownian(const Dissection& grid, int d, const RngSpec& rng) {
  if (d < 1) throw std::invalid_argument("sample_brownian: d must be positive");
  auto gen = rng.engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> vals(grid.size() * d, 0.0);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double sd = std::sqrt(grid[j] - grid[j - 1]);
    for (int i = 0; i < d; ++i) vals[j * d + i] = vals[(j - 1) * d + i] + sd * normal(gen);
  }
  return PiecewisePath(grid, d, std::move(vals));
}

double McEstimate::z_score(double target) const {
  if (std_error == 0.0) return mean == target ? 0.0 : INFINITY;
  return (mean - target) / std_error;
}

bool McEstimate::within(double target, double n_se) const { return std::abs(z_score(target)) <= n_se; }

McEstimate summarize(const std::vector<double>& xs) {
  McEstimate e;
  e.count = xs.size();
  if (xs.empty()) return e;
  double s = 0.0;
  for (double x : xs) s += x;
  e.mean = s / static_cast<double>(xs.size());
  if (xs.size() < 2) return e;
  double q = 0.0;
  for (double x : xs) q += (x - e.mean) * (x - e.mean);
  e.std_error = std::sqrt(q / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return e;
}

McEstimate mc_run(const McClosure& f, std::size_t count, const RngSpec& base) {
  if (count < 2) throw std::invalid_argument("mc_run: need at least two samples");
  std::vector<double> out(count);
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) out[i] = f(base.with_stream(base.stream + static_cast<std::uint64_t>(i)));
  return summarize(out);
}

std::vector<McEstimate> mc_run(const McVectorClosure& f, std::size_t count, const RngSpec& base) {
  if (count < 2) throw std::invalid_argument("mc_run: need at least two samples");
  std::vector<std::vector<double>> out(count);
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) out[i] = f(base.with_stream(base.stream + static_cast<std::uint64_t>(i)));
  const std::size_t m = out.front().size();
  std::vector<McEstimate> est;
  std::vector<double> col(count);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t i = 0; i < count; ++i) {
      if (out[i].size() != m) throw std::runtime_error("mc_run: closure output size varies");
      col[i] = out[i][c];
    }
    est.push_back(summarize(col));
  }
  return est;
}

McEstimate mc_run_serial(const McClosure& f, std::size_t count, const RngSpec& base) {
  if (count < 2) throw std::invalid_argument("mc_run: need at least two samples");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = f(base.with_stream(base.stream + i));
  return summarize(out);
}

}  // namespace roughlab
