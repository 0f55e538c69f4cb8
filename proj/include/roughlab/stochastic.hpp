#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "roughlab/path.hpp"

namespace roughlab {

/// One sample path per (seed, stream). The engine is std::mt19937_64 seeded
/// with std::seed_seq{seed_lo, seed_hi, stream_lo, stream_hi}; Gaussians come
/// from std::normal_distribution<double> (Marsaglia polar method in
/// libstdc++), drawn coordinate by coordinate, step by step.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::mt19937_64 engine() const;
  RngSpec with_stream(std::uint64_t s) const { return {seed, s}; }
};

/// Brownian motion in R^d sampled on the grid and joined linearly, started at 0.
PiecewisePath sample_brownian(const Dissection& grid, int d, const RngSpec& rng);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample stdev / sqrt(count)
  std::size_t count = 0;

  double z_score(double target) const;
  bool within(double target, double n_se) const;
};

using McClosure = std::function<double(const RngSpec&)>;
using McVectorClosure = std::function<std::vector<double>(const RngSpec&)>;

/// Streams base.stream, base.stream + 1, ...; samples run in parallel, are
/// stored by stream and reduced in stream order, so the result does not depend
/// on the thread count.
McEstimate mc_run(const McClosure& f, std::size_t count, const RngSpec& base);
std::vector<McEstimate> mc_run(const McVectorClosure& f, std::size_t count, const RngSpec& base);
/// Single-threaded version of the scalar harness.
McEstimate mc_run_serial(const McClosure& f, std::size_t count, const RngSpec& base);

/// Mean and standard error of a sample.
McEstimate summarize(const std::vector<double>& xs);

}  // namespace roughlab
