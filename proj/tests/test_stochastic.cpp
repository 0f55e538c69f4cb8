#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roughlab/stochastic.hpp"

using namespace roughlab;

TEST_CASE("Brownian increments have variance equal to the step") {
  const Dissection grid = Dissection::uniform(0.0, 1.0, 16);
  const std::size_t m = 4000;
  // Per-path mean of squared increments, averaged across paths.
  const McEstimate est = mc_run(
      [&](const RngSpec& r) {
        const PiecewisePath b = sample_brownian(grid, 2, r);
        double s = 0.0;
        for (std::size_t j = 0; j + 1 < b.size(); ++j) s += b.increment(j)[1] * b.increment(j)[1];
        return s;
      },
      m, {7, 0});
  CHECK(est.within(1.0, 3.0));
  CHECK(est.count == m);
}

TEST_CASE("E|dB1||dB2| equals (2/pi) times the step") {
  const Dissection grid = Dissection::uniform(0.0, 1.0, 8);
  const McEstimate est = mc_run(
      [&](const RngSpec& r) {
        const auto inc = sample_brownian(grid, 2, r).increment(3);
        return std::abs(inc[0] * inc[1]) / grid.mesh();
      },
      20000, {9, 0});
  CHECK(est.within(2.0 / std::numbers::pi, 3.0));
}

TEST_CASE("sampling is reproducible and streams are distinct") {
  const Dissection grid = Dissection::uniform(0.0, 1.0, 32);
  const PiecewisePath a = sample_brownian(grid, 3, {5, 2});
  const PiecewisePath b = sample_brownian(grid, 3, {5, 2});
  const PiecewisePath c = sample_brownian(grid, 3, {5, 3});
  const PiecewisePath d = sample_brownian(grid, 3, {6, 2});
  CHECK(std::ranges::equal(a.values(), b.values()));
  CHECK_FALSE(std::ranges::equal(a.values(), c.values()));
  CHECK_FALSE(std::ranges::equal(a.values(), d.values()));
  for (int i = 0; i < 3; ++i) CHECK(a.point(0)[i] == 0.0);
  CHECK(RngSpec{5, 2}.with_stream(3).stream == 3);
}

TEST_CASE("Monte-Carlo harness: parallel equals serial, degenerate closures") {
  const McClosure f = [](const RngSpec& r) {
    auto g = r.engine();
    std::normal_distribution<double> n;
    return 1.5 + n(g);
  };
  const McEstimate p = mc_run(f, 5000, {3, 100});
  const McEstimate s = mc_run_serial(f, 5000, {3, 100});
  CHECK(p.mean == s.mean);
  CHECK(p.std_error == s.std_error);
  CHECK(p.within(1.5, 3.0));
  CHECK(p.std_error == doctest::Approx(1.0 / std::sqrt(5000.0)).epsilon(0.05));

  const McEstimate c = mc_run([](const RngSpec&) { return 2.0; }, 100, {1, 0});
  CHECK(c.mean == 2.0);
  CHECK(c.std_error == 0.0);
  CHECK(c.z_score(2.0) == 0.0);
  CHECK(std::isinf(c.z_score(2.1)));

  const auto v = mc_run([](const RngSpec& r) { return std::vector<double>{1.0, static_cast<double>(r.stream)}; },
                        10, {1, 0});
  REQUIRE(v.size() == 2);
  CHECK(v[0].mean == 1.0);
  CHECK(v[1].mean == doctest::Approx(4.5));

  const McEstimate sm = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(sm.mean == 2.5);
  CHECK(sm.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}
