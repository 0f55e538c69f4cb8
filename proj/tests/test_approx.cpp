#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "roughlab/approx.hpp"
#include "roughlab/experiments.hpp"
#include "roughlab/metrics.hpp"
#include "roughlab/stochastic.hpp"

using namespace roughlab;

TEST_CASE("perturbation from terms, tensor and JSON") {
  const TensorShape s(2, 2);
  const PerturbationSpec v = PerturbationSpec::from_terms(s, {{BracketWord({2, 1}), 0.4}});
  CHECK(v.tensor().coeff({1, 2}) == doctest::Approx(0.4));
  CHECK(v.tensor().coeff({2, 1}) == doctest::Approx(-0.4));
  CHECK_FALSE(v.is_zero());
  CHECK(PerturbationSpec::zero(s).is_zero());

  const PerturbationSpec w = PerturbationSpec::from_tensor(v.tensor());
  CHECK((w.tensor() - v.tensor()).max_abs() == 0.0);
  TruncatedTensor rebuilt(s);
  for (const auto& t : w.terms()) rebuilt += t.coeff * bracket_word_tensor(t.word, s).tensor();
  CHECK((rebuilt - v.tensor()).max_abs() < 1e-14);

  const PerturbationSpec j = PerturbationSpec::from_json(v.to_json(), s);
  CHECK((j.tensor() - v.tensor()).max_abs() == 0.0);

  CHECK_THROWS_AS(PerturbationSpec::from_terms(s, {{BracketWord({1}), 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(PerturbationSpec::from_terms(s, {{BracketWord({1, 2}), NAN}}), std::invalid_argument);
  CHECK_THROWS_AS(PerturbationSpec::from_json("{", s), std::invalid_argument);
  CHECK_THROWS_AS(PerturbationSpec::from_json("[{\"word\":[1,2]}]", s), std::invalid_argument);
  CHECK_THROWS_AS(PerturbationSpec::from_tensor(TruncatedTensor::letter(s, 1)), std::invalid_argument);
  TruncatedTensor sym(s);
  sym.coeff({1, 2}) = 1.0;
  sym.coeff({2, 1}) = 1.0;
  CHECK_THROWS_AS(PerturbationSpec::from_tensor(sym), std::invalid_argument);
}

TEST_CASE("from_tensor decomposes random top-level Lie elements") {
  std::mt19937_64 g(31);
  for (int d = 2; d <= 3; ++d)
    for (int n = 2; n <= 4; ++n) {
      const TensorShape s(d, n);
      TruncatedTensor v(s);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::uniform_int_distribution<int> l(1, d);
      for (int r = 0; r < 4; ++r) {
        Word w(n);
        for (auto& a : w) a = l(g);
        v += u(g) * bracket_word_tensor(BracketWord(w), s).tensor();
      }
      const PerturbationSpec p = PerturbationSpec::from_tensor(v);
      TruncatedTensor rebuilt(s);
      for (const auto& t : p.terms()) rebuilt += t.coeff * bracket_word_tensor(t.word, s).tensor();
      CHECK((rebuilt - v).max_abs() < 1e-12);
    }
}

TEST_CASE("central loop is closed and has signature exp(lambda v)") {
  for (int d = 2; d <= 3; ++d)
    for (int n = 2; n <= 4; ++n) {
      const TensorShape s(d, n);
      const PerturbationSpec v = default_perturbation(s, 1.0);
      for (double lam : {0.3, 2.0}) {
        const PiecewisePath loop = central_loop(v, lam);
        CHECK(loop.start_time() == 0.0);
        CHECK(loop.end_time() == 1.0);
        const auto end = loop.point(loop.size() - 1);
        for (double c : end) CHECK(c == 0.0);
        const LieElement l = log(chen_signature(loop, n));
        CHECK((l.tensor() - lam * v.tensor()).max_abs() < 1e-12);
        CHECK(path_length(loop) == doctest::Approx(std::pow(lam, 1.0 / n) * central_loop_length(v)));
      }
    }
  const TensorShape s(2, 3);
  // Negative coefficients reverse the loop.
  const PerturbationSpec neg = PerturbationSpec::from_terms(s, {{BracketWord({1, 2, 1}), -0.7}});
  CHECK((log(chen_signature(central_loop(neg, 1.0), 3)).tensor() - neg.tensor()).max_abs() < 1e-12);
  CHECK_THROWS_AS(central_loop(neg, 0.0), std::invalid_argument);
  const PiecewisePath z = central_loop(PerturbationSpec::zero(s), 1.0);
  CHECK(path_length(z) == 0.0);
}

TEST_CASE("Sussmann approximation carries exp(v (t - s)) on the grid") {
  const TensorShape s(2, 2);
  const PerturbationSpec v = default_perturbation(s, 1.0);
  const PiecewisePath x = smooth_driver(2, 64);
  const Dissection grid = Dissection::uniform(0.0, 1.0, 16);
  const PiecewisePath xn = sussmann_approx(x, grid, v);
  const PiecewisePath xd = sample_on(x, grid);
  const GridRoughPath p = extract_perturbation(xn, xd, grid, 2);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK((p[i].tensor() - exp(grid[i] * v.lie()).tensor()).max_abs() < 1e-12);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto a = xn.evaluate(grid[i]), b = x.evaluate(grid[i]);
    CHECK(a[0] == doctest::Approx(b[0]));
    CHECK(a[1] == doctest::Approx(b[1]));
  }
  const double c3 = homogeneous_norm(exp(v.lie()));
  const ConditionReport rep = check_condition_i(xn, xd, grid, 0.5, 2.0, 2.0 * central_loop_length(v), c3 * 1.01);
  CHECK(rep.passed());
  CHECK(rep.c1_observed <= 2.0 + 1e-9);
  CHECK(rep.intervals.size() == grid.size() - 1);
  // Too small a loop constant must fail.
  CHECK_FALSE(check_condition_i(xn, xd, grid, 0.5, 2.0, 0.1, c3).speed_bound_holds);
  CHECK_THROWS_AS(sussmann_approx(smooth_driver(3, 8), grid, v), std::invalid_argument);
}

TEST_CASE("interpolation functions: areas of parabola, swap and diagonal") {
  const InterpolationFunction par = InterpolationFunction::parabola();
  // Piecewise-linear parabola on 256 segments: 1/6 - 1/(6 n^2).
  CHECK(par.area() == doctest::Approx(1.0 / 6.0 - 1.0 / (6.0 * 256.0 * 256.0)).epsilon(1e-13));
  CHECK(par.swapped().area() == doctest::Approx(-par.area()).epsilon(1e-13));
  CHECK(InterpolationFunction::diagonal().area() == 0.0);
  CHECK(par.area(0.0, 1.0) == doctest::Approx(par.area()).epsilon(1e-12));
  CHECK(par.max_speed() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-2));
  CHECK_THROWS_AS(InterpolationFunction::from_sampler([](double t) { return std::array<double, 2>{t, 0.5}; }),
                  std::invalid_argument);
}

TEST_CASE("McShane interpolation: sample points and swapped area sign") {
  const Dissection grid = Dissection::uniform(0.0, 1.0, 8);
  const PiecewisePath b = sample_brownian(grid, 2, {11, 0});
  const InterpolationFunction phi = InterpolationFunction::parabola(32);
  const PiecewisePath m = mcshane_interpolate(b, grid, phi);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto a = m.evaluate(grid[i]);
    const auto c = b.point(i);
    CHECK(a[0] == doctest::Approx(c[0]).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(c[1]).epsilon(1e-14));
  }
  // On each interval the added area is |dx1 dx2| A^phi (the swap fixes the sign).
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const GroupElement s = chen_signature(m, grid[i], grid[i + 1], 2);
    const double area = 0.5 * (s.tensor().coeff({1, 2}) - s.tensor().coeff({2, 1}));
    const auto inc = b.increment(i);
    CHECK(area == doctest::Approx(std::abs(inc[0] * inc[1]) * phi.area()).epsilon(1e-12));
  }
  const PiecewisePath ms = mcshane_interpolate(b, grid, phi.swapped());
  const PiecewisePath md = mcshane_interpolate(b, grid, InterpolationFunction::diagonal());
  const auto area_of = [](const PiecewisePath& p) {
    const GroupElement s = chen_signature(p, 2);
    return 0.5 * (s.tensor().coeff({1, 2}) - s.tensor().coeff({2, 1}));
  };
  const double chord = area_of(b);
  CHECK(area_of(ms) - chord == doctest::Approx(-(area_of(m) - chord)).epsilon(1e-12));
  CHECK(area_of(md) == doctest::Approx(chord).epsilon(1e-12));
}

TEST_CASE("perturbed driver adds v (t - s) to every increment") {
  const TensorShape s(2, 3);
  const PerturbationSpec v = default_perturbation(s, 0.8);
  const Dissection grid = Dissection::uniform(0.0, 1.0, 8);
  const GridRoughPath x = lift_on_grid(smooth_driver(2, 8), grid, 3);
  const GridRoughPath y = perturbed_driver(x, v);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto lx = log(x.increment(i, i + 1)).tensor();
    const auto ly = log(y.increment(i, i + 1)).tensor();
    CHECK((ly - lx - (grid[i + 1] - grid[i]) * v.tensor()).max_abs() < 1e-13);
  }
  const GridRoughPath other = lift_on_grid(smooth_driver(2, 8), grid, 2);
  CHECK_THROWS_AS(perturbed_driver(other, v), std::invalid_argument);
}
