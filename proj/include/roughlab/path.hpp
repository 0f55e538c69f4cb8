#pragma once

#include <span>
#include <vector>

#include "roughlab/tensor.hpp"

namespace roughlab {

/// Strictly increasing times t_0 < ... < t_m, m >= 1.
class Dissection {
 public:
  explicit Dissection(std::vector<double> times);
  static Dissection uniform(double t0, double t1, std::size_t intervals);

  std::size_t size() const { return times_.size(); }
  std::size_t intervals() const { return times_.size() - 1; }
  double operator[](std::size_t i) const { return times_[i]; }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }
  std::span<const double> times() const { return times_; }

  /// Index i of the interval [t_i, t_{i+1}] containing t (the last one for t = t_m).
  std::size_t locate(double t) const;
  double mesh() const;

 private:
  std::vector<double> times_;
};

/// Piecewise-linear path in R^d through `values` at the breakpoints.
class PiecewisePath {
 public:
  PiecewisePath(Dissection breakpoints, int dim, std::vector<double> values);
  PiecewisePath(Dissection breakpoints, const std::vector<std::vector<double>>& points);

  int dim() const { return dim_; }
  const Dissection& breakpoints() const { return knots_; }
  std::size_t size() const { return knots_.size(); }
  double start_time() const { return knots_.front(); }
  double end_time() const { return knots_.back(); }

  std::span<const double> point(std::size_t j) const {
    return {values_.data() + j * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> values() const { return values_; }
  std::vector<double> evaluate(double t) const;
  std::vector<double> increment(std::size_t j) const;  // x_{j+1} - x_j

 private:
  Dissection knots_;
  int dim_;
  std::vector<double> values_;
};

/// Lift of a path evaluated on a grid, started at the identity.
class GridRoughPath {
 public:
  GridRoughPath(Dissection grid, std::vector<GroupElement> elements);

  const Dissection& grid() const { return grid_; }
  const TensorShape& shape() const { return elements_.front().shape(); }
  std::size_t size() const { return elements_.size(); }
  const GroupElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<GroupElement>& elements() const { return elements_; }

  /// g_{s,t} = g_s^{-1} g_t for grid indices s <= t.
  GroupElement increment(std::size_t s, std::size_t t) const;

 private:
  Dissection grid_;
  std::vector<GroupElement> elements_;
};

/// Exact step-N signature of a piecewise-linear path over [s,t].
GroupElement chen_signature(const PiecewisePath& x, double s, double t, int depth);
inline GroupElement chen_signature(const PiecewisePath& x, int depth) {
  return chen_signature(x, x.start_time(), x.end_time(), depth);
}

GridRoughPath lift_on_grid(const PiecewisePath& x, const Dissection& grid, int depth);

/// Piecewise-linear interpolation of x through its values on `grid`.
PiecewisePath sample_on(const PiecewisePath& x, const Dissection& grid);

/// b is time-shifted to start where a ends; requires end(a) = start(b) in space.
PiecewisePath path_concat(const PiecewisePath& a, const PiecewisePath& b, double tol = 1e-12);
/// Same time span, traversed backwards.
PiecewisePath path_reverse(const PiecewisePath& a);
/// x -> c x.
PiecewisePath path_scale(const PiecewisePath& a, double c);
PiecewisePath path_translate(const PiecewisePath& a, std::span<const double> offset);
/// Affine reparametrization onto [t0, t1].
PiecewisePath path_run_at_speed(const PiecewisePath& a, double t0, double t1);

/// Sum over segments of Euclidean segment length.
double path_length(const PiecewisePath& a);

}  // namespace roughlab
