#include "roughlab/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace roughlab {

Dissection::Dissection(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw std::invalid_argument("Dissection: need at least two points");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw std::invalid_argument("Dissection: non-finite time");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw std::invalid_argument("Dissection: times must be strictly increasing (index " +
                                  std::to_string(i) + ")");
  }
}

Dissection Dissection::uniform(double t0, double t1, std::size_t intervals) {
  if (intervals == 0) throw std::invalid_argument("Dissection::uniform: zero intervals");
  std::vector<double> t(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(intervals);
  t.back() = t1;
  return Dissection(std::move(t));
}

std::size_t Dissection::locate(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  return std::min(i, times_.size() - 2);
}

double Dissection::mesh() const {
  double m = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i) m = std::max(m, times_[i] - times_[i - 1]);
  return m;
}

// ---------------------------------------------------------------------------

PiecewisePath::PiecewisePath(Dissection breakpoints, int dim, std::vector<double> values)
    : knots_(std::move(breakpoints)), dim_(dim), values_(std::move(values)) {
  if (dim_ < 1) throw std::invalid_argument("PiecewisePath: dimension must be >= 1");
  if (values_.size() != knots_.size() * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("PiecewisePath: value count does not match breakpoints");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("PiecewisePath: non-finite coordinate");
}

namespace {
std::vector<double> flatten(const std::vector<std::vector<double>>& pts) {
  if (pts.empty()) throw std::invalid_argument("PiecewisePath: no points");
  std::vector<double> out;
  out.reserve(pts.size() * pts.front().size());
  for (const auto& p : pts) {
    if (p.size() != pts.front().size()) throw std::invalid_argument("PiecewisePath: ragged points");
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}
}  // namespace

PiecewisePath::PiecewisePath(Dissection breakpoints, const std::vector<std::vector<double>>& points)
    : PiecewisePath(std::move(breakpoints), points.empty() ? 0 : static_cast<int>(points.front().size()),
                    flatten(points)) {}

std::vector<double> PiecewisePath::evaluate(double t) const {
  if (t < start_time() || t > end_time()) throw std::out_of_range("PiecewisePath::evaluate: time out of range");
  const std::size_t j = knots_.locate(t);
  const double a = knots_[j];
  const double b = knots_[j + 1];
  const double w = (t - a) / (b - a);
  std::vector<double> out(dim_);
  auto p = point(j);
  auto q = point(j + 1);
  for (int i = 0; i < dim_; ++i) out[i] = p[i] + w * (q[i] - p[i]);
  if (t == b) std::copy(q.begin(), q.end(), out.begin());
  return out;
}

std::vector<double> PiecewisePath::increment(std::size_t j) const {
  std::vector<double> out(dim_);
  auto p = point(j);
  auto q = point(j + 1);
  for (int i = 0; i < dim_; ++i) out[i] = q[i] - p[i];
  return out;
}

// ---------------------------------------------------------------------------

GridRoughPath::GridRoughPath(Dissection grid, std::vector<GroupElement> elements)
    : grid_(std::move(grid)), elements_(std::move(elements)) {
  if (elements_.size() != grid_.size())
    throw std::invalid_argument("GridRoughPath: one element per grid time required");
  for (const auto& g : elements_)
    if (!(g.shape() == elements_.front().shape()))
      throw std::invalid_argument("GridRoughPath: mixed tensor shapes");
}

GroupElement GridRoughPath::increment(std::size_t s, std::size_t t) const {
  return group_inverse(elements_[s]) * elements_[t];
}

// ---------------------------------------------------------------------------

GroupElement chen_signature(const PiecewisePath& x, double s, double t, int depth) {
  if (!(s <= t) || s < x.start_time() || t > x.end_time())
    throw std::out_of_range("chen_signature: interval outside path domain");
  const TensorShape shape(x.dim(), depth);
  GroupElement sig = GroupElement::identity(shape);
  if (s == t) return sig;
  const Dissection& k = x.breakpoints();
  std::size_t j = k.locate(s);
  std::vector<double> inc(x.dim());
  for (; j + 1 < k.size() && k[j] < t; ++j) {
    const double a = std::max(s, k[j]);
    const double b = std::min(t, k[j + 1]);
    if (!(b > a)) continue;
    const double frac = (b - a) / (k[j + 1] - k[j]);
    auto p = x.point(j);
    auto q = x.point(j + 1);
    for (int i = 0; i < x.dim(); ++i) inc[i] = frac * (q[i] - p[i]);
    sig = sig * segment_signature(inc, shape);
  }
  return sig;
}

GridRoughPath lift_on_grid(const PiecewisePath& x, const Dissection& grid, int depth) {
  if (grid.front() < x.start_time() || grid.back() > x.end_time())
    throw std::out_of_range("lift_on_grid: grid escapes path domain");
  std::vector<GroupElement> elems;
  elems.reserve(grid.size());
  elems.push_back(GroupElement::identity(TensorShape(x.dim(), depth)));
  for (std::size_t i = 1; i < grid.size(); ++i)
    elems.push_back(elems.back() * chen_signature(x, grid[i - 1], grid[i], depth));
  return GridRoughPath(grid, std::move(elems));
}

PiecewisePath sample_on(const PiecewisePath& x, const Dissection& grid) {
  std::vector<double> vals;
  vals.reserve(grid.size() * x.dim());
  for (double t : grid.times()) {
    auto p = x.evaluate(t);
    vals.insert(vals.end(), p.begin(), p.end());
  }
  return PiecewisePath(grid, x.dim(), std::move(vals));
}

PiecewisePath path_concat(const PiecewisePath& a, const PiecewisePath& b, double tol) {
  if (a.dim() != b.dim()) throw std::invalid_argument("path_concat: dimension mismatch");
  auto end_a = a.point(a.size() - 1);
  auto start_b = b.point(0);
  for (int i = 0; i < a.dim(); ++i)
    if (std::abs(end_a[i] - start_b[i]) > tol)
      throw std::invalid_argument("path_concat: end of first path differs from start of second");
  std::vector<double> times(a.breakpoints().times().begin(), a.breakpoints().times().end());
  std::vector<double> vals(a.values().begin(), a.values().end());
  const double shift = a.end_time() - b.start_time();
  for (std::size_t j = 1; j < b.size(); ++j) {
    times.push_back(b.breakpoints()[j] + shift);
    auto p = b.point(j);
    vals.insert(vals.end(), p.begin(), p.end());
  }
  return PiecewisePath(Dissection(std::move(times)), a.dim(), std::move(vals));
}

PiecewisePath path_reverse(const PiecewisePath& a) {
  const std::size_t m = a.size();
  std::vector<double> times(m);
  std::vector<double> vals;
  vals.reserve(a.values().size());
  const double t0 = a.start_time();
  const double t1 = a.end_time();
  for (std::size_t j = 0; j < m; ++j) {
    times[j] = t0 + t1 - a.breakpoints()[m - 1 - j];
    auto p = a.point(m - 1 - j);
    vals.insert(vals.end(), p.begin(), p.end());
  }
  times.front() = t0;
  times.back() = t1;
  return PiecewisePath(Dissection(std::move(times)), a.dim(), std::move(vals));
}

PiecewisePath path_scale(const PiecewisePath& a, double c) {
  std::vector<double> vals(a.values().begin(), a.values().end());
  for (double& v : vals) v *= c;
  return PiecewisePath(a.breakpoints(), a.dim(), std::move(vals));
}

PiecewisePath path_translate(const PiecewisePath& a, std::span<const double> offset) {
  if (static_cast<int>(offset.size()) != a.dim()) throw std::invalid_argument("path_translate: dimension");
  std::vector<double> vals(a.values().begin(), a.values().end());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (int i = 0; i < a.dim(); ++i) vals[j * a.dim() + i] += offset[i];
  return PiecewisePath(a.breakpoints(), a.dim(), std::move(vals));
}

PiecewisePath path_run_at_speed(const PiecewisePath& a, double t0, double t1) {
  if (!(t1 > t0)) throw std::invalid_argument("path_run_at_speed: empty interval");
  const double s0 = a.start_time();
  const double scale = (t1 - t0) / (a.end_time() - s0);
  std::vector<double> times(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) times[j] = t0 + (a.breakpoints()[j] - s0) * scale;
  times.front() = t0;
  times.back() = t1;
  return PiecewisePath(Dissection(std::move(times)), a.dim(),
                       std::vector<double>(a.values().begin(), a.values().end()));
}

double path_length(const PiecewisePath& a) {
  double len = 0.0;
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    double s = 0.0;
    auto p = a.point(j);
    auto q = a.point(j + 1);
    for (int i = 0; i < a.dim(); ++i) s += (q[i] - p[i]) * (q[i] - p[i]);
    len += std::sqrt(s);
  }
  return len;
}

}  // namespace roughlab
