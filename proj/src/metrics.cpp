#include "roughlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughlab {

namespace {

void require_same_grid(const GridRoughPath& x, const GridRoughPath& y) {
  if (x.size() != y.size()) throw std::invalid_argument("grid mismatch: different sizes");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.grid()[i] != y.grid()[i]) throw std::invalid_argument("grid mismatch: different times");
  if (!(x.shape() == y.shape())) throw std::invalid_argument("grid paths have different shapes");
}

std::vector<GroupElement> inverses(const GridRoughPath& x) {
  std::vector<GroupElement> inv;
  inv.reserve(x.size());
  for (const auto& g : x.elements()) inv.push_back(group_inverse(g));
  return inv;
}

// d(x_s, x_t) using precomputed inverses: |x_s^{-1} x_t| symmetrized with x_t^{-1} x_s.
double pair_distance(const GridRoughPath& x, const std::vector<GroupElement>& inv, std::size_t s,
                     std::size_t t) {
  return homogeneous_norm(inv[s] * x[t], inv[t] * x[s]);
}

double pair_increment_distance(const GridRoughPath& x, const std::vector<GroupElement>& xi,
                               const GridRoughPath& y, const std::vector<GroupElement>& yi,
                               std::size_t s, std::size_t t) {
  GroupElement gx = xi[s] * x[t];
  GroupElement gy = yi[s] * y[t];
  GroupElement gx_inv = xi[t] * x[s];
  GroupElement gy_inv = yi[t] * y[s];
  return homogeneous_norm(gx_inv * gy, gy_inv * gx);
}

}  // namespace

double cc_distance(const GroupElement& g, const GroupElement& h) {
  if (!(g.shape() == h.shape())) throw std::invalid_argument("cc_distance: shape mismatch");
  const GroupElement gi = group_inverse(g);
  const GroupElement hi = group_inverse(h);
  return homogeneous_norm(gi * h, hi * g);
}

double d_inf(const GridRoughPath& x, const GridRoughPath& y) {
  require_same_grid(x, y);
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, cc_distance(x[i], y[i]));
  return m;
}

double holder_norm(const GridRoughPath& x, double alpha) {
  const auto inv = inverses(x);
  const long n = static_cast<long>(x.size());
  double m = 0.0;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : m)
  for (long s = 0; s < n; ++s)
    for (long t = s + 1; t < n; ++t) {
      const double dt = x.grid()[t] - x.grid()[s];
      m = std::max(m, pair_distance(x, inv, s, t) / std::pow(dt, alpha));
    }
  return m;
}

double d_holder(const GridRoughPath& x, const GridRoughPath& y, double gamma) {
  require_same_grid(x, y);
  const auto xi = inverses(x);
  const auto yi = inverses(y);
  const long n = static_cast<long>(x.size());
  double m = 0.0;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : m)
  for (long s = 0; s < n; ++s)
    for (long t = s + 1; t < n; ++t) {
      const double dt = x.grid()[t] - x.grid()[s];
      m = std::max(m, pair_increment_distance(x, xi, y, yi, s, t) / std::pow(dt, gamma));
    }
  return m;
}

double p_variation(const GridRoughPath& x, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p_variation: p must be >= 1");
  const auto inv = inverses(x);
  const std::size_t n = x.size();
  std::vector<double> best(n, 0.0);
  for (std::size_t t = 1; t < n; ++t) {
    double b = 0.0;
    for (std::size_t s = 0; s < t; ++s) b = std::max(b, best[s] + std::pow(pair_distance(x, inv, s, t), p));
    best[t] = b;
  }
  return std::pow(best.back(), 1.0 / p);
}

namespace reference {

double holder_norm(const GridRoughPath& x, double alpha) {
  double m = 0.0;
  for (std::size_t s = 0; s < x.size(); ++s)
    for (std::size_t t = s + 1; t < x.size(); ++t)
      m = std::max(m, cc_distance(x[s], x[t]) / std::pow(x.grid()[t] - x.grid()[s], alpha));
  return m;
}

double d_holder(const GridRoughPath& x, const GridRoughPath& y, double gamma) {
  require_same_grid(x, y);
  double m = 0.0;
  for (std::size_t s = 0; s < x.size(); ++s)
    for (std::size_t t = s + 1; t < x.size(); ++t)
      m = std::max(m, cc_distance(x.increment(s, t), y.increment(s, t)) /
                          std::pow(x.grid()[t] - x.grid()[s], gamma));
  return m;
}

}  // namespace reference

}  // namespace roughlab
