#pragma once
// Independent reference computations for the unit tests: word-keyed tensors,
// brute-force iterated integrals and a Taylor-series matrix exponential.

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "roughlab/tensor.hpp"

namespace oracle {

using roughlab::Word;

/// Sparse tensor keyed by word; the empty word is the scalar.
using WordTensor = std::map<Word, double>;

inline WordTensor from_dense(const roughlab::TruncatedTensor& t) {
  WordTensor w;
  const auto& s = t.shape();
  w[{}] = t.scalar();
  for (int k = 1; k <= s.depth(); ++k) {
    auto lv = t.level(k);
    for (std::size_t i = 0; i < lv.size(); ++i) w[roughlab::index_word(s, k, i)] = lv[i];
  }
  return w;
}

inline WordTensor mul(const WordTensor& a, const WordTensor& b, int depth) {
  WordTensor r;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) {
      if (static_cast<int>(u.size() + v.size()) > depth) continue;
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      r[w] += x * y;
    }
  return r;
}

inline double max_diff(const WordTensor& a, const roughlab::TruncatedTensor& t) {
  const WordTensor b = from_dense(t);
  double m = 0.0;
  for (const auto& [w, x] : a) {
    auto it = b.find(w);
    m = std::max(m, std::abs(x - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [w, x] : b)
    if (!a.count(w)) m = std::max(m, std::abs(x));
  return m;
}

/// Signature of a piecewise-linear path by brute force: every word's
/// coefficient as a sum over ordered segment tuples of within-segment
/// simplex volumes (no use of Chen's identity or the tensor exponential).
inline double iterated_integral(const std::vector<std::vector<double>>& incs, const Word& w) {
  const std::size_t k = w.size();
  // c[m] = coefficient of w[0..m) over the segments processed so far
  std::vector<double> c(k + 1, 0.0);
  c[0] = 1.0;
  for (const auto& inc : incs) {
    std::vector<double> next = c;
    // A run w[m..m+r) in this segment contributes prod inc / r!.
    for (std::size_t m = 0; m < k; ++m) {
      if (c[m] == 0.0) continue;
      double prod = 1.0, fact = 1.0;
      for (std::size_t r = 1; m + r <= k; ++r) {
        prod *= inc[w[m + r - 1] - 1];
        fact *= static_cast<double>(r);
        next[m + r] += c[m] * prod / fact;
      }
    }
    c = next;
  }
  return c[k];
}

inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  // Scaling and squaring around a long Taylor series.
  int s = 0;
  double n = a.lpNorm<Eigen::Infinity>();
  while (n > 0.25) {
    n /= 2;
    ++s;
  }
  const Eigen::MatrixXd b = a / std::ldexp(1.0, s);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / k;
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline std::vector<double> random_vector(std::mt19937_64& g, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(g);
  return v;
}

}  // namespace oracle
