#include "roughlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace roughlab {

TensorShape::TensorShape(int d, int depth) : d_(d), depth_(depth) {
  if (d < 1) throw std::invalid_argument("TensorShape: dimension must be >= 1");
  if (depth < 1 || depth > kMaxDepth)
    throw std::invalid_argument("TensorShape: depth must be in [1, " + std::to_string(kMaxDepth) + "]");
  powers_[0] = 1;
  offsets_[0] = 0;
  for (int k = 1; k <= depth + 1; ++k) {
    powers_[k] = powers_[k - 1] * static_cast<std::size_t>(d);
    offsets_[k] = offsets_[k - 1] + powers_[k - 1];
  }
}

std::size_t word_index(const TensorShape& shape, std::span<const int> word) {
  if (static_cast<int>(word.size()) > shape.depth())
    throw std::invalid_argument("word longer than truncation depth");
  std::size_t idx = 0;
  for (int letter : word) {
    if (letter < 1 || letter > shape.dim())
      throw std::invalid_argument("word letter out of range: " + std::to_string(letter));
    idx = idx * shape.dim() + static_cast<std::size_t>(letter - 1);
  }
  return idx;
}

Word index_word(const TensorShape& shape, int level, std::size_t index) {
  Word w(level);
  for (int j = level - 1; j >= 0; --j) {
    w[j] = static_cast<int>(index % shape.dim()) + 1;
    index /= shape.dim();
  }
  return w;
}

// ---------------------------------------------------------------------------

TruncatedTensor::TruncatedTensor(const TensorShape& shape)
    : shape_(shape), data_(shape.total_size(), 0.0) {}

TruncatedTensor TruncatedTensor::identity(const TensorShape& shape) {
  TruncatedTensor t(shape);
  t.data_[0] = 1.0;
  return t;
}

TruncatedTensor TruncatedTensor::letter(const TensorShape& shape, int i) {
  if (i < 1 || i > shape.dim()) throw std::invalid_argument("letter out of range");
  TruncatedTensor t(shape);
  t.data_[shape.level_offset(1) + i - 1] = 1.0;
  return t;
}

TruncatedTensor TruncatedTensor::from_levels(const TensorShape& shape,
                                             const std::vector<std::vector<double>>& levels) {
  if (static_cast<int>(levels.size()) != shape.depth() + 1)
    throw std::invalid_argument("from_levels: expected depth+1 levels");
  TruncatedTensor t(shape);
  for (int k = 0; k <= shape.depth(); ++k) {
    if (levels[k].size() != shape.level_size(k))
      throw std::invalid_argument("from_levels: level " + std::to_string(k) + " has wrong length");
    std::copy(levels[k].begin(), levels[k].end(), t.level(k).begin());
  }
  return t;
}

std::span<const double> TruncatedTensor::level(int k) const {
  return {data_.data() + shape_.level_offset(k), shape_.level_size(k)};
}

std::span<double> TruncatedTensor::level(int k) {
  return {data_.data() + shape_.level_offset(k), shape_.level_size(k)};
}

double TruncatedTensor::coeff(std::span<const int> word) const {
  return data_[shape_.level_offset(static_cast<int>(word.size())) + word_index(shape_, word)];
}

double& TruncatedTensor::coeff(std::span<const int> word) {
  return data_[shape_.level_offset(static_cast<int>(word.size())) + word_index(shape_, word)];
}

TruncatedTensor TruncatedTensor::homogeneous_part(int k) const {
  TruncatedTensor t(shape_);
  auto src = level(k);
  std::copy(src.begin(), src.end(), t.level(k).begin());
  return t;
}

bool TruncatedTensor::is_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double TruncatedTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double TruncatedTensor::level_norm(int k) const {
  double s = 0.0;
  for (double v : level(k)) s += v * v;
  return std::sqrt(s);
}

TruncatedTensor& TruncatedTensor::operator+=(const TruncatedTensor& other) {
  if (!(shape_ == other.shape_)) throw std::invalid_argument("tensor shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

TruncatedTensor& TruncatedTensor::operator-=(const TruncatedTensor& other) {
  if (!(shape_ == other.shape_)) throw std::invalid_argument("tensor shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

TruncatedTensor& TruncatedTensor::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

// ---------------------------------------------------------------------------

TruncatedTensor tensor_mul(const TruncatedTensor& a, const TruncatedTensor& b) {
  if (!(a.shape() == b.shape())) throw std::invalid_argument("tensor_mul: shape mismatch");
  const TensorShape& s = a.shape();
  TruncatedTensor out(s);
  for (int k = 0; k <= s.depth(); ++k) {
    auto dst = out.level(k);
    for (int i = 0; i <= k; ++i) {
      auto left = a.level(i);
      auto right = b.level(k - i);
      const std::size_t stride = right.size();
      for (std::size_t u = 0; u < left.size(); ++u) {
        const double lu = left[u];
        if (lu == 0.0) continue;
        double* row = dst.data() + u * stride;
        for (std::size_t w = 0; w < stride; ++w) row[w] += lu * right[w];
      }
    }
  }
  return out;
}

TruncatedTensor lie_bracket(const TruncatedTensor& a, const TruncatedTensor& b) {
  return tensor_mul(a, b) - tensor_mul(b, a);
}

TruncatedTensor tensor_exp(const TruncatedTensor& x) {
  if (x.scalar() != 0.0) throw std::invalid_argument("tensor_exp: scalar part must be zero");
  const TensorShape& s = x.shape();
  // Horner: 1 + x/1 (1 + x/2 (1 + ... (1 + x/N)))
  TruncatedTensor r = TruncatedTensor::identity(s);
  for (int k = s.depth(); k >= 1; --k) {
    r = tensor_mul(x, r);
    r *= 1.0 / k;
    r.scalar() += 1.0;
  }
  return r;
}

TruncatedTensor tensor_log(const TruncatedTensor& g) {
  if (g.scalar() != 1.0) throw std::invalid_argument("tensor_log: scalar part must be one");
  const TensorShape& s = g.shape();
  TruncatedTensor y = g;
  y.scalar() = 0.0;
  // y (c1 + y (c2 + ... + y cN)), c_k = (-1)^{k+1}/k
  const int n = s.depth();
  TruncatedTensor acc = TruncatedTensor::identity(s);
  acc.scalar() = ((n % 2 == 1) ? 1.0 : -1.0) / n;
  for (int k = n - 1; k >= 1; --k) {
    acc = tensor_mul(y, acc);
    acc.scalar() += ((k % 2 == 1) ? 1.0 : -1.0) / k;
  }
  return tensor_mul(y, acc);
}

namespace {

// Right-normed bracketing of a homogeneous degree-k block (length d^k).
std::vector<double> dynkin_level(std::span<const double> tau, int k, int d) {
  if (k == 1) return {tau.begin(), tau.end()};
  const std::size_t inner = tau.size() / d;
  std::vector<double> out(tau.size(), 0.0);
  for (int i = 0; i < d; ++i) {
    auto sub = tau.subspan(static_cast<std::size_t>(i) * inner, inner);
    if (std::all_of(sub.begin(), sub.end(), [](double v) { return v == 0.0; })) continue;
    std::vector<double> r = dynkin_level(sub, k - 1, d);
    // e_i (x) r
    for (std::size_t w = 0; w < inner; ++w) out[i * inner + w] += r[w];
    // - r (x) e_i
    for (std::size_t w = 0; w < inner; ++w) out[w * d + i] -= r[w];
  }
  return out;
}

}  // namespace

TruncatedTensor dynkin_project(const TruncatedTensor& x) {
  const TensorShape& s = x.shape();
  TruncatedTensor out(s);
  for (int k = 1; k <= s.depth(); ++k) {
    auto r = dynkin_level(x.level(k), k, s.dim());
    std::copy(r.begin(), r.end(), out.level(k).begin());
  }
  return out;
}

bool is_lie(const TruncatedTensor& x, double tol) {
  if (std::abs(x.scalar()) > tol) return false;
  const TensorShape& s = x.shape();
  TruncatedTensor r = dynkin_project(x);
  for (int k = 1; k <= s.depth(); ++k) {
    auto xk = x.level(k);
    auto rk = r.level(k);
    double scale = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < xk.size(); ++i) {
      scale = std::max(scale, std::abs(xk[i]));
      err = std::max(err, std::abs(rk[i] - k * xk[i]));
    }
    if (err > tol * std::max(1.0, k * scale)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

GroupElement::GroupElement(TruncatedTensor t) : t_(std::move(t)) {
  if (t_.scalar() != 1.0) throw std::invalid_argument("GroupElement: scalar part must be one");
}

GroupElement GroupElement::identity(const TensorShape& shape) {
  return GroupElement(TruncatedTensor::identity(shape));
}

LieElement::LieElement(TruncatedTensor t) : t_(std::move(t)) {
  if (t_.scalar() != 0.0) throw std::invalid_argument("LieElement: scalar part must be zero");
}

LieElement LieElement::checked(TruncatedTensor t, double tol) {
  if (!is_lie(t, tol)) throw std::invalid_argument("LieElement: tensor is not a Lie element");
  return LieElement(std::move(t));
}

LieElement LieElement::zero(const TensorShape& shape) { return LieElement(TruncatedTensor(shape)); }

GroupElement exp(const LieElement& x) { return GroupElement(tensor_exp(x.tensor())); }

LieElement log(const GroupElement& g) { return LieElement(tensor_log(g.tensor())); }

bool is_group_like(const GroupElement& g, double tol) {
  return g.tensor().is_finite() && is_lie(tensor_log(g.tensor()), tol);
}

GroupElement group_inverse(const GroupElement& g) {
  const TensorShape& s = g.shape();
  TruncatedTensor y = g.tensor();
  y.scalar() = 0.0;
  // (1 + y)^{-1} = 1 - y (1 - y (1 - ...))
  TruncatedTensor r = TruncatedTensor::identity(s);
  for (int k = 1; k <= s.depth(); ++k) {
    r = tensor_mul(y, r);
    r *= -1.0;
    r.scalar() += 1.0;
  }
  return GroupElement(std::move(r));
}

TruncatedTensor dilate(const TruncatedTensor& x, double c) {
  TruncatedTensor out = x;
  double ck = 1.0;
  for (int k = 1; k <= x.depth(); ++k) {
    ck *= c;
    for (double& v : out.level(k)) v *= ck;
  }
  return out;
}

GroupElement dilate(const GroupElement& g, double c) { return GroupElement(dilate(g.tensor(), c)); }

namespace {

double one_sided_norm(const TruncatedTensor& t) {
  double m = 0.0;
  for (int k = 1; k <= t.depth(); ++k) {
    const double n = t.level_norm(k);
    if (n > 0.0) m = std::max(m, std::pow(n, 1.0 / k));
  }
  return m;
}

}  // namespace

double homogeneous_norm(const GroupElement& g, const GroupElement& g_inverse) {
  return std::max(one_sided_norm(g.tensor()), one_sided_norm(g_inverse.tensor()));
}

double homogeneous_norm(const GroupElement& g) { return homogeneous_norm(g, group_inverse(g)); }

double commutator_residual(const GroupElement& a, const GroupElement& b) {
  return (tensor_mul(a.tensor(), b.tensor()) - tensor_mul(b.tensor(), a.tensor())).max_abs();
}

bool is_central(const GroupElement& g, double tol) {
  const TensorShape& s = g.shape();
  TruncatedTensor l = tensor_log(g.tensor());
  for (int k = 1; k < s.depth(); ++k)
    for (double v : l.level(k))
      if (std::abs(v) > tol) return false;
  for (int i = 1; i <= s.dim(); ++i) {
    GroupElement gen = exp(LieElement(TruncatedTensor::letter(s, i)));
    if (commutator_residual(g, gen) > tol * std::max(1.0, g.tensor().max_abs())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

BracketWord::BracketWord(Word letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw std::invalid_argument("BracketWord: empty word");
  for (int a : letters_)
    if (a < 1) throw std::invalid_argument("BracketWord: letters are 1-based");
}

LieElement bracket_word_tensor(const BracketWord& word, const TensorShape& shape) {
  if (static_cast<int>(word.size()) > shape.depth())
    throw std::invalid_argument("bracket_word_tensor: word longer than depth");
  for (int a : word.letters())
    if (a > shape.dim()) throw std::invalid_argument("bracket_word_tensor: letter out of range");
  TruncatedTensor t = TruncatedTensor::letter(shape, word[0]);
  for (std::size_t j = 1; j < word.size(); ++j)
    t = lie_bracket(TruncatedTensor::letter(shape, word[j]), t);
  return LieElement(std::move(t));
}

GroupElement segment_signature(std::span<const double> increment, const TensorShape& shape) {
  if (static_cast<int>(increment.size()) != shape.dim())
    throw std::invalid_argument("segment_signature: increment dimension mismatch");
  TruncatedTensor t = TruncatedTensor::identity(shape);
  const int d = shape.dim();
  std::copy(increment.begin(), increment.end(), t.level(1).begin());
  for (int k = 2; k <= shape.depth(); ++k) {
    auto prev = t.level(k - 1);
    auto cur = t.level(k);
    const double inv_k = 1.0 / k;
    for (std::size_t u = 0; u < prev.size(); ++u)
      for (int i = 0; i < d; ++i) cur[u * d + i] = prev[u] * increment[i] * inv_k;
  }
  return GroupElement(std::move(t));
}

}  // namespace roughlab
