#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace roughlab {

inline constexpr int kMaxDepth = 16;

/// Driving dimension d and truncation depth N of T^N(R^d).
class TensorShape {
 public:
  TensorShape(int d, int depth);

  int dim() const { return d_; }
  int depth() const { return depth_; }
  std::size_t level_size(int k) const { return powers_[k]; }
  std::size_t level_offset(int k) const { return offsets_[k]; }
  std::size_t total_size() const { return offsets_[depth_ + 1]; }

  friend bool operator==(const TensorShape& a, const TensorShape& b) {
    return a.d_ == b.d_ && a.depth_ == b.depth_;
  }

 private:
  int d_;
  int depth_;
  std::array<std::size_t, kMaxDepth + 2> powers_{};
  std::array<std::size_t, kMaxDepth + 2> offsets_{};
};

/// Word (i1,...,ik) of letters in {1,...,d}. Coefficient storage uses the
/// base-d integer whose digits are (i1-1,...,ik-1), i1 most significant.
using Word = std::vector<int>;

std::size_t word_index(const TensorShape& shape, std::span<const int> word);
Word index_word(const TensorShape& shape, int level, std::size_t index);

/// Element of the truncated tensor algebra, stored densely level by level.
class TruncatedTensor {
 public:
  explicit TruncatedTensor(const TensorShape& shape);

  static TruncatedTensor identity(const TensorShape& shape);
  static TruncatedTensor letter(const TensorShape& shape, int i);
  static TruncatedTensor from_levels(const TensorShape& shape,
                                     const std::vector<std::vector<double>>& levels);

  const TensorShape& shape() const { return shape_; }
  int depth() const { return shape_.depth(); }
  int dim() const { return shape_.dim(); }

  std::span<const double> level(int k) const;
  std::span<double> level(int k);
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double scalar() const { return data_[0]; }
  double& scalar() { return data_[0]; }

  double coeff(std::span<const int> word) const;
  double& coeff(std::span<const int> word);
  double coeff(std::initializer_list<int> word) const {
    return coeff(std::span<const int>(word.begin(), word.size()));
  }
  double& coeff(std::initializer_list<int> word) {
    return coeff(std::span<const int>(word.begin(), word.size()));
  }

  /// Copy keeping only level k.
  TruncatedTensor homogeneous_part(int k) const;
  bool is_finite() const;
  double max_abs() const;
  double level_norm(int k) const;

  TruncatedTensor& operator+=(const TruncatedTensor& other);
  TruncatedTensor& operator-=(const TruncatedTensor& other);
  TruncatedTensor& operator*=(double c);

  friend TruncatedTensor operator+(TruncatedTensor a, const TruncatedTensor& b) { return a += b; }
  friend TruncatedTensor operator-(TruncatedTensor a, const TruncatedTensor& b) { return a -= b; }
  friend TruncatedTensor operator*(TruncatedTensor a, double c) { return a *= c; }
  friend TruncatedTensor operator*(double c, TruncatedTensor a) { return a *= c; }
  friend TruncatedTensor operator-(TruncatedTensor a) { return a *= -1.0; }

 private:
  TensorShape shape_;
  std::vector<double> data_;
};

/// Truncated tensor product; levels above the depth are discarded.
TruncatedTensor tensor_mul(const TruncatedTensor& a, const TruncatedTensor& b);
inline TruncatedTensor operator*(const TruncatedTensor& a, const TruncatedTensor& b) {
  return tensor_mul(a, b);
}

TruncatedTensor lie_bracket(const TruncatedTensor& a, const TruncatedTensor& b);

/// Finite exponential series; requires a zero scalar part.
TruncatedTensor tensor_exp(const TruncatedTensor& x);
/// Finite logarithm series; requires scalar part exactly 1.
TruncatedTensor tensor_log(const TruncatedTensor& g);

/// Applies the right-normed bracketing map w1...wk -> [w1,[w2,...,[w_{k-1},wk]]]
/// independently on every level (level 0 maps to 0).
TruncatedTensor dynkin_project(const TruncatedTensor& x);

/// Dynkin-Specht-Wever test, level by level.
bool is_lie(const TruncatedTensor& x, double tol = 1e-10);

class LieElement;

/// Group-like tensor (scalar part exactly 1). Group-likeness itself is checked
/// by is_group_like; every operation here preserves it.
class GroupElement {
 public:
  explicit GroupElement(TruncatedTensor t);
  static GroupElement identity(const TensorShape& shape);

  const TruncatedTensor& tensor() const { return t_; }
  const TensorShape& shape() const { return t_.shape(); }
  int depth() const { return t_.depth(); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement(tensor_mul(a.t_, b.t_));
  }

 private:
  TruncatedTensor t_;
};

/// Lie polynomial (scalar part exactly 0).
class LieElement {
 public:
  explicit LieElement(TruncatedTensor t);
  /// Throws unless the tensor passes is_lie.
  static LieElement checked(TruncatedTensor t, double tol = 1e-10);
  static LieElement zero(const TensorShape& shape);

  const TruncatedTensor& tensor() const { return t_; }
  const TensorShape& shape() const { return t_.shape(); }

  friend LieElement operator+(const LieElement& a, const LieElement& b) {
    return LieElement(a.t_ + b.t_);
  }
  friend LieElement operator*(double c, const LieElement& a) { return LieElement(c * a.t_); }

 private:
  TruncatedTensor t_;
};

GroupElement exp(const LieElement& x);
LieElement log(const GroupElement& g);

bool is_group_like(const GroupElement& g, double tol = 1e-10);
GroupElement group_inverse(const GroupElement& g);
/// Dilation: level k scaled by c^k.
GroupElement dilate(const GroupElement& g, double c);
TruncatedTensor dilate(const TruncatedTensor& x, double c);

/// max over h in {g, g^-1} of max_k |level_k(h)|_2^{1/k}.
double homogeneous_norm(const GroupElement& g);
/// Same norm when the inverse is already at hand.
double homogeneous_norm(const GroupElement& g, const GroupElement& g_inverse);

/// True when log(g) vanishes below the top level and g commutes with the
/// generators exp(e_i).
bool is_central(const GroupElement& g, double tol = 1e-10);
/// max-abs entry of a*b - b*a.
double commutator_residual(const GroupElement& a, const GroupElement& b);

/// Right-normed bracket word (a1,...,ak) -> [e_ak,[e_a(k-1),...,[e_a2,e_a1]]].
class BracketWord {
 public:
  explicit BracketWord(Word letters);
  const Word& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  int operator[](std::size_t i) const { return letters_[i]; }

  friend bool operator==(const BracketWord&, const BracketWord&) = default;

 private:
  Word letters_;
};

LieElement bracket_word_tensor(const BracketWord& word, const TensorShape& shape);

/// Exponential of a vector placed in level 1: v^{(x)k}/k! on level k.
GroupElement segment_signature(std::span<const double> increment, const TensorShape& shape);

}  // namespace roughlab
