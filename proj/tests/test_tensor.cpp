#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "roughlab/tensor.hpp"

using namespace roughlab;

namespace {

TruncatedTensor random_tensor(std::mt19937_64& g, const TensorShape& s, double scalar, double scale = 1.0) {
  TruncatedTensor t(s);
  auto v = oracle::random_vector(g, s.total_size(), scale);
  std::copy(v.begin(), v.end(), t.data().begin());
  t.scalar() = scalar;
  return t;
}

LieElement random_lie(std::mt19937_64& g, const TensorShape& s, double scale = 0.5) {
  // Random combination of letters and brackets of letters.
  TruncatedTensor x(s);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (int i = 1; i <= s.dim(); ++i) x += u(g) * TruncatedTensor::letter(s, i);
  for (int k = 2; k <= s.depth(); ++k)
    for (int r = 0; r < 3; ++r) {
      Word w(k);
      std::uniform_int_distribution<int> l(1, s.dim());
      for (auto& a : w) a = l(g);
      x += u(g) * bracket_word_tensor(BracketWord(w), s).tensor();
    }
  return LieElement(x);
}

}  // namespace

TEST_CASE("word indices are base-d with the first letter most significant") {
  const TensorShape s(3, 3);
  CHECK(word_index(s, std::vector<int>{1, 1, 1}) == 0);
  CHECK(word_index(s, std::vector<int>{1, 2, 3}) == 0 * 9 + 1 * 3 + 2);
  CHECK(word_index(s, std::vector<int>{3, 1, 2}) == 2 * 9 + 0 * 3 + 1);
  for (std::size_t i = 0; i < 27; ++i) CHECK(word_index(s, index_word(s, 3, i)) == i);
  CHECK_THROWS_AS(word_index(s, std::vector<int>{4}), std::invalid_argument);
  CHECK_THROWS_AS(word_index(s, std::vector<int>{1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(TensorShape(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(TensorShape(2, kMaxDepth + 1), std::invalid_argument);
}

TEST_CASE("tensor product matches the word-concatenation oracle") {
  std::mt19937_64 g(11);
  for (int d = 1; d <= 3; ++d)
    for (int n = 1; n <= 4; ++n) {
      const TensorShape s(d, n);
      const auto a = random_tensor(g, s, 0.7);
      const auto b = random_tensor(g, s, -1.3);
      CHECK(oracle::max_diff(oracle::mul(oracle::from_dense(a), oracle::from_dense(b), n), a * b) < 1e-13);
    }
}

TEST_CASE("identity, letters and level arithmetic") {
  const TensorShape s(2, 3);
  const auto e = TruncatedTensor::identity(s);
  std::mt19937_64 g(3);
  const auto a = random_tensor(g, s, 0.2);
  CHECK((e * a - a).max_abs() == 0.0);
  CHECK((a * e - a).max_abs() == 0.0);
  const auto e1 = TruncatedTensor::letter(s, 1);
  CHECK(e1.coeff({1}) == 1.0);
  CHECK(e1.level_norm(1) == 1.0);
  CHECK_THROWS_AS(TruncatedTensor::letter(s, 3), std::invalid_argument);
  CHECK_THROWS_AS(a + TruncatedTensor(TensorShape(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(TruncatedTensor::from_levels(s, {{1.0}}), std::invalid_argument);
}

TEST_CASE("exp of a letter multiple has a^k/k! on the diagonal word") {
  const TensorShape s(2, 4);
  const double a = 0.7;
  const auto g = tensor_exp(a * TruncatedTensor::letter(s, 1));
  double f = 1.0;
  for (int k = 1; k <= 4; ++k) {
    f *= k;
    CHECK(g.coeff(std::vector<int>(k, 1)) == doctest::Approx(std::pow(a, k) / f).epsilon(1e-15));
  }
  CHECK(g.coeff({1, 2}) == 0.0);
  CHECK_THROWS_AS(tensor_exp(TruncatedTensor::identity(s)), std::invalid_argument);
  CHECK_THROWS_AS(tensor_log(TruncatedTensor(s)), std::invalid_argument);
}

TEST_CASE("exp and log are mutually inverse") {
  std::mt19937_64 g(5);
  for (int d = 1; d <= 3; ++d)
    for (int n = 1; n <= 4; ++n) {
      const TensorShape s(d, n);
      for (int r = 0; r < 10; ++r) {
        const auto x = random_tensor(g, s, 0.0, 0.8);
        CHECK((tensor_log(tensor_exp(x)) - x).max_abs() < 1e-12);
        const auto y = random_tensor(g, s, 1.0, 0.8);
        CHECK((tensor_exp(tensor_log(y)) - y).max_abs() < 1e-12);
      }
    }
}

TEST_CASE("group inverse, associativity and symmetric level 2") {
  std::mt19937_64 g(7);
  const TensorShape s(3, 4);
  for (int r = 0; r < 20; ++r) {
    const GroupElement a = exp(random_lie(g, s));
    const GroupElement b = exp(random_lie(g, s));
    const GroupElement c = exp(random_lie(g, s));
    CHECK(((a * b) * c).tensor().max_abs() > 0.0);
    CHECK((((a * b) * c).tensor() - (a * (b * c)).tensor()).max_abs() < 1e-12);
    CHECK(((a * group_inverse(a)).tensor() - TruncatedTensor::identity(s)).max_abs() < 1e-12);
    CHECK(is_group_like(a));
    // Sym(level 2) = level1 (x) level1 / 2
    const auto l1 = a.tensor().level(1);
    const auto l2 = a.tensor().level(2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(0.5 * (l2[i * 3 + j] + l2[j * 3 + i]) == doctest::Approx(0.5 * l1[i] * l1[j]).epsilon(1e-12));
  }
  TruncatedTensor bad = TruncatedTensor::identity(s);
  bad.coeff({1, 1}) = 3.0;
  CHECK_FALSE(is_group_like(GroupElement(bad)));
  CHECK_THROWS_AS(GroupElement(TruncatedTensor(s)), std::invalid_argument);
}

TEST_CASE("Dynkin test separates Lie from non-Lie tensors") {
  const TensorShape s(2, 3);
  const auto e1 = TruncatedTensor::letter(s, 1);
  const auto e2 = TruncatedTensor::letter(s, 2);
  CHECK(is_lie(lie_bracket(e1, e2)));
  CHECK(is_lie(lie_bracket(e1, lie_bracket(e1, e2)) + 0.3 * e2));
  CHECK_FALSE(is_lie(e1 * e2));
  CHECK_FALSE(is_lie(e1 * e1));
  CHECK_THROWS_AS(LieElement::checked(e1 * e2), std::invalid_argument);
  std::mt19937_64 g(9);
  for (int r = 0; r < 20; ++r) CHECK(is_lie(log(exp(random_lie(g, TensorShape(3, 4)))).tensor(), 1e-10));
}

TEST_CASE("bracket words follow the right-normed convention") {
  const TensorShape s(2, 2);
  const auto t = bracket_word_tensor(BracketWord({1, 2}), s).tensor();
  CHECK(t.coeff({2, 1}) == 1.0);
  CHECK(t.coeff({1, 2}) == -1.0);
  CHECK(t.coeff({1, 1}) == 0.0);
  const TensorShape s3(2, 3);
  // (1,2,1) -> [e1,[e2,e1]] = e1e2e1 - e1e1e2 - e2e1e1 + e1e2e1
  const auto u = bracket_word_tensor(BracketWord({1, 2, 1}), s3).tensor();
  CHECK(u.coeff({1, 2, 1}) == 2.0);
  CHECK(u.coeff({1, 1, 2}) == -1.0);
  CHECK(u.coeff({2, 1, 1}) == -1.0);
  CHECK(bracket_word_tensor(BracketWord({1}), s).tensor().coeff({1}) == 1.0);
  CHECK(bracket_word_tensor(BracketWord({1, 1}), s).tensor().max_abs() == 0.0);
  CHECK_THROWS_AS(BracketWord({}), std::invalid_argument);
  CHECK_THROWS_AS(bracket_word_tensor(BracketWord({1, 2, 1}), s), std::invalid_argument);
  CHECK_THROWS_AS(bracket_word_tensor(BracketWord({3}), s), std::invalid_argument);
}

TEST_CASE("homogeneous norm: identity, letters, pure area") {
  const TensorShape s(2, 2);
  CHECK(homogeneous_norm(GroupElement::identity(s)) == 0.0);
  const double a = -1.7;
  CHECK(homogeneous_norm(exp(LieElement(a * TruncatedTensor::letter(s, 1)))) == doctest::Approx(std::abs(a)));
  const double lam = 0.3;
  const auto area = lie_bracket(TruncatedTensor::letter(s, 1), TruncatedTensor::letter(s, 2));
  CHECK(homogeneous_norm(exp(LieElement(lam * area))) == doctest::Approx(std::sqrt(std::sqrt(2.0) * lam)));
}

TEST_CASE("homogeneous norm is symmetric, subadditive and 1-homogeneous") {
  std::mt19937_64 g(13);
  for (int n = 1; n <= 4; ++n) {
    const TensorShape s(3, n);
    for (int r = 0; r < 25; ++r) {
      const GroupElement a = exp(random_lie(g, s, 1.0));
      const GroupElement b = exp(random_lie(g, s, 1.0));
      const double na = homogeneous_norm(a), nb = homogeneous_norm(b);
      CHECK(homogeneous_norm(group_inverse(a)) == doctest::Approx(na).epsilon(1e-12));
      CHECK(homogeneous_norm(a * b) <= na + nb + 1e-12);
      CHECK(homogeneous_norm(dilate(a, 2.5)) == doctest::Approx(2.5 * na).epsilon(1e-12));
      CHECK(homogeneous_norm(dilate(a, -0.5)) == doctest::Approx(0.5 * na).epsilon(1e-12));
    }
  }
}

TEST_CASE("dilation is a group automorphism") {
  std::mt19937_64 g(17);
  const TensorShape s(2, 4);
  const GroupElement a = exp(random_lie(g, s));
  const GroupElement b = exp(random_lie(g, s));
  CHECK((dilate(a * b, 0.7).tensor() - (dilate(a, 0.7) * dilate(b, 0.7)).tensor()).max_abs() < 1e-14);
}

TEST_CASE("centre: top-level exponentials commute, lower levels do not") {
  const TensorShape s(2, 3);
  const auto top = bracket_word_tensor(BracketWord({2, 1, 1}), s);
  const GroupElement c = exp(0.8 * top);
  CHECK(is_central(c));
  std::mt19937_64 g(19);
  for (int r = 0; r < 10; ++r) CHECK(commutator_residual(c, exp(random_lie(g, s))) < 1e-14);
  const auto low = bracket_word_tensor(BracketWord({2, 1}), s);
  CHECK_FALSE(is_central(exp(low)));
  CHECK_FALSE(is_central(exp(LieElement(TruncatedTensor::letter(s, 1)))));
  CHECK(is_central(GroupElement::identity(s)));
}

TEST_CASE("segment signature is exp of the increment") {
  const TensorShape s(3, 4);
  const std::vector<double> v{0.3, -1.2, 0.5};
  TruncatedTensor x(s);
  for (int i = 0; i < 3; ++i) x.coeff({i + 1}) = v[i];
  CHECK((segment_signature(v, s).tensor() - tensor_exp(x)).max_abs() < 1e-15);
  CHECK(segment_signature(v, s).tensor().coeff({2, 2, 2}) == doctest::Approx(-1.2 * -1.2 * -1.2 / 6.0));
  CHECK_THROWS_AS(segment_signature(std::vector<double>{1.0}, s), std::invalid_argument);
}
