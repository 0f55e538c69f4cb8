#include "roughlab/builtin_fields.hpp"

#include <stdexcept>
#include <string>

namespace roughlab {

VectorFieldSystem linear_system(const std::vector<Mat>& matrices, const Mat* drift) {
  if (matrices.empty()) throw std::invalid_argument("linear system: need at least one matrix");
  VectorFieldSystem sys;
  sys.e = static_cast<int>(matrices.front().rows());
  for (const auto& a : matrices) sys.fields.push_back(std::make_shared<LinearField>(a));
  if (drift) sys.drift = std::make_shared<LinearField>(*drift);
  sys.validate();
  return sys;
}

TrigFields trig_fields(int e) {
  if (e < 1) throw std::invalid_argument("trig fields: e must be positive");
  const int m = e - 1;
  return {std::make_shared<CoordinateTrigField>(e, m, 1.0, 0.0, 0.0),
          std::make_shared<CoordinateTrigField>(e, m, 0.0, -1.0, 0.0),
          std::make_shared<CoordinateTrigField>(e, m, 0.0, 0.0, 1.0)};
}

VectorFieldSystem trig_lemma42(int e, int k) {
  if (k < 1) throw std::invalid_argument("trig_lemma42: k must be positive");
  const TrigFields t = trig_fields(e);
  VectorFieldSystem sys;
  sys.e = e;
  sys.fields.push_back(k % 2 == 0 ? t.w : t.e);
  for (int i = 1; i < k; ++i) sys.fields.push_back(t.v);
  return sys;
}

LemmaMatrices lemma_matrices(int e) {
  if (e < 2) throw std::invalid_argument("lemma matrices: e must be at least 2");
  LemmaMatrices r{Mat::Zero(e, e), Mat::Zero(e, e), Mat::Zero(e, e), Mat::Zero(e, e)};
  r.m(0, e - 1) = 1.0;
  r.n(0, 0) = -1.0;
  r.n(e - 1, e - 1) = 1.0;
  r.a(e - 1, 0) = 1.0;
  r.b(0, e - 1) = 0.5;
  return r;
}

std::vector<Mat> lemma_matrix_chain(int e, int p) {
  if (p < 1) throw std::invalid_argument("lemma_matrix_chain: p must be positive");
  const LemmaMatrices lm = lemma_matrices(e);
  std::vector<Mat> chain;
  // Walk back from A_p = A, alternating A and B, and close with M or N.
  chain.push_back(p % 2 == 0 ? lm.m : lm.n);
  for (int i = 2; i <= p; ++i) chain.push_back((p - i) % 2 == 0 ? lm.a : lm.b);
  return chain;
}

VectorFieldSystem matrix_lemma43(int e, int p) {
  std::vector<Mat> chain = lemma_matrix_chain(e, p);
  for (auto& a : chain) a.transposeInPlace();
  return linear_system(chain);
}

Mat matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("matrix JSON: expected a list of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw std::invalid_argument("matrix JSON: matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[j].get<double>();
  }
  return m;
}

VectorFieldSystem system_from_json(const nlohmann::json& config) {
  try {
    const std::string type = config.at("type").get<std::string>();
    if (type == "linear") {
      std::vector<Mat> mats;
      for (const auto& m : config.at("matrices")) mats.push_back(matrix_from_json(m));
      for (const auto& m : mats)
        if (m.rows() != mats.front().rows()) throw std::invalid_argument("linear config: matrix sizes differ");
      if (config.contains("drift")) {
        const Mat d = matrix_from_json(config.at("drift"));
        if (mats.empty() || d.rows() != mats.front().rows())
          throw std::invalid_argument("linear config: drift size differs");
        return linear_system(mats, &d);
      }
      return linear_system(mats);
    }
    if (type == "trig_lemma42") return trig_lemma42(config.at("e").get<int>(), config.at("k").get<int>());
    if (type == "matrix_lemma43") return matrix_lemma43(config.at("e").get<int>(), config.at("p").get<int>());
    throw std::invalid_argument("unknown vector-field type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("vector-field config: ") + e.what());
  }
}

}  // namespace roughlab
