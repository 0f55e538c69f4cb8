#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "roughlab/vector_field.hpp"

namespace roughlab {

/// V_i(y) = A_i y, optional linear drift V_0(y) = A_0 y.
VectorFieldSystem linear_system(const std::vector<Mat>& matrices, const Mat* drift = nullptr);

/// The bounded fields on R^e acting on the last coordinate:
/// V = sin(y_e) d_e, W = -cos(y_e) d_e, E = d_e, with [V,W] = E and [V,E] = W.
struct TrigFields {
  FieldPtr v, w, e;
};
TrigFields trig_fields(int e);

/// k driving fields V_1..V_k whose bracket [V_k,[...,[V_2,V_1]]] is E:
/// V_2 = ... = V_k = V and V_1 = W (k even) or E (k odd).
VectorFieldSystem trig_lemma42(int e, int k);

/// M = E_{1e}, N = -E_{11} + E_{ee}, A = E_{e1}, B = E_{1e}/2 on R^e, with
/// [A,M] = N and [B,N] = M.
struct LemmaMatrices {
  Mat m, n, a, b;
};
LemmaMatrices lemma_matrices(int e);

/// Matrices A_1..A_p with [A_p,[...,[A_2,A_1]]] = N: for p even
/// (M, A, B, A, ..., A), for p odd (N, B, A, B, ..., A).
std::vector<Mat> lemma_matrix_chain(int e, int p);

/// Linear fields y -> A_i^T y for the chain above; their bracket field along
/// (1, ..., p) is y -> N y.
VectorFieldSystem matrix_lemma43(int e, int p);

/// {"type":"linear","matrices":[...],"drift":[...]} |
/// {"type":"trig_lemma42","e":..,"k":..} | {"type":"matrix_lemma43","e":..,"p":..}.
VectorFieldSystem system_from_json(const nlohmann::json& config);

Mat matrix_from_json(const nlohmann::json& rows);

}  // namespace roughlab
