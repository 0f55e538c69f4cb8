#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "roughlab/path.hpp"
#include "roughlab/tensor.hpp"

namespace roughlab {

struct BracketTerm {
  BracketWord word;
  double coeff;
};

/// Top-degree Lie element v, kept together with a decomposition into
/// right-normed bracket words of length N.
class PerturbationSpec {
 public:
  static PerturbationSpec from_terms(const TensorShape& shape, std::vector<BracketTerm> terms);
  /// Decomposes a homogeneous top-level Lie tensor into bracket words by a
  /// rank-revealing least-squares fit; rejects anything else.
  static PerturbationSpec from_tensor(const TruncatedTensor& v, double tol = 1e-10);
  static PerturbationSpec zero(const TensorShape& shape);

  const TensorShape& shape() const { return v_.shape(); }
  const LieElement& lie() const { return v_; }
  const TruncatedTensor& tensor() const { return v_.tensor(); }
  const std::vector<BracketTerm>& terms() const { return terms_; }
  bool is_zero() const;

  /// JSON list of {"word": [i1,...,iN], "coeff": c}.
  std::string to_json() const;
  static PerturbationSpec from_json(const std::string& text, const TensorShape& shape);

 private:
  PerturbationSpec(LieElement v, std::vector<BracketTerm> terms);
  LieElement v_;
  std::vector<BracketTerm> terms_;
};

/// phi : [0,1] -> R^2 with phi(0) = (0,0), phi(1) = (1,1), held as a fine
/// piecewise-linear path.
class InterpolationFunction {
 public:
  static constexpr int kDefaultSegments = 256;

  explicit InterpolationFunction(PiecewisePath phi);
  static InterpolationFunction from_sampler(const std::function<std::array<double, 2>(double)>& f,
                                            int segments = kDefaultSegments);
  static InterpolationFunction parabola(int segments = kDefaultSegments);  // (t, t^2)
  static InterpolationFunction diagonal();                                 // (t, t)

  const PiecewisePath& path() const { return phi_; }
  /// Signed area A^phi_{0,1} = (S^{12} - S^{21})/2.
  double area() const { return area_; }
  /// Area increment of phi over [u,v] in [0,1].
  double area(double u, double v) const;
  /// sup_t |phi'(t)| (Euclidean).
  double max_speed() const { return max_speed_; }
  /// (phi^2, phi^1).
  InterpolationFunction swapped() const;

 private:
  PiecewisePath phi_;
  double area_;
  double max_speed_;
};

/// Closed loop from the origin on [0,1], constant speed, with step-N signature
/// exp(lambda v): a concatenation of dilated commutator loops, one per term.
PiecewisePath central_loop(const PerturbationSpec& v, double lambda);
/// Length of central_loop(v, 1); central_loop(v, s) has length s^{1/N} times this.
double central_loop_length(const PerturbationSpec& v);

/// On each [t_{i-1}, t_i]: chord to x(t_i) at double speed, then the loop for
/// exp(v |t_i - t_{i-1}|) run at constant speed on the second half.
PiecewisePath sussmann_approx(const PiecewisePath& x, const Dissection& grid, const PerturbationSpec& v);

/// McShane interpolation of a planar path through its samples on `grid`.
PiecewisePath mcshane_interpolate(const PiecewisePath& x, const Dissection& grid,
                                  const InterpolationFunction& phi);

/// p_t = S_N(xn)_{0,t} (x) S_N(xD)^{-1}_{0,t} on the grid.
GridRoughPath extract_perturbation(const PiecewisePath& xn, const PiecewisePath& xd, const Dissection& grid,
                                   int depth);

struct IntervalCondition {
  double speed;          // |x^n|_{1-Hol} on the interval
  double chord_speed;    // |x^D|_{1-Hol} on the interval
  double length;         // |t_{i+1} - t_i|
};

struct ConditionReport {
  double c1_observed = 0.0;  // smallest c1 given the supplied c2
  double c2_observed = 0.0;  // smallest c2 given the supplied c1
  double c3_observed = 0.0;  // sup over grid pairs of |p_{s,t}| / |t-s|^beta
  double worst_speed_ratio = 0.0;
  std::vector<IntervalCondition> intervals;
  bool speed_bound_holds = false;
  bool perturbation_bound_holds = false;
  bool passed() const { return speed_bound_holds && perturbation_bound_holds; }
};

/// depth 0 means N = round(1/beta).
ConditionReport check_condition_i(const PiecewisePath& xn, const PiecewisePath& xd, const Dissection& grid,
                                  double beta, double c1, double c2, double c3, int depth = 0);

/// Increments exp(log g_{s,t} + v (t - s)); rejects non-central v.
GridRoughPath perturbed_driver(const GridRoughPath& x, const PerturbationSpec& v);

}  // namespace roughlab
