#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughlab/approx.hpp"
#include "roughlab/path.hpp"
#include "roughlab/vector_field.hpp"

namespace roughlab {

inline constexpr double kBlowUpBound = 1e12;

/// Non-finite state or |y| > kBlowUpBound.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, std::size_t step) : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;

  const Vec& final_state() const { return states.back(); }
  /// State at a stored time (exact match up to 1e-12 relative).
  const Vec& at(double t) const;
};

struct SolveReport {
  bool ok = true;
  std::size_t failed_step = 0;
  std::string message;
  Trajectory trajectory;
  /// |degree-N part of each Euler update|, a proxy for the local remainder.
  std::vector<double> remainder;
  Vec final_state;
};

/// Operator words F_w = V_{w1} ... V_{wk} I evaluated at y, V_{wk} innermost,
/// where (V f)(y) = Df(y) V(y). Result[k-1][word_index(w)] for 1 <= |w| <= depth.
std::vector<std::vector<Vec>> operator_word_values(const VectorFieldSystem& sys, const Vec& y, int depth);

/// y + sum_{|w| <= N} F_w(y) g^w + V_0(y) h.
Vec euler_step(const VectorFieldSystem& sys, const Vec& y, const GroupElement& g, double h,
               bool include_drift = true, double* remainder = nullptr);

/// Euler steps over consecutive grid increments of X.
SolveReport rde_solve_euler(const VectorFieldSystem& sys, const GridRoughPath& x, const Vec& y0,
                            bool include_drift = true);

/// RK4 for dy = V_0 dt + V dx along a piecewise-linear x, `substeps` steps per
/// segment; states at the breakpoints of x.
Trajectory ode_flow(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y0, int substeps,
                    bool include_drift = true);
/// Same flow from time s to time t; t < s runs the equation backwards.
Vec ode_flow_between(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y, double s, double t,
                     int substeps, bool include_drift = true);

struct FlowPoint {
  Vec y;
  Mat jacobian;
};
/// State and Jacobian J_{t<-s} = dy_t/dy_s along the flow from time s to t.
FlowPoint flow_with_jacobian(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y, double s,
                             double t, int substeps, bool include_drift = true);

struct JacobianTrajectory {
  Trajectory y;
  std::vector<Mat> jacobian;          // J_{t<-t0}
  std::vector<Mat> inverse_jacobian;  // J_{t0<-t}, from the reversed flow
  double inverse_residual = 0.0;      // max |J_{t0<-t} - (J_{t<-t0})^{-1}|
};
JacobianTrajectory jacobian_flow(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y0, int substeps,
                                 bool include_drift = true);

struct DossSussmannOptions {
  int steps_per_segment = 8;  // RK4 steps of the z-equation per segment of x
  int substeps = 16;          // RK4 steps per segment for the inner flows
};
struct DossSussmannResult {
  Trajectory y;  // U_{t<-0}(z_t) at the breakpoints of x
  Trajectory z;
  double inverse_residual = 0.0;  // worst reversed-flow vs matrix-inverse mismatch
};
/// z' = J_{0<-t}(z) V_0(U_{t<-0}(z)), z_0 = y0, with U the driftless flow.
DossSussmannResult doss_sussmann_solve(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y0,
                                       const DossSussmannOptions& opts = {});

/// V_alpha = [V_{ak},[...,[V_{a2}, V_{a1}]]].
FieldPtr bracket_vector_field(const VectorFieldSystem& sys, const BracketWord& alpha);

/// |sum_w F_w(y) (e_alpha)^w - V_alpha(y)|.
double contraction_check(const VectorFieldSystem& sys, const BracketWord& alpha, const Vec& y);

/// W = sum_{|w| = N} F_w v^w.
FieldPtr drift_field_W(const VectorFieldSystem& sys, const PerturbationSpec& v);

/// The system with drift V_0 + W.
VectorFieldSystem with_bracket_drift(const VectorFieldSystem& sys, const PerturbationSpec& v);

}  // namespace roughlab
