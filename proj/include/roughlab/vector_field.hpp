#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace roughlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Derivatives D^0 V, ..., D^m V of V : R^e -> R^e at a point. Level j holds
/// e * e^j numbers: entry (out, i1, ..., ij) at out * e^j + base-e index of
/// (i1, ..., ij), i1 most significant.
struct Jet {
  int e = 0;
  std::vector<std::vector<double>> levels;

  int order() const { return static_cast<int>(levels.size()) - 1; }
  Vec value() const { return Eigen::Map<const Vec>(levels[0].data(), e); }
  Mat jacobian() const;
};

inline constexpr int kUnboundedOrder = std::numeric_limits<int>::max() / 4;

class VectorField {
 public:
  explicit VectorField(int dim) : dim_(dim) {}
  virtual ~VectorField() = default;

  int dim() const { return dim_; }
  virtual Vec value(const Vec& y) const = 0;

  /// Highest derivative order with an exact oracle.
  virtual int analytic_order() const { return 0; }
  /// Highest order jet() will deliver; past analytic_order the extra levels
  /// come from nested central differences.
  virtual int max_order() const;

  Jet jet(const Vec& y, int order) const;
  Mat jacobian(const Vec& y) const { return jet(y, 1).jacobian(); }
  /// D^k V(y)[u_1, ..., u_k].
  Vec derivative(const Vec& y, const std::vector<Vec>& directions) const;

 protected:
  /// Levels 0..order with order <= analytic_order().
  virtual Jet analytic_jet(const Vec& y, int order) const;

 private:
  int dim_;
};

using FieldPtr = std::shared_ptr<const VectorField>;

/// Max over levels of the relative mismatch between jet() and central
/// differences of the level below, at y.
double oracle_consistency(const VectorField& f, const Vec& y, int order);

class ZeroField final : public VectorField {
 public:
  explicit ZeroField(int dim) : VectorField(dim) {}
  Vec value(const Vec& y) const override;
  int analytic_order() const override { return kUnboundedOrder; }

 protected:
  Jet analytic_jet(const Vec& y, int order) const override;
};

/// y -> A y.
class LinearField final : public VectorField {
 public:
  explicit LinearField(Mat a);
  const Mat& matrix() const { return a_; }
  Vec value(const Vec& y) const override { return a_ * y; }
  int analytic_order() const override { return kUnboundedOrder; }

 protected:
  Jet analytic_jet(const Vec& y, int order) const override;

 private:
  Mat a_;
};

/// (a sin(y_m) + b cos(y_m) + c) times the m-th unit vector; m is 0-based.
class CoordinateTrigField final : public VectorField {
 public:
  CoordinateTrigField(int dim, int coordinate, double a, double b, double c);
  Vec value(const Vec& y) const override;
  int analytic_order() const override { return kUnboundedOrder; }

 protected:
  Jet analytic_jet(const Vec& y, int order) const override;

 private:
  int m_;
  double a_, b_, c_;
};

/// V_out(y) = sum_k amp_k sin(<w_k, y> + phase_k): smooth, bounded, with all
/// derivatives bounded.
class TrigSumField final : public VectorField {
 public:
  struct Mode {
    int out;
    double amp;
    double phase;
    Vec freq;
  };
  TrigSumField(int dim, std::vector<Mode> modes);
  /// `modes_per_output` random modes per component; amplitudes and
  /// frequencies uniform in [-scale, scale].
  static std::shared_ptr<TrigSumField> random(int dim, int modes_per_output, double scale, std::uint64_t seed);

  Vec value(const Vec& y) const override;
  int analytic_order() const override { return kUnboundedOrder; }

 protected:
  Jet analytic_jet(const Vec& y, int order) const override;

 private:
  std::vector<Mode> modes_;
};

/// Sum of c_i F_i.
class SumField final : public VectorField {
 public:
  SumField(int dim, std::vector<std::pair<double, FieldPtr>> terms);
  Vec value(const Vec& y) const override;
  int analytic_order() const override;
  int max_order() const override;

 protected:
  Jet analytic_jet(const Vec& y, int order) const override;

 private:
  std::vector<std::pair<double, FieldPtr>> terms_;
};

/// G = DF . U, the first-order operator U applied to F. Derivatives follow
/// from the product rule on jets of F and U.
class ApplyField final : public VectorField {
 public:
  ApplyField(FieldPtr u, FieldPtr f);
  Vec value(const Vec& y) const override;
  int analytic_order() const override;
  int max_order() const override;

 protected:
  Jet analytic_jet(const Vec& y, int order) const override;

 private:
  FieldPtr u_, f_;
};

/// [U, V](y) = DV(y) U(y) - DU(y) V(y).
class BracketField final : public VectorField {
 public:
  BracketField(FieldPtr u, FieldPtr v);
  Vec value(const Vec& y) const override;
  int analytic_order() const override;
  int max_order() const override;

 protected:
  Jet analytic_jet(const Vec& y, int order) const override;

 private:
  FieldPtr u_, v_;
};

/// Jet of DF . U to `order`, from jets of F (order + 1) and U (order).
Jet apply_jet(const Jet& f, const Jet& u, int order);

/// Driving fields V_1..V_d on R^e and an optional drift V_0.
struct VectorFieldSystem {
  int e = 0;
  std::vector<FieldPtr> fields;
  FieldPtr drift;

  int d() const { return static_cast<int>(fields.size()); }
  bool has_drift() const { return static_cast<bool>(drift); }
  /// Smallest max_order() over the driving fields.
  int max_order() const;
  void validate() const;
};

/// Worst oracle_consistency over all fields (and drift, first order only) at
/// `points` random points in [-radius, radius]^e.
double system_oracle_consistency(const VectorFieldSystem& sys, int order, int points, double radius,
                                 std::uint64_t seed);

}  // namespace roughlab
