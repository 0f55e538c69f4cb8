#include "roughlab/vector_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace roughlab {

namespace {

std::size_t ipow(int e, int j) {
  std::size_t r = 1;
  for (int i = 0; i < j; ++i) r *= static_cast<std::size_t>(e);
  return r;
}

Jet zero_jet(int e, int order) {
  Jet jt;
  jt.e = e;
  for (int j = 0; j <= order; ++j) jt.levels.emplace_back(static_cast<std::size_t>(e) * ipow(e, j), 0.0);
  return jt;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Level j at y from central differences of level j-1 along the last index.
std::vector<double> difference_level(const VectorField& f, const Vec& y, int j, double h) {
  const int e = f.dim();
  const std::size_t inner = ipow(e, j - 1);
  std::vector<double> out(static_cast<std::size_t>(e) * inner * e, 0.0);
  for (int i = 0; i < e; ++i) {
    Vec yp = y, ym = y;
    yp(i) += h;
    ym(i) -= h;
    const auto lp = f.jet(yp, j - 1).levels[j - 1];
    const auto lm = f.jet(ym, j - 1).levels[j - 1];
    for (int o = 0; o < e; ++o)
      for (std::size_t k = 0; k < inner; ++k)
        out[(o * inner + k) * e + i] = (lp[o * inner + k] - lm[o * inner + k]) / (2.0 * h);
  }
  return out;
}

}  // namespace

Mat Jet::jacobian() const {
  if (order() < 1) throw std::logic_error("jet has no first derivative");
  Mat j(e, e);
  for (int o = 0; o < e; ++o)
    for (int i = 0; i < e; ++i) j(o, i) = levels[1][o * e + i];
  return j;
}

int VectorField::max_order() const { return std::min(kUnboundedOrder, analytic_order() + 3); }

Jet VectorField::analytic_jet(const Vec& y, int order) const {
  if (order != 0) throw std::logic_error("analytic_jet: order beyond analytic_order");
  Jet jt;
  jt.e = dim_;
  Vec v = value(y);
  jt.levels.emplace_back(v.data(), v.data() + v.size());
  return jt;
}

Jet VectorField::jet(const Vec& y, int order) const {
  if (y.size() != dim_) throw std::invalid_argument("vector field: state has wrong dimension");
  if (order < 0) throw std::invalid_argument("vector field: negative derivative order");
  if (order > max_order())
    throw std::invalid_argument("vector field: derivative order " + std::to_string(order) +
                                " not available (max " + std::to_string(max_order()) + ")");
  const int a = analytic_order();
  if (order <= a) return analytic_jet(y, order);
  Jet jt = analytic_jet(y, a);
  const double scale = std::max(1.0, y.lpNorm<Eigen::Infinity>());
  for (int j = a + 1; j <= order; ++j) {
    const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (j - a + 2)) * scale;
    jt.levels.push_back(difference_level(*this, y, j, h));
  }
  return jt;
}

Vec VectorField::derivative(const Vec& y, const std::vector<Vec>& directions) const {
  const int k = static_cast<int>(directions.size());
  if (k == 0) return value(y);
  const Jet jt = jet(y, k);
  const int e = dim_;
  const std::size_t inner = ipow(e, k);
  Vec out = Vec::Zero(e);
  std::vector<int> digits(k, 0);
  for (std::size_t idx = 0; idx < inner; ++idx) {
    std::size_t r = idx;
    double w = 1.0;
    for (int p = k - 1; p >= 0; --p) {
      digits[p] = static_cast<int>(r % e);
      r /= e;
    }
    for (int p = 0; p < k; ++p) w *= directions[p](digits[p]);
    if (w == 0.0) continue;
    for (int o = 0; o < e; ++o) out(o) += jt.levels[k][o * inner + idx] * w;
  }
  return out;
}

double oracle_consistency(const VectorField& f, const Vec& y, int order) {
  order = std::min(order, f.max_order());
  double worst = 0.0;
  const double h = 1e-5 * std::max(1.0, y.lpNorm<Eigen::Infinity>());
  const Jet jt = f.jet(y, order);
  for (int j = 1; j <= order; ++j) {
    const auto fd = difference_level(f, y, j, h);
    const auto& an = jt.levels[j];
    double diff = 0.0;
    for (std::size_t k = 0; k < fd.size(); ++k) diff = std::max(diff, std::abs(fd[k] - an[k]));
    worst = std::max(worst, diff / std::max(1.0, max_abs(an)));
  }
  return worst;
}

// ---------------------------------------------------------------------------

Vec ZeroField::value(const Vec& y) const { return Vec::Zero(y.size()); }

Jet ZeroField::analytic_jet(const Vec&, int order) const { return zero_jet(dim(), order); }

LinearField::LinearField(Mat a) : VectorField(static_cast<int>(a.rows())), a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("linear field: matrix must be square");
  if (!a_.allFinite()) throw std::invalid_argument("linear field: matrix not finite");
}

Jet LinearField::analytic_jet(const Vec& y, int order) const {
  const int e = dim();
  Jet jt = zero_jet(e, order);
  Vec v = a_ * y;
  std::copy(v.data(), v.data() + e, jt.levels[0].begin());
  if (order >= 1)
    for (int o = 0; o < e; ++o)
      for (int i = 0; i < e; ++i) jt.levels[1][o * e + i] = a_(o, i);
  return jt;
}

CoordinateTrigField::CoordinateTrigField(int dim, int coordinate, double a, double b, double c)
    : VectorField(dim), m_(coordinate), a_(a), b_(b), c_(c) {
  if (coordinate < 0 || coordinate >= dim) throw std::invalid_argument("coordinate field: bad coordinate");
}

Vec CoordinateTrigField::value(const Vec& y) const {
  Vec v = Vec::Zero(dim());
  v(m_) = a_ * std::sin(y(m_)) + b_ * std::cos(y(m_)) + c_;
  return v;
}

Jet CoordinateTrigField::analytic_jet(const Vec& y, int order) const {
  const int e = dim();
  Jet jt = zero_jet(e, order);
  const double x = y(m_);
  for (int j = 0; j <= order; ++j) {
    const double shift = j * std::numbers::pi / 2.0;
    double v = a_ * std::sin(x + shift) + b_ * std::cos(x + shift);
    if (j == 0) v += c_;
    std::size_t idx = 0;
    for (int p = 0; p < j; ++p) idx = idx * e + m_;
    jt.levels[j][m_ * ipow(e, j) + idx] = v;
  }
  return jt;
}

TrigSumField::TrigSumField(int dim, std::vector<Mode> modes) : VectorField(dim), modes_(std::move(modes)) {
  for (const auto& m : modes_)
    if (m.out < 0 || m.out >= dim || m.freq.size() != dim)
      throw std::invalid_argument("trig field: mode does not fit the dimension");
}

std::shared_ptr<TrigSumField> TrigSumField::random(int dim, int modes_per_output, double scale, std::uint64_t seed) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(dim)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
  std::vector<Mode> modes;
  for (int o = 0; o < dim; ++o)
    for (int k = 0; k < modes_per_output; ++k) {
      Mode m{o, u(gen), ph(gen), Vec(dim)};
      for (int i = 0; i < dim; ++i) m.freq(i) = u(gen);
      modes.push_back(std::move(m));
    }
  return std::make_shared<TrigSumField>(dim, std::move(modes));
}

Vec TrigSumField::value(const Vec& y) const {
  Vec v = Vec::Zero(dim());
  for (const auto& m : modes_) v(m.out) += m.amp * std::sin(m.freq.dot(y) + m.phase);
  return v;
}

Jet TrigSumField::analytic_jet(const Vec& y, int order) const {
  const int e = dim();
  Jet jt = zero_jet(e, order);
  std::vector<int> digits;
  for (const auto& m : modes_) {
    const double theta = m.freq.dot(y) + m.phase;
    for (int j = 0; j <= order; ++j) {
      const double s = m.amp * std::sin(theta + j * std::numbers::pi / 2.0);
      const std::size_t inner = ipow(e, j);
      digits.assign(j, 0);
      for (std::size_t idx = 0; idx < inner; ++idx) {
        std::size_t r = idx;
        double w = s;
        for (int p = 0; p < j; ++p) {
          w *= m.freq(static_cast<int>(r % e));
          r /= e;
        }
        jt.levels[j][m.out * inner + idx] += w;
      }
    }
  }
  return jt;
}

SumField::SumField(int dim, std::vector<std::pair<double, FieldPtr>> terms) : VectorField(dim), terms_(std::move(terms)) {
  for (const auto& [c, f] : terms_)
    if (!f || f->dim() != dim) throw std::invalid_argument("sum field: term has wrong dimension");
}

Vec SumField::value(const Vec& y) const {
  Vec v = Vec::Zero(dim());
  for (const auto& [c, f] : terms_) v += c * f->value(y);
  return v;
}

int SumField::analytic_order() const {
  int m = kUnboundedOrder;
  for (const auto& t : terms_) m = std::min(m, t.second->max_order());
  return m;
}

int SumField::max_order() const { return analytic_order(); }

Jet SumField::analytic_jet(const Vec& y, int order) const {
  Jet jt = zero_jet(dim(), order);
  for (const auto& [c, f] : terms_) {
    const Jet t = f->jet(y, order);
    for (int j = 0; j <= order; ++j)
      for (std::size_t k = 0; k < jt.levels[j].size(); ++k) jt.levels[j][k] += c * t.levels[j][k];
  }
  return jt;
}

Jet apply_jet(const Jet& f, const Jet& u, int order) {
  const int e = f.e;
  if (f.order() < order + 1 || u.order() < order) throw std::invalid_argument("apply_jet: jets too short");
  Jet g = zero_jet(e, order);
  std::vector<int> digits;
  for (int j = 0; j <= order; ++j) {
    const std::size_t inner = ipow(e, j);
    digits.assign(j, 0);
    for (std::size_t idx = 0; idx < inner; ++idx) {
      std::size_t r = idx;
      for (int p = j - 1; p >= 0; --p) {
        digits[p] = static_cast<int>(r % e);
        r /= e;
      }
      for (unsigned mask = 0; mask < (1u << j); ++mask) {
        // i_S goes to F (after the contracted slot), the rest to U.
        std::size_t is = 0, ic = 0;
        for (int p = 0; p < j; ++p) {
          if (mask & (1u << p))
            is = is * e + digits[p];
          else
            ic = ic * e + digits[p];
        }
        const int s = std::popcount(mask);
        const std::size_t fs = ipow(e, s + 1);
        const std::size_t us = ipow(e, j - s);
        const std::size_t es = ipow(e, s);
        const auto& fl = f.levels[s + 1];
        const auto& ul = u.levels[j - s];
        for (int o = 0; o < e; ++o) {
          double acc = 0.0;
          for (int a = 0; a < e; ++a) acc += fl[o * fs + a * es + is] * ul[a * us + ic];
          g.levels[j][o * inner + idx] += acc;
        }
      }
    }
  }
  return g;
}

ApplyField::ApplyField(FieldPtr u, FieldPtr f) : VectorField(f ? f->dim() : 0), u_(std::move(u)), f_(std::move(f)) {
  if (!u_ || !f_ || u_->dim() != f_->dim()) throw std::invalid_argument("apply field: dimension mismatch");
  if (f_->max_order() < 1) throw std::invalid_argument("apply field: needs a first derivative of F");
}

Vec ApplyField::value(const Vec& y) const { return f_->jacobian(y) * u_->value(y); }

int ApplyField::analytic_order() const { return std::min(f_->max_order() - 1, u_->max_order()); }
int ApplyField::max_order() const { return analytic_order(); }

Jet ApplyField::analytic_jet(const Vec& y, int order) const {
  return apply_jet(f_->jet(y, order + 1), u_->jet(y, order), order);
}

BracketField::BracketField(FieldPtr u, FieldPtr v) : VectorField(u ? u->dim() : 0), u_(std::move(u)), v_(std::move(v)) {
  if (!u_ || !v_ || u_->dim() != v_->dim()) throw std::invalid_argument("bracket field: dimension mismatch");
  if (std::min(u_->max_order(), v_->max_order()) < 1)
    throw std::invalid_argument("bracket field: needs first derivatives");
}

Vec BracketField::value(const Vec& y) const {
  return v_->jacobian(y) * u_->value(y) - u_->jacobian(y) * v_->value(y);
}

int BracketField::analytic_order() const { return std::min(u_->max_order(), v_->max_order()) - 1; }
int BracketField::max_order() const { return analytic_order(); }

Jet BracketField::analytic_jet(const Vec& y, int order) const {
  const Jet ju = u_->jet(y, order + 1);
  const Jet jv = v_->jet(y, order + 1);
  Jet a = apply_jet(jv, ju, order);
  const Jet b = apply_jet(ju, jv, order);
  for (int j = 0; j <= order; ++j)
    for (std::size_t k = 0; k < a.levels[j].size(); ++k) a.levels[j][k] -= b.levels[j][k];
  return a;
}

// ---------------------------------------------------------------------------

int VectorFieldSystem::max_order() const {
  int m = kUnboundedOrder;
  for (const auto& f : fields) m = std::min(m, f->max_order());
  return m;
}

void VectorFieldSystem::validate() const {
  if (e < 1) throw std::invalid_argument("vector field system: state dimension must be positive");
  for (const auto& f : fields)
    if (!f || f->dim() != e) throw std::invalid_argument("vector field system: field has wrong dimension");
  if (drift && drift->dim() != e) throw std::invalid_argument("vector field system: drift has wrong dimension");
}

double system_oracle_consistency(const VectorFieldSystem& sys, int order, int points, double radius,
                                 std::uint64_t seed) {
  std::seed_seq seq{seed};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> u(-radius, radius);
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    Vec y(sys.e);
    for (int i = 0; i < sys.e; ++i) y(i) = u(gen);
    for (const auto& f : sys.fields) worst = std::max(worst, oracle_consistency(*f, y, order));
    if (sys.drift) worst = std::max(worst, oracle_consistency(*sys.drift, y, 1));
  }
  return worst;
}

}  // namespace roughlab
