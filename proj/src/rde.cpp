#include "roughlab/rde.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace roughlab {

namespace {

std::size_t ipow(int d, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(d);
  return r;
}

Jet identity_jet(const Vec& y, int order) {
  const int e = static_cast<int>(y.size());
  Jet jt;
  jt.e = e;
  std::size_t inner = 1;
  for (int j = 0; j <= order; ++j, inner *= e) jt.levels.emplace_back(static_cast<std::size_t>(e) * inner, 0.0);
  std::copy(y.data(), y.data() + e, jt.levels[0].begin());
  if (order >= 1)
    for (int o = 0; o < e; ++o) jt.levels[1][o * e + o] = 1.0;
  return jt;
}

void guard(const Vec& y, std::size_t step) {
  if (!y.allFinite()) throw SolveError("non-finite state at step " + std::to_string(step), step);
  if (y.lpNorm<Eigen::Infinity>() > kBlowUpBound)
    throw SolveError("state exceeds blow-up bound at step " + std::to_string(step), step);
}

// dy/dt = V_0(y) [optional] + sum_i V_i(y) vel_i on one linear piece.
struct SegmentRhs {
  const VectorFieldSystem& sys;
  bool drift;
  Vec vel;

  Vec f(const Vec& y) const {
    Vec r = drift && sys.drift ? sys.drift->value(y) : Vec::Zero(sys.e);
    for (int i = 0; i < sys.d(); ++i)
      if (vel(i) != 0.0) r += vel(i) * sys.fields[i]->value(y);
    return r;
  }
  Mat df(const Vec& y) const {
    Mat r = drift && sys.drift ? sys.drift->jacobian(y) : Mat::Zero(sys.e, sys.e);
    for (int i = 0; i < sys.d(); ++i)
      if (vel(i) != 0.0) r += vel(i) * sys.fields[i]->jacobian(y);
    return r;
  }
};

void rk4(const SegmentRhs& rhs, Vec& y, Mat* jac, double dt, int n, std::size_t& step) {
  const double h = dt / n;
  for (int k = 0; k < n; ++k, ++step) {
    if (jac) {
      const Vec k1 = rhs.f(y);
      const Mat m1 = rhs.df(y) * *jac;
      const Vec y2 = y + 0.5 * h * k1;
      const Mat j2 = *jac + 0.5 * h * m1;
      const Vec k2 = rhs.f(y2);
      const Mat m2 = rhs.df(y2) * j2;
      const Vec y3 = y + 0.5 * h * k2;
      const Mat j3 = *jac + 0.5 * h * m2;
      const Vec k3 = rhs.f(y3);
      const Mat m3 = rhs.df(y3) * j3;
      const Vec y4 = y + h * k3;
      const Mat j4 = *jac + h * m3;
      const Vec k4 = rhs.f(y4);
      const Mat m4 = rhs.df(y4) * j4;
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      *jac += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    } else {
      const Vec k1 = rhs.f(y);
      const Vec k2 = rhs.f(y + 0.5 * h * k1);
      const Vec k3 = rhs.f(y + 0.5 * h * k2);
      const Vec k4 = rhs.f(y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    guard(y, step);
  }
}

Vec velocity(const PiecewisePath& x, std::size_t j) {
  const auto inc = x.increment(j);
  const double dt = x.breakpoints()[j + 1] - x.breakpoints()[j];
  Vec v(static_cast<Eigen::Index>(inc.size()));
  for (std::size_t i = 0; i < inc.size(); ++i) v(static_cast<Eigen::Index>(i)) = inc[i] / dt;
  return v;
}

void advance(const VectorFieldSystem& sys, const PiecewisePath& x, Vec& y, Mat* jac, double s, double t,
             int substeps, bool include_drift) {
  if (substeps < 1) throw std::invalid_argument("ode flow: substeps must be >= 1");
  if (x.dim() != sys.d()) throw std::invalid_argument("ode flow: driver dimension differs from number of fields");
  if (y.size() != sys.e) throw std::invalid_argument("ode flow: initial state has wrong dimension");
  const Dissection& k = x.breakpoints();
  const double lo = std::min(s, t), hi = std::max(s, t);
  if (lo < k.front() - 1e-12 || hi > k.back() + 1e-12) throw std::invalid_argument("ode flow: time outside path domain");
  std::size_t step = 0;
  auto piece = [&](std::size_t j) {
    const double a = std::max(lo, k[j]);
    const double b = std::min(hi, k[j + 1]);
    if (b <= a) return;
    const double frac = (b - a) / (k[j + 1] - k[j]);
    const int n = std::max(1, static_cast<int>(std::ceil(substeps * frac - 1e-9)));
    SegmentRhs rhs{sys, include_drift, velocity(x, j)};
    rk4(rhs, y, jac, t >= s ? b - a : a - b, n, step);
  };
  const std::size_t first = k.locate(lo), last = k.locate(hi);
  if (t >= s)
    for (std::size_t j = first; j <= last; ++j) piece(j);
  else
    for (std::size_t j = last + 1; j-- > first;) piece(j);
}

}  // namespace

const Vec& Trajectory::at(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t - 1e-12 * std::max(1.0, std::abs(t)));
  if (it == times.end() || std::abs(*it - t) > 1e-12 * std::max(1.0, std::abs(t)))
    throw std::out_of_range("trajectory: time not stored");
  return states[static_cast<std::size_t>(it - times.begin())];
}

std::vector<std::vector<Vec>> operator_word_values(const VectorFieldSystem& sys, const Vec& y, int depth) {
  const int d = sys.d();
  if (depth < 1) throw std::invalid_argument("operator words: depth must be >= 1");
  if (depth - 1 > sys.max_order())
    throw std::invalid_argument("operator words: fields lack derivatives of order " + std::to_string(depth - 1));
  std::vector<Jet> fj;
  for (const auto& f : sys.fields) fj.push_back(f->jet(y, depth - 1));
  // jets[L][idx] : jet of F_w for |w| = L, to order depth - L.
  std::vector<std::vector<Jet>> jets(depth + 1);
  jets[0].push_back(identity_jet(y, depth));
  std::vector<std::vector<Vec>> out(depth);
  for (int L = 1; L <= depth; ++L) {
    const std::size_t n = ipow(d, L), tail = ipow(d, L - 1);
    jets[L].reserve(n);
    out[L - 1].reserve(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
      const std::size_t head = idx / tail;
      jets[L].push_back(apply_jet(jets[L - 1][idx % tail], fj[head], depth - L));
      out[L - 1].push_back(jets[L].back().value());
    }
    if (L >= 2) jets[L - 1].clear();
  }
  return out;
}

Vec euler_step(const VectorFieldSystem& sys, const Vec& y, const GroupElement& g, double h, bool include_drift,
               double* remainder) {
  if (g.shape().dim() != sys.d()) throw std::invalid_argument("euler_step: increment dimension differs from d");
  const int n = g.depth();
  Vec out = y;
  if (n >= 1) {
    const auto words = operator_word_values(sys, y, n);
    for (int k = 1; k <= n; ++k) {
      const auto lv = g.tensor().level(k);
      Vec part = Vec::Zero(sys.e);
      for (std::size_t i = 0; i < lv.size(); ++i)
        if (lv[i] != 0.0) part += lv[i] * words[k - 1][i];
      out += part;
      if (k == n && remainder) *remainder = part.norm();
    }
  }
  if (include_drift && sys.drift) out += h * sys.drift->value(y);
  return out;
}

SolveReport rde_solve_euler(const VectorFieldSystem& sys, const GridRoughPath& x, const Vec& y0, bool include_drift) {
  sys.validate();
  if (y0.size() != sys.e) throw std::invalid_argument("rde_solve_euler: initial state has wrong dimension");
  SolveReport rep;
  Vec y = y0;
  rep.trajectory.times.push_back(x.grid()[0]);
  rep.trajectory.states.push_back(y);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double r = 0.0;
    y = euler_step(sys, y, x.increment(i, i + 1), x.grid()[i + 1] - x.grid()[i], include_drift, &r);
    if (!y.allFinite() || y.lpNorm<Eigen::Infinity>() > kBlowUpBound) {
      rep.ok = false;
      rep.failed_step = i;
      rep.message = (y.allFinite() ? "state exceeds blow-up bound" : "non-finite state") + std::string(" at step ") +
                    std::to_string(i);
      break;
    }
    rep.remainder.push_back(r);
    rep.trajectory.times.push_back(x.grid()[i + 1]);
    rep.trajectory.states.push_back(y);
  }
  rep.final_state = rep.trajectory.final_state();
  return rep;
}

Trajectory ode_flow(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y0, int substeps,
                    bool include_drift) {
  sys.validate();
  Trajectory tr;
  const Dissection& k = x.breakpoints();
  Vec y = y0;
  tr.times.push_back(k[0]);
  tr.states.push_back(y);
  for (std::size_t j = 0; j + 1 < k.size(); ++j) {
    advance(sys, x, y, nullptr, k[j], k[j + 1], substeps, include_drift);
    tr.times.push_back(k[j + 1]);
    tr.states.push_back(y);
  }
  return tr;
}

Vec ode_flow_between(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y, double s, double t,
                     int substeps, bool include_drift) {
  Vec out = y;
  advance(sys, x, out, nullptr, s, t, substeps, include_drift);
  return out;
}

FlowPoint flow_with_jacobian(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y, double s, double t,
                             int substeps, bool include_drift) {
  FlowPoint fp{y, Mat::Identity(sys.e, sys.e)};
  advance(sys, x, fp.y, &fp.jacobian, s, t, substeps, include_drift);
  return fp;
}

JacobianTrajectory jacobian_flow(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y0, int substeps,
                                 bool include_drift) {
  sys.validate();
  JacobianTrajectory out;
  const Dissection& k = x.breakpoints();
  FlowPoint fp{y0, Mat::Identity(sys.e, sys.e)};
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (j > 0) advance(sys, x, fp.y, &fp.jacobian, k[j - 1], k[j], substeps, include_drift);
    out.y.times.push_back(k[j]);
    out.y.states.push_back(fp.y);
    out.jacobian.push_back(fp.jacobian);
    // Reversed flow from (t, y_t) back to t0.
    const FlowPoint back = flow_with_jacobian(sys, x, fp.y, k[j], k[0], substeps, include_drift);
    out.inverse_jacobian.push_back(back.jacobian);
    out.inverse_residual =
        std::max(out.inverse_residual, (back.jacobian - fp.jacobian.inverse()).lpNorm<Eigen::Infinity>());
  }
  return out;
}

DossSussmannResult doss_sussmann_solve(const VectorFieldSystem& sys, const PiecewisePath& x, const Vec& y0,
                                       const DossSussmannOptions& opts) {
  sys.validate();
  if (opts.steps_per_segment < 1 || opts.substeps < 1)
    throw std::invalid_argument("doss_sussmann_solve: step counts must be >= 1");
  VectorFieldSystem free = sys;
  free.drift.reset();
  const Dissection& k = x.breakpoints();
  const double t0 = k[0];
  DossSussmannResult res;

  auto flow = [&](double t, const Vec& z) { return flow_with_jacobian(free, x, z, t0, t, opts.substeps); };
  auto w = [&](double t, const Vec& z) -> Vec {
    if (!sys.drift) return Vec::Zero(sys.e);
    const FlowPoint fwd = flow(t, z);
    const FlowPoint back = flow_with_jacobian(free, x, fwd.y, t, t0, opts.substeps);
    res.inverse_residual =
        std::max(res.inverse_residual, (back.jacobian - fwd.jacobian.inverse()).lpNorm<Eigen::Infinity>());
    return back.jacobian * sys.drift->value(fwd.y);
  };

  Vec z = y0;
  res.z.times.push_back(t0);
  res.z.states.push_back(z);
  res.y.times.push_back(t0);
  res.y.states.push_back(z);
  std::size_t step = 0;
  for (std::size_t j = 0; j + 1 < k.size(); ++j) {
    const double h = (k[j + 1] - k[j]) / opts.steps_per_segment;
    for (int i = 0; i < opts.steps_per_segment; ++i, ++step) {
      const double t = k[j] + i * h;
      const double tn = i + 1 == opts.steps_per_segment ? k[j + 1] : t + h;
      const Vec k1 = w(t, z);
      const Vec k2 = w(t + 0.5 * h, z + 0.5 * h * k1);
      const Vec k3 = w(t + 0.5 * h, z + 0.5 * h * k2);
      const Vec k4 = w(tn, z + h * k3);
      z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      guard(z, step);
    }
    res.z.times.push_back(k[j + 1]);
    res.z.states.push_back(z);
    res.y.times.push_back(k[j + 1]);
    res.y.states.push_back(flow(k[j + 1], z).y);
  }
  return res;
}

FieldPtr bracket_vector_field(const VectorFieldSystem& sys, const BracketWord& alpha) {
  for (int a : alpha.letters())
    if (a < 1 || a > sys.d()) throw std::invalid_argument("bracket_vector_field: letter out of range");
  const int need = static_cast<int>(alpha.size()) - 1;
  if (need > sys.max_order())
    throw std::invalid_argument("bracket_vector_field: word of length " + std::to_string(alpha.size()) +
                                " needs derivatives of order " + std::to_string(need));
  FieldPtr f = sys.fields[alpha[0] - 1];
  for (std::size_t j = 1; j < alpha.size(); ++j) f = std::make_shared<BracketField>(sys.fields[alpha[j] - 1], f);
  return f;
}

double contraction_check(const VectorFieldSystem& sys, const BracketWord& alpha, const Vec& y) {
  const int k = static_cast<int>(alpha.size());
  const TensorShape shape(sys.d(), k);
  const LieElement t = bracket_word_tensor(alpha, shape);
  const auto words = operator_word_values(sys, y, k);
  const auto lv = t.tensor().level(k);
  Vec lhs = Vec::Zero(sys.e);
  for (std::size_t i = 0; i < lv.size(); ++i)
    if (lv[i] != 0.0) lhs += lv[i] * words[k - 1][i];
  return (lhs - bracket_vector_field(sys, alpha)->value(y)).norm();
}

FieldPtr drift_field_W(const VectorFieldSystem& sys, const PerturbationSpec& v) {
  const TensorShape& shape = v.shape();
  if (shape.dim() != sys.d()) throw std::invalid_argument("drift_field_W: v has the wrong dimension");
  const int n = shape.depth();
  if (n - 1 > sys.max_order())
    throw std::invalid_argument("drift_field_W: fields lack derivatives of order " + std::to_string(n - 1));
  const int d = sys.d();
  const auto top = v.tensor().level(n);
  FieldPtr id = std::make_shared<LinearField>(Mat::Identity(sys.e, sys.e));
  // F_w keyed by (length, index); built on demand from F_{tail}.
  std::map<std::pair<int, std::size_t>, FieldPtr> memo;
  auto word_field = [&](auto&& self, int len, std::size_t idx) -> FieldPtr {
    if (len == 0) return id;
    auto key = std::make_pair(len, idx);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::size_t tail = ipow(d, len - 1);
    FieldPtr f = std::make_shared<ApplyField>(sys.fields[idx / tail], self(self, len - 1, idx % tail));
    memo.emplace(key, f);
    return f;
  };
  std::vector<std::pair<double, FieldPtr>> terms;
  for (std::size_t i = 0; i < top.size(); ++i)
    if (top[i] != 0.0) terms.emplace_back(top[i], word_field(word_field, n, i));
  if (terms.empty()) return std::make_shared<ZeroField>(sys.e);
  return std::make_shared<SumField>(sys.e, std::move(terms));
}

VectorFieldSystem with_bracket_drift(const VectorFieldSystem& sys, const PerturbationSpec& v) {
  VectorFieldSystem out = sys;
  FieldPtr w = drift_field_W(sys, v);
  if (sys.drift)
    out.drift = std::make_shared<SumField>(sys.e, std::vector<std::pair<double, FieldPtr>>{{1.0, sys.drift}, {1.0, w}});
  else
    out.drift = w;
  return out;
}

}  // namespace roughlab
