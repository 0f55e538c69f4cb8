#include "roughlab/approx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "roughlab/metrics.hpp"

namespace roughlab {

// ---------------------------------------------------------------------------
// PerturbationSpec

PerturbationSpec::PerturbationSpec(LieElement v, std::vector<BracketTerm> terms)
    : v_(std::move(v)), terms_(std::move(terms)) {}

PerturbationSpec PerturbationSpec::from_terms(const TensorShape& shape, std::vector<BracketTerm> terms) {
  TruncatedTensor v(shape);
  for (const auto& term : terms) {
    if (static_cast<int>(term.word.size()) != shape.depth())
      throw std::invalid_argument("perturbation term must have length N = " + std::to_string(shape.depth()));
    if (!std::isfinite(term.coeff)) throw std::invalid_argument("perturbation coefficient not finite");
    v += term.coeff * bracket_word_tensor(term.word, shape).tensor();
  }
  return PerturbationSpec(LieElement(std::move(v)), std::move(terms));
}

PerturbationSpec PerturbationSpec::zero(const TensorShape& shape) { return from_terms(shape, {}); }

PerturbationSpec PerturbationSpec::from_tensor(const TruncatedTensor& v, double tol) {
  const TensorShape& shape = v.shape();
  const int n = shape.depth();
  if (v.scalar() != 0.0) throw std::invalid_argument("perturbation: scalar part must be zero");
  for (int k = 1; k < n; ++k)
    for (double c : v.level(k))
      if (std::abs(c) > tol) throw std::invalid_argument("perturbation: levels below N must vanish");
  if (!is_lie(v, tol)) throw std::invalid_argument("perturbation: top level is not a Lie element");

  auto target = v.level(n);
  const Eigen::Index rows = static_cast<Eigen::Index>(target.size());
  if (v.level_norm(n) == 0.0) return zero(shape);

  std::vector<BracketWord> words;
  std::vector<std::vector<double>> cols;
  for (std::size_t idx = 0; idx < shape.level_size(n); ++idx) {
    Word w = index_word(shape, n, idx);
    if (n >= 2 && w[0] == w[1]) continue;  // [e_a, e_a] = 0
    BracketWord bw(w);
    auto t = bracket_word_tensor(bw, shape);
    auto lv = t.tensor().level(n);
    words.push_back(bw);
    cols.emplace_back(lv.begin(), lv.end());
  }
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (Eigen::Index r = 0; r < rows; ++r) a(r, static_cast<Eigen::Index>(c)) = cols[c][r];
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) b(r) = target[r];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  Eigen::MatrixXd basis(rows, rank);
  std::vector<BracketWord> chosen;
  for (Eigen::Index j = 0; j < rank; ++j) {
    const Eigen::Index col = qr.colsPermutation().indices()(j);
    basis.col(j) = a.col(col);
    chosen.push_back(words[col]);
  }
  Eigen::VectorXd coeffs = basis.colPivHouseholderQr().solve(b);
  const double resid = (basis * coeffs - b).lpNorm<Eigen::Infinity>();
  if (resid > tol * std::max(1.0, b.lpNorm<Eigen::Infinity>()))
    throw std::invalid_argument("perturbation: top level not spanned by bracket words");

  std::vector<BracketTerm> terms;
  for (Eigen::Index j = 0; j < rank; ++j)
    if (std::abs(coeffs(j)) > 1e-15) terms.push_back({chosen[j], coeffs(j)});
  // Keep the caller's tensor exactly; the terms reproduce it to round-off.
  return PerturbationSpec(LieElement(v), std::move(terms));
}

bool PerturbationSpec::is_zero() const { return tensor().max_abs() == 0.0; }

std::string PerturbationSpec::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms_) arr.push_back({{"word", t.word.letters()}, {"coeff", t.coeff}});
  return arr.dump();
}

PerturbationSpec PerturbationSpec::from_json(const std::string& text, const TensorShape& shape) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("perturbation JSON: ") + e.what());
  }
  if (!j.is_array()) throw std::invalid_argument("perturbation JSON: expected a list of terms");
  std::vector<BracketTerm> terms;
  for (const auto& item : j) {
    if (!item.contains("word") || !item.contains("coeff"))
      throw std::invalid_argument("perturbation JSON: each term needs 'word' and 'coeff'");
    terms.push_back({BracketWord(item.at("word").get<Word>()), item.at("coeff").get<double>()});
  }
  return from_terms(shape, std::move(terms));
}

// ---------------------------------------------------------------------------
// InterpolationFunction

namespace {

double levy_area(const PiecewisePath& p) {
  // (1/2) sum over segments of (p_j - p_0) x (p_{j+1} - p_j)
  auto p0 = p.point(0);
  double a = 0.0;
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    auto u = p.point(j);
    auto w = p.point(j + 1);
    const double rx = u[0] - p0[0], ry = u[1] - p0[1];
    const double dx = w[0] - u[0], dy = w[1] - u[1];
    a += rx * dy - ry * dx;
  }
  return 0.5 * a;
}

}  // namespace

InterpolationFunction::InterpolationFunction(PiecewisePath phi) : phi_(std::move(phi)), area_(0.0), max_speed_(0.0) {
  if (phi_.dim() != 2) throw std::invalid_argument("interpolation function must be planar");
  if (phi_.start_time() != 0.0 || phi_.end_time() != 1.0)
    throw std::invalid_argument("interpolation function must live on [0,1]");
  auto a = phi_.point(0);
  auto b = phi_.point(phi_.size() - 1);
  if (a[0] != 0.0 || a[1] != 0.0 || b[0] != 1.0 || b[1] != 1.0)
    throw std::invalid_argument("interpolation function must run from (0,0) to (1,1)");
  area_ = levy_area(phi_);
  for (std::size_t j = 0; j + 1 < phi_.size(); ++j) {
    auto inc = phi_.increment(j);
    const double dt = phi_.breakpoints()[j + 1] - phi_.breakpoints()[j];
    max_speed_ = std::max(max_speed_, std::hypot(inc[0], inc[1]) / dt);
  }
}

InterpolationFunction InterpolationFunction::from_sampler(const std::function<std::array<double, 2>(double)>& f,
                                                          int segments) {
  if (segments < 1) throw std::invalid_argument("from_sampler: need at least one segment");
  const Dissection grid = Dissection::uniform(0.0, 1.0, static_cast<std::size_t>(segments));
  std::vector<double> vals;
  vals.reserve(2 * grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    auto p = f(grid[j]);
    vals.push_back(p[0]);
    vals.push_back(p[1]);
  }
  const double tol = 1e-12;
  if (std::abs(vals[0]) > tol || std::abs(vals[1]) > tol || std::abs(vals[vals.size() - 2] - 1.0) > tol ||
      std::abs(vals.back() - 1.0) > tol)
    throw std::invalid_argument("from_sampler: phi(0) must be (0,0) and phi(1) must be (1,1)");
  vals[0] = vals[1] = 0.0;
  vals[vals.size() - 2] = vals.back() = 1.0;
  return InterpolationFunction(PiecewisePath(grid, 2, std::move(vals)));
}

InterpolationFunction InterpolationFunction::parabola(int segments) {
  return from_sampler([](double t) { return std::array<double, 2>{t, t * t}; }, segments);
}

InterpolationFunction InterpolationFunction::diagonal() {
  return from_sampler([](double t) { return std::array<double, 2>{t, t}; }, 1);
}

double InterpolationFunction::area(double u, double v) const {
  const GroupElement s = chen_signature(phi_, u, v, 2);
  return 0.5 * (s.tensor().coeff({1, 2}) - s.tensor().coeff({2, 1}));
}

InterpolationFunction InterpolationFunction::swapped() const {
  std::vector<double> vals(phi_.values().begin(), phi_.values().end());
  for (std::size_t j = 0; j + 1 < vals.size(); j += 2) std::swap(vals[j], vals[j + 1]);
  return InterpolationFunction(PiecewisePath(phi_.breakpoints(), 2, std::move(vals)));
}

// ---------------------------------------------------------------------------
// Loops

namespace {

// Signed unit steps: +a / -a means a unit move along e_a forwards / backwards.
using Steps = std::vector<int>;

Steps reversed(const Steps& s) {
  Steps r(s.rbegin(), s.rend());
  for (int& x : r) x = -x;
  return r;
}

// P(e_a) = [a];  P([e_b, w]) = e_b . P(w) . e_b^{-1} . P(w)^{-1}
Steps commutator_steps(const Word& letters) {
  Steps s{letters[0]};
  for (std::size_t j = 1; j < letters.size(); ++j) {
    Steps next{letters[j]};
    next.insert(next.end(), s.begin(), s.end());
    next.push_back(-letters[j]);
    Steps back = reversed(s);
    next.insert(next.end(), back.begin(), back.end());
    s = std::move(next);
  }
  return s;
}

bool bracket_vanishes(const BracketWord& w, const TensorShape& shape) {
  return bracket_word_tensor(w, shape).tensor().max_abs() == 0.0;
}

}  // namespace

double central_loop_length(const PerturbationSpec& v) {
  const int n = v.shape().depth();
  double len = 0.0;
  for (const auto& t : v.terms()) {
    if (t.coeff == 0.0 || bracket_vanishes(t.word, v.shape())) continue;
    len += std::pow(std::abs(t.coeff), 1.0 / n) * static_cast<double>(commutator_steps(t.word.letters()).size());
  }
  return len;
}

PiecewisePath central_loop(const PerturbationSpec& v, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("central_loop: lambda must be positive");
  const TensorShape& shape = v.shape();
  const int n = shape.depth();
  const int d = shape.dim();
  if (n < 2 && !v.is_zero()) throw std::invalid_argument("central_loop: a closed loop needs N >= 2");

  std::vector<double> step_len;
  std::vector<int> step_dir;
  for (const auto& t : v.terms()) {
    if (t.coeff == 0.0 || bracket_vanishes(t.word, shape)) continue;
    const double c = std::pow(lambda * std::abs(t.coeff), 1.0 / n);
    Steps s = commutator_steps(t.word.letters());
    if (t.coeff < 0.0) s = reversed(s);
    for (int x : s) {
      step_dir.push_back(x);
      step_len.push_back(c);
    }
  }

  if (step_dir.empty()) return PiecewisePath(Dissection({0.0, 1.0}), d, std::vector<double>(2 * d, 0.0));

  double total = 0.0;
  for (double l : step_len) total += l;
  std::vector<double> times{0.0};
  std::vector<double> vals(d, 0.0);
  std::vector<double> cur(d, 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < step_dir.size(); ++j) {
    const int a = std::abs(step_dir[j]) - 1;
    cur[a] += (step_dir[j] > 0 ? 1.0 : -1.0) * step_len[j];
    acc += step_len[j];
    times.push_back(acc / total);
    vals.insert(vals.end(), cur.begin(), cur.end());
  }
  times.back() = 1.0;
  // The loop closes exactly in exact arithmetic; remove the round-off residue.
  std::fill(vals.end() - d, vals.end(), 0.0);
  return PiecewisePath(Dissection(std::move(times)), d, std::move(vals));
}

PiecewisePath sussmann_approx(const PiecewisePath& x, const Dissection& grid, const PerturbationSpec& v) {
  if (x.dim() != v.shape().dim()) throw std::invalid_argument("sussmann_approx: dimension mismatch");
  if (v.shape().depth() < 2 && !v.is_zero()) throw std::invalid_argument("sussmann_approx: v must be central (N >= 2)");
  if (!v.is_zero() && !is_central(exp(v.lie()))) throw std::invalid_argument("sussmann_approx: v is not central");
  const int d = x.dim();
  std::vector<double> times{grid[0]};
  std::vector<double> vals = x.evaluate(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = grid[i - 1];
    const double b = grid[i];
    const double mid = 0.5 * (a + b);
    const std::vector<double> target = x.evaluate(b);
    times.push_back(mid);
    vals.insert(vals.end(), target.begin(), target.end());
    const PiecewisePath loop = path_translate(path_run_at_speed(central_loop(v, b - a), mid, b), target);
    for (std::size_t j = 1; j < loop.size(); ++j) {
      times.push_back(loop.breakpoints()[j]);
      auto p = loop.point(j);
      vals.insert(vals.end(), p.begin(), p.end());
    }
    // Land exactly on the sample.
    std::copy(target.begin(), target.end(), vals.end() - d);
    times.back() = b;
  }
  return PiecewisePath(Dissection(std::move(times)), d, std::move(vals));
}

PiecewisePath mcshane_interpolate(const PiecewisePath& x, const Dissection& grid, const InterpolationFunction& phi) {
  if (x.dim() != 2) throw std::invalid_argument("mcshane_interpolate: path must be two-dimensional");
  const PiecewisePath& f = phi.path();
  std::vector<double> times{grid[0]};
  std::vector<double> vals = x.evaluate(grid[0]);
  std::vector<double> left = vals;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = grid[i - 1];
    const double b = grid[i];
    const std::vector<double> right = x.evaluate(b);
    const double dx1 = right[0] - left[0];
    const double dx2 = right[1] - left[1];
    const bool swap = dx1 * dx2 < 0.0;
    for (std::size_t j = 1; j < f.size(); ++j) {
      const double u = f.breakpoints()[j];
      auto p = f.point(j);
      times.push_back(j + 1 == f.size() ? b : a + u * (b - a));
      vals.push_back(left[0] + (swap ? p[1] : p[0]) * dx1);
      vals.push_back(left[1] + (swap ? p[0] : p[1]) * dx2);
    }
    vals[vals.size() - 2] = right[0];
    vals[vals.size() - 1] = right[1];
    left = right;
  }
  return PiecewisePath(Dissection(std::move(times)), 2, std::move(vals));
}

GridRoughPath extract_perturbation(const PiecewisePath& xn, const PiecewisePath& xd, const Dissection& grid,
                                   int depth) {
  if (xn.dim() != xd.dim()) throw std::invalid_argument("extract_perturbation: dimension mismatch");
  if (xn.start_time() != xd.start_time() || xn.end_time() != xd.end_time())
    throw std::invalid_argument("extract_perturbation: domain mismatch");
  const GridRoughPath a = lift_on_grid(xn, grid, depth);
  const GridRoughPath b = lift_on_grid(xd, grid, depth);
  std::vector<GroupElement> p;
  p.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p.push_back(a[i] * group_inverse(b[i]));
  return GridRoughPath(grid, std::move(p));
}

ConditionReport check_condition_i(const PiecewisePath& xn, const PiecewisePath& xd, const Dissection& grid,
                                  double beta, double c1, double c2, double c3, int depth) {
  if (depth == 0) depth = std::max(1, static_cast<int>(std::lround(1.0 / beta)));
  ConditionReport rep;
  const Dissection& kn = xn.breakpoints();
  const double slack = 1e-9;
  rep.speed_bound_holds = true;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    IntervalCondition ic{0.0, 0.0, b - a};
    for (std::size_t j = kn.locate(a); j + 1 < kn.size() && kn[j] < b; ++j) {
      if (std::min(b, kn[j + 1]) - std::max(a, kn[j]) <= 0.0) continue;
      auto inc = xn.increment(j);
      double s = 0.0;
      for (double c : inc) s += c * c;
      ic.speed = std::max(ic.speed, std::sqrt(s) / (kn[j + 1] - kn[j]));
    }
    const auto pa = xd.evaluate(a);
    const auto pb = xd.evaluate(b);
    double s = 0.0;
    for (std::size_t k = 0; k < pa.size(); ++k) s += (pb[k] - pa[k]) * (pb[k] - pa[k]);
    ic.chord_speed = std::sqrt(s) / ic.length;

    const double loop_term = std::pow(ic.length, beta - 1.0);
    rep.c2_observed = std::max(rep.c2_observed, std::max(0.0, ic.speed - c1 * ic.chord_speed) / loop_term);
    if (ic.chord_speed > 0.0)
      rep.c1_observed = std::max(rep.c1_observed, std::max(0.0, ic.speed - c2 * loop_term) / ic.chord_speed);
    const double bound = c1 * ic.chord_speed + c2 * loop_term;
    const double ratio = bound > 0.0 ? ic.speed / bound : (ic.speed > 0.0 ? INFINITY : 0.0);
    rep.worst_speed_ratio = std::max(rep.worst_speed_ratio, ratio);
    if (ic.speed > bound * (1.0 + slack) + slack) rep.speed_bound_holds = false;
    rep.intervals.push_back(ic);
  }
  const GridRoughPath p = extract_perturbation(xn, xd, grid, depth);
  rep.c3_observed = holder_norm(p, beta);
  rep.perturbation_bound_holds = rep.c3_observed <= c3 * (1.0 + slack) + slack;
  return rep;
}

GridRoughPath perturbed_driver(const GridRoughPath& x, const PerturbationSpec& v) {
  if (!(x.shape() == v.shape())) throw std::invalid_argument("perturbed_driver: depth/dimension mismatch");
  if (!v.is_zero() && !is_central(exp(v.lie()))) throw std::invalid_argument("perturbed_driver: v is not central");
  const double t0 = x.grid().front();
  std::vector<GroupElement> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out.push_back(x[i] * exp((x.grid()[i] - t0) * v.lie()));
  return GridRoughPath(x.grid(), std::move(out));
}

}  // namespace roughlab
