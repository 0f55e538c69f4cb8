// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "oracles.hpp"
#include "roughlab/approx.hpp"
#include "roughlab/builtin_fields.hpp"
#include "roughlab/experiments.hpp"
#include "roughlab/metrics.hpp"
#include "roughlab/rde.hpp"
#include "roughlab/stochastic.hpp"

using namespace roughlab;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool timed = secs < limit_s;
  const bool ok = o.ok && timed;
  if (!ok) ++failures;
  std::printf("%s  %d %-28s %s  [%.2fs / %.0fs]%s\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              limit_s, timed ? "" : " (over time)");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const Check* find(const ExperimentResult& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool check_passed(const ExperimentResult& r, const std::string& name) {
  const Check* c = find(r, name);
  return c && c->passed;
}

LieElement random_lie(std::mt19937_64& g, const TensorShape& s, double scale) {
  TruncatedTensor x(s);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::uniform_int_distribution<int> l(1, s.dim());
  for (int i = 1; i <= s.dim(); ++i) x += u(g) * TruncatedTensor::letter(s, i);
  for (int k = 2; k <= s.depth(); ++k)
    for (int r = 0; r < 3; ++r) {
      Word w(k);
      for (auto& a : w) a = l(g);
      x += u(g) * bracket_word_tensor(BracketWord(w), s).tensor();
    }
  return LieElement(x);
}

PiecewisePath random_path(std::mt19937_64& g, int d, std::size_t segs, double scale) {
  std::vector<double> times{0.0};
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (std::size_t j = 0; j < segs; ++j) times.push_back(times.back() + u(g));
  for (double& t : times) t /= times.back();
  return PiecewisePath(Dissection(times), d, oracle::random_vector(g, (segs + 1) * d, scale));
}

std::vector<Word> all_words(int d, int n) {
  std::vector<Word> out;
  const TensorShape s(d, n);
  for (std::size_t i = 0; i < s.level_size(n); ++i) out.push_back(index_word(s, n, i));
  return out;
}

Outcome algebra_suite() {
  std::mt19937_64 g(2024);
  double chen = 0, roundtrip = 0, assoc = 0, sym = 0, centre = 0;
  int cases = 0;
  for (int c = 0; c < 500; ++c, ++cases) {
    const int d = 1 + c % 3;
    const int n = 1 + (c / 3) % 4;
    const TensorShape s(d, n);

    // Chen against brute-force iterated integrals and against a split.
    const PiecewisePath x = random_path(g, d, 4, 0.8);
    const GroupElement sig = chen_signature(x, n);
    for (int k = 1; k <= n; ++k)
      for (std::size_t i = 0; i < s.level_size(k); ++i) {
        std::vector<std::vector<double>> incs;
        for (std::size_t j = 0; j + 1 < x.size(); ++j) incs.push_back(x.increment(j));
        chen = std::max(chen, std::abs(sig.tensor().level(k)[i] - oracle::iterated_integral(incs, index_word(s, k, i))));
      }
    const double m = x.breakpoints()[1] + 0.3 * (x.breakpoints()[3] - x.breakpoints()[1]);
    chen = std::max(chen, ((chen_signature(x, 0.0, m, n) * chen_signature(x, m, 1.0, n)).tensor() - sig.tensor()).max_abs());

    const LieElement la = random_lie(g, s, 0.6), lb = random_lie(g, s, 0.6), lc = random_lie(g, s, 0.6);
    const GroupElement a = exp(la), b = exp(lb), cc = exp(lc);
    roundtrip = std::max(roundtrip, (log(a).tensor() - la.tensor()).max_abs());
    roundtrip = std::max(roundtrip, (exp(log(sig)).tensor() - sig.tensor()).max_abs());
    assoc = std::max(assoc, (((a * b) * cc).tensor() - (a * (b * cc)).tensor()).max_abs());
    if (n >= 2) {
      const auto l1 = a.tensor().level(1);
      const auto l2 = a.tensor().level(2);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          sym = std::max(sym, std::abs(0.5 * (l2[i * d + j] + l2[j * d + i]) - 0.5 * l1[i] * l1[j]));
    }
    // Top-level exponentials commute with everything.
    TruncatedTensor top(s);
    auto lt = top.level(n);
    const auto v = oracle::random_vector(g, lt.size(), 0.7);
    for (std::size_t i = 0; i < lt.size(); ++i) lt[i] = v[i];
    const GroupElement z = exp(LieElement(top));
    centre = std::max(centre, ((z * a).tensor() - (a * z).tensor()).max_abs());
  }
  const bool ok = chen < 1e-12 && assoc < 1e-12 && sym < 1e-12 && centre < 1e-12 && roundtrip < 1e-10;
  char buf[256];
  std::snprintf(buf, sizeof buf, "cases=%d chen=%.1e assoc=%.1e sym=%.1e centre=%.1e exp/log=%.1e", cases, chen,
                assoc, sym, centre, roundtrip);
  return {ok, buf};
}

Outcome central_loops() {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  double top_rel = 0, low = 0;
  int loops = 0;
  for (int d = 2; d <= 3; ++d)
    for (int n = 2; n <= 4; ++n) {
      const TensorShape s(d, n);
      for (const Word& w : all_words(d, n)) {
        const LieElement ea = bracket_word_tensor(BracketWord(w), s);
        if (ea.tensor().max_abs() == 0.0) continue;
        const double lam = u(g);
        const PerturbationSpec v = PerturbationSpec::from_terms(s, {{BracketWord(w), 1.0}});
        const LieElement l = log(chen_signature(central_loop(v, lam), n));
        for (int k = 1; k < n; ++k)
          for (double c : l.tensor().level(k)) low = std::max(low, std::abs(c));
        TruncatedTensor diff = l.tensor() - lam * ea.tensor();
        top_rel = std::max(top_rel, diff.level_norm(n) / (lam * ea.tensor().level_norm(n)));
        ++loops;
      }
    }
  char buf[160];
  std::snprintf(buf, sizeof buf, "loops=%d top_rel=%.1e lower=%.1e", loops, top_rel, low);
  return {top_rel < 1e-10 && low < 1e-12, buf};
}

Outcome sussmann_exactness() {
  const auto smooth = run_sussmann(ExperimentConfig::from_json("sussmann", nlohmann::json::object()));
  const auto deep = run_sussmann(
      ExperimentConfig::from_json("sussmann", {{"d", 3}, {"depth", 3}, {"mesh_min", 3}, {"mesh_max", 6}}));
  const auto bm = run_sussmann(
      ExperimentConfig::from_json("sussmann", {{"driver", "brownian"}, {"mesh_min", 4}, {"mesh_max", 8}}));
  bool ok = true;
  double worst = 0.0;
  for (const auto* r : {&smooth, &deep, &bm}) {
    ok = ok && check_passed(*r, "grid_exactness") && check_passed(*r, "condition_i");
    worst = std::max(worst, find(*r, "grid_exactness")->value);
  }
  return {ok, fmt("exactness=%.1e, interval condition with c1=2 holds on smooth, N=3 and Brownian drivers", worst)};
}

Outcome mcshane_drift() {
  const auto r = run_mcshane(
      ExperimentConfig::from_json("mcshane", {{"samples", 10000}, {"mesh_min", 10}, {"mesh_max", 10}, {"seed", 1}}));
  const double z = r.table.numbers("z").back();
  const double mean = r.table.numbers("mean").back();
  const double target = r.table.numbers("target").back();
  const bool ok = std::abs(z) <= 3.0 && check_passed(r, "push_forward_vs_interpolation");
  char buf[160];
  std::snprintf(buf, sizeof buf, "mean=%.5f target=%.5f z=%.2f (n=2^10, 10^4 samples)", mean, target, z);
  return {ok, buf};
}

Outcome lemma_identities() {
  std::mt19937_64 g(99);
  VectorFieldSystem sys;
  sys.e = 2;
  for (int i = 0; i < 2; ++i) sys.fields.push_back(TrigSumField::random(2, 2, 0.8, 100 + i));
  double contraction = 0.0;
  std::vector<Word> words;
  for (int k = 1; k <= 3; ++k)
    for (const Word& w : all_words(2, k)) words.push_back(w);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int p = 0; p < 100; ++p) {
    Vec y(2);
    y << u(g), u(g);
    for (const Word& w : words) contraction = std::max(contraction, contraction_check(sys, BracketWord(w), y));
  }
  const TrigFields tf = trig_fields(2);
  const BracketField vw(tf.v, tf.w), ve(tf.v, tf.e);
  double trig = 0.0;
  for (int p = 0; p < 100; ++p) {
    Vec y(2);
    y << 3 * u(g), 3 * u(g);
    trig = std::max(trig, (vw.value(y) - tf.e->value(y)).norm());
    trig = std::max(trig, (ve.value(y) - tf.w->value(y)).norm());
  }
  bool exact = true;
  for (int e = 2; e <= 4; ++e) {
    const LemmaMatrices lm = lemma_matrices(e);
    exact = exact && (lm.a * lm.m - lm.m * lm.a - lm.n).norm() == 0.0 && (lm.b * lm.n - lm.n * lm.b - lm.m).norm() == 0.0;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "contraction=%.1e trig=%.1e matrices %s", contraction, trig,
                exact ? "exact" : "inexact");
  return {contraction < 1e-9 && trig < 1e-12 && exact, buf};
}

Outcome drift_equivalence() {
  const auto r = run_drift_equiv(ExperimentConfig::from_json("drift-equiv", nlohmann::json::object()));
  const auto diffs = r.table.numbers("sup_difference");
  const bool ok = check_passed(r, "difference_decreasing") && check_passed(r, "difference_at_finest");
  char buf[160];
  std::snprintf(buf, sizeof buf, "sup diff %.2e (2^-4) -> %.2e (2^-10)", diffs.front(), diffs.back());
  return {ok, buf};
}

Outcome optimality() {
  double e1 = 0.0, e2 = 0.0, spread = 0.0;
  bool ok = true;
  for (int p = 2; p <= 4; ++p) {
    const auto r = run_optimality(ExperimentConfig::from_json("optimality", {{"case", 1}, {"p", p}, {"lambda", 0.8}}));
    ok = ok && check_passed(r, "sup_error_case1") && check_passed(r, "pvar_homogeneity_spread");
    e1 = std::max(e1, find(r, "sup_error_case1")->value);
    spread = std::max(spread, find(r, "pvar_homogeneity_spread")->value);
  }
  for (int p = 2; p <= 3; ++p) {
    const auto r = run_optimality(ExperimentConfig::from_json("optimality", {{"case", 2}, {"p", p}}));
    ok = ok && check_passed(r, "relative_error_case2") && check_passed(r, "pvar_homogeneity_spread");
    e2 = std::max(e2, find(r, "relative_error_case2")->value);
    spread = std::max(spread, find(r, "pvar_homogeneity_spread")->value);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "case1 sup=%.1e case2 rel=%.1e pvar spread=%.1e", e1, e2, spread);
  return {ok, buf};
}

Outcome euler_order() {
  const auto r = run_euler_rate(ExperimentConfig::from_json("euler-rate", nlohmann::json::object()));
  std::string detail = "local slopes";
  for (int n = 1; n <= 3; ++n) detail += fmt(" %.2f", find(r, "local_slope_N" + std::to_string(n) + "_none")->value);
  detail += fmt(", drift omitted %.2f", find(r, "local_slope_N2_omitted")->value);
  return {r.passed(), detail};
}

Outcome doss_sussmann() {
  double worst = 0.0;
  for (std::uint64_t c = 0; c < 20; ++c) {
    std::mt19937_64 g(500 + c);
    const int e = 2 + static_cast<int>(c % 2);
    const int d = 1 + static_cast<int>(c % 3);
    VectorFieldSystem sys;
    sys.e = e;
    for (int i = 0; i < d; ++i) sys.fields.push_back(TrigSumField::random(e, 2, 0.7, 1000 * c + i));
    sys.drift = TrigSumField::random(e, 2, 0.7, 1000 * c + 99);
    const PiecewisePath x = random_path(g, d, 12, 0.8);
    auto y0v = oracle::random_vector(g, static_cast<std::size_t>(e), 1.0);
    const Vec y0 = Eigen::Map<Vec>(y0v.data(), e);
    const DossSussmannResult ds = doss_sussmann_solve(sys, x, y0);
    const Trajectory direct = ode_flow(sys, x, y0, 128);
    for (std::size_t i = 0; i < direct.states.size(); ++i)
      worst = std::max(worst, (ds.y.states[i] - direct.states[i]).lpNorm<Eigen::Infinity>());
  }
  return {worst < 1e-6, fmt("max deviation %.1e over 20 configurations", worst)};
}

}  // namespace

int main() {
  run(1, "algebra suite", 30, algebra_suite);
  run(2, "central-loop exactness", 60, central_loops);
  run(3, "Sussmann exactness", 60, sussmann_exactness);
  run(4, "McShane drift", 300, mcshane_drift);
  run(5, "lemma identities", 30, lemma_identities);
  run(6, "drift equivalence", 60, drift_equivalence);
  run(7, "optimality", 60, optimality);
  run(8, "Euler order", 120, euler_order);
  run(9, "Doss-Sussmann", 120, doss_sussmann);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
