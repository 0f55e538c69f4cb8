// roughlab: experiment driver over the roughlab library.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "roughlab/experiments.hpp"
#include "roughlab/path_io.hpp"

using namespace roughlab;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int mesh_min = -1;
  int mesh_max = -1;
  std::size_t samples = 0;
  std::string out;
  std::string format = "csv";
  std::string config;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->add_option("--mesh-min", c.mesh_min, "smallest dissection exponent k (2^k intervals)");
  cmd->add_option("--mesh-max", c.mesh_max, "largest dissection exponent k");
  cmd->add_option("--samples", c.samples, "Monte-Carlo sample count");
  cmd->add_option("--out", c.out, "write the table here instead of stdout");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
}

ExperimentConfig make_config(const std::string& name, const Common& c, CLI::App* cmd) {
  nlohmann::json j = nlohmann::json::object();
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("cannot parse config '" + c.config + "': " + e.what());
    }
  }
  ExperimentConfig cfg = ExperimentConfig::from_json(name, j);
  if (cmd->count("--seed")) cfg.seed = c.seed;
  if (cmd->count("--mesh-min")) cfg.mesh_min = c.mesh_min;
  if (cmd->count("--mesh-max")) cfg.mesh_max = c.mesh_max;
  if (cmd->count("--samples")) cfg.samples = c.samples;
  return cfg;
}

int emit(const ExperimentResult& res, const Common& c) {
  const TableFormat f = parse_table_format(c.format);
  if (c.out.empty()) {
    res.table.write(std::cout, f);
  } else {
    std::ofstream out(c.out);
    if (!out) throw std::runtime_error("cannot write '" + c.out + "'");
    res.table.write(out, f);
  }
  for (const auto& ch : res.checks)
    std::fprintf(stderr, "%-40s %-14.6g %s\n", ch.name.c_str(), ch.value, ch.passed ? "PASS" : "FAIL");
  return res.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rough-path numerics experiments"};
  app.require_subcommand(1);

  Common sig_c;
  std::string sig_input;
  int sig_depth = 2;
  double sig_s = 0.0, sig_t = 0.0;
  auto* sig = app.add_subcommand("signature", "log-signature of a path CSV");
  sig->add_option("input", sig_input, "path CSV (t,x1,...,xd)")->required();
  sig->add_option("--depth,-N", sig_depth, "truncation depth")->check(CLI::Range(1, kMaxDepth));
  auto* opt_s = sig->add_option("--s", sig_s, "interval start");
  auto* opt_t = sig->add_option("--t", sig_t, "interval end");
  add_common(sig, sig_c);

  Common c_sus, c_mcs, c_de, c_opt, c_er;
  auto* sus = app.add_subcommand("sussmann", "Sussmann approximations with a central perturbation");
  add_common(sus, c_sus);
  auto* mcs = app.add_subcommand("mcshane", "McShane interpolation drift by Monte Carlo");
  add_common(mcs, c_mcs);
  auto* de = app.add_subcommand("drift-equiv", "perturbed-driver Euler vs bracket-drift ODE");
  add_common(de, c_de);
  auto* op = app.add_subcommand("optimality", "closed-form solutions driven by pure area");
  add_common(op, c_opt);
  int op_case = 1, op_p = 2;
  double op_lambda = 1.0;
  op->add_option("--case", op_case, "1 (bounded fields) or 2 (linear fields)")->check(CLI::IsMember({1, 2}));
  op->add_option("--p", op_p, "bracket length")->check(CLI::Range(1, kMaxDepth));
  op->add_option("--lambda", op_lambda, "area rate");
  auto* er = app.add_subcommand("euler-rate", "empirical orders of the step-N Euler scheme");
  add_common(er, c_er);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sig) {
      std::optional<double> s, t;
      if (opt_s->count()) s = sig_s;
      if (opt_t->count()) t = sig_t;
      return emit(run_signature(read_path_csv_file(sig_input), sig_depth, s, t), sig_c);
    }
    if (*sus) return emit(run_experiment(make_config("sussmann", c_sus, sus)), c_sus);
    if (*mcs) return emit(run_experiment(make_config("mcshane", c_mcs, mcs)), c_mcs);
    if (*de) return emit(run_experiment(make_config("drift-equiv", c_de, de)), c_de);
    if (*op) {
      ExperimentConfig cfg = make_config("optimality", c_opt, op);
      if (op->count("--case")) cfg.options["case"] = op_case;
      if (op->count("--p")) cfg.options["p"] = op_p;
      if (op->count("--lambda")) cfg.options["lambda"] = op_lambda;
      return emit(run_experiment(cfg), c_opt);
    }
    if (*er) return emit(run_experiment(make_config("euler-rate", c_er, er)), c_er);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "roughlab: %s\n", e.what());
    return 2;
  }
  return 2;
}
