// Copyright 2026 The sparsefuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/cli.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cli/bench.h"
#include "json.hpp"
#include "sparsefuse/constraints.h"
#include "sparsefuse/error.h"
#include "sparsefuse/executor.h"
#include "sparsefuse/lowering.h"
#include "sparsefuse/network.h"
#include "sparsefuse/oracle.h"
#include "sparsefuse/report.h"
#include "sparsefuse/solver.h"
#include "sparsefuse/tns_io.h"
#include "sparsefuse/verify.h"

namespace sparsefuse::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string network;
  std::vector<std::string> tensors;
  std::vector<std::string> synthetic;
  std::vector<std::string> layouts;
  int max_order = 0;
  int order = 0;
  bool check = false;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::string emit_ir;
  std::string stats;
  std::string output;
  std::string solution;
  std::string bind = "auto";
  std::uint64_t seed = 0;
  long timeout_ms = 10000;
  bool json = false;
  // bench
  std::string kind;
  std::string extents;
  Coord rank = 0;
  double density = -1.0;
  std::string out_dir;
};

struct Plan {
  int bound = 0;
  ScheduleSolution solution;
  IrPtr ir;
};

std::pair<std::string, std::string> split_assignment(const std::string& text,
                                                      const std::string& flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(ErrorCode::kInvalidArgument, flag + " expects <id>=<value>, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto at = text.find(sep, start);
    out.push_back(text.substr(start, at - start));
    if (at == std::string::npos) return out;
    start = at + 1;
  }
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::kInvalidArgument, "malformed " + what + " '" + text + "'");
  }
  return value;
}

std::vector<Coord> parse_extents(const std::string& text) {
  std::vector<Coord> out;
  for (const auto& part : split(text, 'x')) out.push_back(parse_number<Coord>(part, "extent"));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  out << text;
}

ModelOptions model_options(const ContractionTree& tree, const Options& opts) {
  ModelOptions mo;
  for (const auto& item : opts.layouts) {
    auto [id, perm_text] = split_assignment(item, "--layout");
    if (!tree.has_tensor(id)) fail(ErrorCode::kUnknownTensor, "unknown tensor " + id);
    std::vector<int> perm;
    for (const auto& p : split(perm_text, ',')) perm.push_back(parse_number<int>(p, "mode"));
    mo.fixed_layouts[id] = ModeOrder(perm);
  }
  return mo;
}

// Returns nullopt when no bound up to the maximum order admits a schedule.
std::optional<Plan> make_plan(const ContractionTree& tree, const Options& opts) {
  SolveOptions so;
  so.seed = opts.seed;
  so.budget = std::chrono::milliseconds(opts.timeout_ms);
  const ModelOptions mo = model_options(tree, opts);
  Plan plan;
  if (opts.order > 0) {
    auto sol = solve(build_model(tree, opts.order, mo), so);
    if (!sol) return std::nullopt;
    plan.bound = opts.order;
    plan.solution = std::move(*sol);
  } else {
    const int l_max = opts.max_order > 0 ? opts.max_order : default_max_order(tree);
    auto found = search_min_order(tree, l_max, so, mo);
    if (!found.solution) return std::nullopt;
    plan.bound = found.bound;
    plan.solution = std::move(*found.solution);
  }
  const auto violations = verify_solution(tree, plan.bound, plan.solution);
  if (!violations.empty()) {
    throw std::logic_error("solver output fails verification: " + violations.front());
  }
  plan.ir = lower(tree, plan.solution);
  return plan;
}

void emit_ir(const Plan& plan, const std::string& path) {
  if (path.empty()) return;
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  write_file(path, json ? ir_to_json(*plan.ir) : print_ir(*plan.ir) + "\n");
}

int unsat(const ContractionTree& tree, const Options& opts, std::ostream& err) {
  const int l = opts.order > 0 ? opts.order
                               : (opts.max_order > 0 ? opts.max_order : default_max_order(tree));
  err << "unsatisfiable: no schedule keeps every intermediate at order <= " << l << "\n";
  return kExitUnsat;
}

TensorMap load_inputs(const ContractionTree& tree, const Options& opts) {
  TensorMap inputs;
  auto claim = [&](const std::string& id) {
    if (!tree.has_tensor(id) || tree.role(id) != TensorRole::kInput) {
      fail(ErrorCode::kUnknownTensor, "'" + id + "' is not an input of the network");
    }
    if (inputs.count(id)) fail(ErrorCode::kInvalidArgument, "input " + id + " is given twice");
  };
  for (const auto& item : opts.tensors) {
    auto [id, path] = split_assignment(item, "--tensor");
    claim(id);
    inputs.emplace(id, read_tns_file(path, tree.tensor_shape(id)));
  }
  for (const auto& item : opts.synthetic) {
    auto [id, spec] = split_assignment(item, "--synthetic");
    claim(id);
    const auto fields = split(spec, ':');
    if (fields.size() != 3) {
      fail(ErrorCode::kInvalidArgument,
           "--synthetic expects <id>=<extents>:<density>:<seed>, got '" + item + "'");
    }
    const Shape shape(parse_extents(fields[0]));
    if (!(shape == tree.tensor_shape(id))) {
      fail(ErrorCode::kShapeMismatch, "synthetic " + id + " has shape " + shape.to_string() +
                                          " but the network expects " +
                                          tree.tensor_shape(id).to_string());
    }
    inputs.emplace(id, synthetic_tensor(shape, parse_number<double>(fields[1], "density"),
                                        parse_number<std::uint64_t>(fields[2], "seed")));
  }
  for (const auto& id : tree.inputs()) {
    if (!inputs.count(id)) fail(ErrorCode::kUnboundTensor, "no data given for input " + id);
  }
  return inputs;
}

BindMode bind_mode(const std::string& text) {
  if (text == "auto") return BindMode::kAuto;
  if (text == "sparse") return BindMode::kSparse;
  if (text == "dense") return BindMode::kDense;
  fail(ErrorCode::kInvalidArgument, "--bind must be auto, sparse or dense");
}

int execute_and_report(const ContractionTree& tree, const TensorMap& inputs,
                       const Options& opts, std::ostream& out, std::ostream& err) {
  const auto plan = make_plan(tree, opts);
  if (!plan) return unsat(tree, opts, err);
  emit_ir(*plan, opts.emit_ir);
  const Binding binding = bind_inputs(tree, plan->solution, inputs, bind_mode(opts.bind));
  const ExecResult result = execute(*plan->ir, binding);
  if (!opts.stats.empty()) write_file(opts.stats, result.stats.to_json());
  if (!opts.output.empty()) write_tns_file(opts.output, result.result);

  std::optional<CompareReport> report;
  std::string oracle_name;
  if (opts.check) {
    OracleResult expected;
    try {
      expected = oracle_nary(tree, inputs);
      oracle_name = "n-ary";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooLarge) throw;
      expected = oracle_unfused(tree, inputs, plan->solution.sequence());
      oracle_name = "unfused";
    }
    report = compare(result.result, expected.result, opts.rel_tol, opts.abs_tol);
  }

  if (opts.json) {
    Json doc;
    doc["bound"] = plan->bound;
    doc["ir"] = print_ir(*plan->ir);
    doc["result_nnz"] = result.result.nnz();
    doc["stats"] = Json::parse(result.stats.to_json());
    if (report) {
      doc["check"] = {{"oracle", oracle_name},
                      {"pass", report->pass},
                      {"points", report->points},
                      {"mismatches", report->mismatches},
                      {"max_abs_error", report->max_abs_error}};
    }
    out << doc.dump(2) << "\n";
  } else {
    out << "bound " << plan->bound << "\n";
    out << "ir " << print_ir(*plan->ir) << "\n";
    out << "result nnz " << result.result.nnz() << "\n";
    out << "multiply_adds " << result.stats.multiply_adds << "\n";
    out << "max_workspace_cells " << result.stats.max_workspace_cells << "\n";
    if (report) out << "check (" << oracle_name << " oracle) " << report->to_string() << "\n";
  }
  if (report && !report->pass) return kExitCheckFailed;
  return kExitOk;
}

int cmd_plan(const Options& opts, std::ostream& out, std::ostream& err) {
  const ContractionTree tree = load_network_file(opts.network);
  const auto plan = make_plan(tree, opts);
  if (!plan) return unsat(tree, opts, err);
  emit_ir(*plan, opts.emit_ir);
  if (!opts.output.empty()) write_file(opts.output, solution_report_json(tree, plan->solution));
  if (opts.json) {
    Json doc = Json::parse(solution_report_json(tree, plan->solution));
    doc["ir"] = print_ir(*plan->ir);
    out << doc.dump(2) << "\n";
  } else {
    out << solution_report_text(tree, plan->solution);
    out << "ir " << print_ir(*plan->ir) << "\n";
  }
  return kExitOk;
}

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err) {
  const ContractionTree tree = load_network_file(opts.network);
  const TensorMap inputs = load_inputs(tree, opts);
  return execute_and_report(tree, inputs, opts, out, err);
}

int cmd_verify(const Options& opts, std::ostream& out, std::ostream& err) {
  const ContractionTree tree = load_network_file(opts.network);
  if (!opts.solution.empty()) {
    const ScheduleSolution sol = parse_solution_json(tree, read_file(opts.solution));
    const int l = opts.order > 0 ? opts.order : sol.bound;
    const auto violations = verify_solution(tree, l, sol);
    for (const auto& v : violations) out << "violated: " << v << "\n";
    out << (violations.empty() ? "pass" : "fail") << " at bound " << l << "\n";
    return violations.empty() ? kExitOk : kExitCheckFailed;
  }
  SolveOptions so;
  so.seed = opts.seed;
  so.budget = std::chrono::milliseconds(opts.timeout_ms);
  const ModelOptions mo = model_options(tree, opts);
  const bool exhaustive = mo.fixed_layouts.empty() && tree.size() <= 3 &&
                          std::all_of(tree.contractions().begin(), tree.contractions().end(),
                                      [](const Contraction& c) { return c.index_set().size() <= 5; });
  const int l_max = opts.max_order > 0 ? opts.max_order : default_max_order(tree);
  bool ok = true;
  for (int l = 1; l <= l_max; ++l) {
    const auto sol = solve(build_model(tree, l, mo), so);
    out << "bound " << l << ": solver " << (sol ? "sat" : "unsat");
    if (sol) {
      const auto violations = verify_solution(tree, l, *sol);
      out << ", checker " << (violations.empty() ? "pass" : "fail");
      ok = ok && violations.empty();
    }
    if (exhaustive) {
      const bool sat = brute_force_sat(tree, l);
      out << ", exhaustive " << (sat ? "sat" : "unsat");
      ok = ok && sat == sol.has_value();
    }
    out << "\n";
  }
  (void)err;
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_bench(const Options& opts, std::ostream& out, std::ostream& err) {
  BenchParams params;
  if (!opts.extents.empty()) params.extents = parse_extents(opts.extents);
  params.rank = opts.rank;
  params.density = opts.density;
  params.seed = opts.seed;
  const BenchInstance inst = bench_generate(opts.kind, params);
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    const std::filesystem::path dir(opts.out_dir);
    write_file((dir / "network.txt").string(), inst.network_text);
    for (const auto& [id, t] : inst.inputs) write_tns_file((dir / (id + ".tns")).string(), t);
  }
  if (!opts.json) out << inst.network_text;
  Options run_opts = opts;
  run_opts.seed = 0;
  return execute_and_report(inst.tree, inst.inputs, run_opts, out, err);
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-order", o.max_order, "Largest fusion bound to try")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--order", o.order, "Solve at this bound only")->check(CLI::PositiveNumber);
  cmd->add_option("--layout", o.layouts, "Pin a CSF layout: <id>=<mode,mode,...>");
  cmd->add_option("--timeout-ms", o.timeout_ms, "Solver budget per bound")
      ->check(CLI::PositiveNumber);
}

void add_run_flags(CLI::App* cmd, Options& o) {
  add_solver_flags(cmd, o);
  cmd->add_flag("--check", o.check, "Compare against a reference evaluation");
  cmd->add_option("--rel-tol", o.rel_tol, "Relative tolerance for --check");
  cmd->add_option("--abs-tol", o.abs_tol, "Absolute tolerance for --check");
  cmd->add_option("--emit-ir", o.emit_ir, "Write the IR (text, or JSON for *.json)");
  cmd->add_option("--stats", o.stats, "Write execution counters as JSON");
  cmd->add_option("--output", o.output, "Write the result tensor (.tns)");
  cmd->add_option("--bind", o.bind, "Operand storage: auto, sparse or dense");
  cmd->add_flag("--json", o.json, "Print a JSON summary");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Schedules, lowers and runs sparse tensor contraction trees.", "sparsefuse"};
  app.require_subcommand(1);

  auto* plan = app.add_subcommand("plan", "Solve for the smallest fusion bound and print the schedule and IR");
  plan->add_option("--network", o.network, "Network spec (text or JSON)")->required();
  add_solver_flags(plan, o);
  plan->add_option("--seed", o.seed, "Solver tie-break seed (0 = default ordering)");
  plan->add_option("--emit-ir", o.emit_ir, "Write the IR (text, or JSON for *.json)");
  plan->add_option("--output", o.output, "Write the solution report as JSON");
  plan->add_flag("--json", o.json, "Print the report as JSON");

  auto* run = app.add_subcommand("run", "Plan, execute on input tensors and optionally check");
  run->add_option("--network", o.network, "Network spec (text or JSON)")->required();
  run->add_option("--tensor", o.tensors, "Input from a .tns file: <id>=<path>");
  run->add_option("--synthetic", o.synthetic,
                  "Random input: <id>=<extents>:<density>:<seed>, extents like 6x6x6");
  run->add_option("--seed", o.seed, "Solver tie-break seed (0 = default ordering)");
  add_run_flags(run, o);

  auto* verify = app.add_subcommand(
      "verify", "Check a solution file, or cross-check the solver at every bound");
  verify->add_option("--network", o.network, "Network spec (text or JSON)")->required();
  verify->add_option("--solution", o.solution, "Solution report written by plan --output");
  verify->add_option("--seed", o.seed, "Solver tie-break seed (0 = default ordering)");
  add_solver_flags(verify, o);

  auto* bench = app.add_subcommand("bench", "Generate a benchmark network with data and run it");
  bench->add_option("--kind", o.kind, "One of: " + [] {
    std::string names;
    for (const auto& k : bench_kinds()) names += (names.empty() ? "" : ", ") + k;
    return names;
  }())->required();
  bench->add_option("--extents", o.extents, "Extents like 30x40x50");
  bench->add_option("--rank", o.rank, "Factor rank")->check(CLI::PositiveNumber);
  bench->add_option("--density", o.density, "Density of the sparse operands");
  bench->add_option("--seed", o.seed, "Data seed");
  bench->add_option("--out-dir", o.out_dir, "Also write network.txt and <id>.tns here");
  add_run_flags(bench, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*plan) return cmd_plan(o, out, err);
    if (*run) return cmd_run(o, out, err);
    if (*verify) return cmd_verify(o, out, err);
    if (*bench) return cmd_bench(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sparsefuse::cli
