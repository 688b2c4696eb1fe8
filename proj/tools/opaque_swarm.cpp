// Copyright 2026 The opaque-swarm Authors
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

// opaque_swarm: run experiments, replay counterexample demos, print the relation
// map and render traces.
//
//   opaque_swarm run --algo spi_lumi_async --gen n=6,seed=1 --schedule async:seed=2
//   opaque_swarm demo pseudo-false-election
//   opaque_swarm relmap --check
//   opaque_swarm render trace.jsonl -o trace.svg --at 2.5
//   opaque_swarm problems

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opaque_swarm/demos.hpp"
#include "opaque_swarm/experiment.hpp"
#include "opaque_swarm/relmap.hpp"
#include "opaque_swarm/render.hpp"
#include "opaque_swarm/trace_io.hpp"

namespace os = opaque_swarm;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OPAQUE_SWARM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed OPAQUE_SWARM_SEED=" << env << '\n';
    }
  }
  return 1;
}

os::Params parse_params(const std::string& text) {
  os::Params p;
  std::stringstream ss(text);
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    if (kv.empty()) continue;
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw os::UsageError("generator parameter needs key=value: " + kv);
    try {
      p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw os::UsageError("bad generator value: " + kv);
    }
  }
  return p;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

/// Reads "key = value" lines into "--key=value" tokens.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw os::UsageError("cannot open config file " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw os::UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    out.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
  }
  return out;
}

/// Splices config file tokens right after the subcommand so that flags given on
/// the command line, which come later, take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    std::size_t width = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      width = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      width = 1;
    } else {
      continue;
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + width));
    auto tokens = config_tokens(path);
    std::size_t at = std::min<std::size_t>(2, args.size());
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), tokens.begin(), tokens.end());
    break;
  }
  return args;
}

void print_outcome(std::ostream& out, const os::RunConfig& cfg, const os::RunOutcome& o) {
  const auto& r = o.resolved;
  const auto& p = o.monitor.progress;
  out << r.info.name << " on " << r.problem << " under " << os::to_string(r.model)
      << (r.transparent ? " (transparent)" : "") << ", seed " << cfg.seed << ", schedule " << r.schedule
      << ", horizon " << r.horizon << '\n';
  if (o.spec.perpetual)
    out << "  cycles completed: " << p.cycles << " (need " << o.spec.cycles_to_check << ")\n";
  else
    out << "  phases reached: " << p.phases_completed << "/" << o.spec.phases.size()
        << ", stable epochs after finish: " << p.stable_epochs << " (need " << o.spec.stability_epochs << ")\n";
  out << "  epochs: " << o.epochs << ", events: " << o.trace.events.size() << '\n';
  auto list = [&](const char* what, const std::vector<os::Violation>& vs) {
    for (const auto& v : vs)
      out << "  " << what << " " << os::to_string(v.kind) << " at t=" << v.t << ": " << v.details << '\n';
  };
  list("engine", o.trace.violations);
  list("monitor", o.monitor.violations);
  list("offline", o.collisions);
  out << "  result: " << (o.ok() ? "ok" : "FAILED") << '\n';
}

std::string batch_path(const std::string& base, std::uint64_t seed) {
  auto dot = base.rfind('.');
  auto slash = base.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + "." + std::to_string(seed);
  return base.substr(0, dot) + "." + std::to_string(seed) + base.substr(dot);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw os::UsageError("cannot write " + path);
  out << content;
}

struct RunFlags {
  os::RunConfig cfg;
  std::string model, gen, trace, report;
  double eps_rel = 1e-9, eps_abs = 1e-9;
  bool transparent = false, opaque = false;
  std::size_t batch = 1;
};

int cmd_run(RunFlags& f) {
  auto& cfg = f.cfg;
  if (!f.model.empty()) {
    cfg.model = os::parse_model(f.model);
    if (!cfg.model) throw os::UsageError("unknown model: " + f.model);
  }
  cfg.gen = parse_params(f.gen);
  cfg.tol = {f.eps_rel, f.eps_abs};
  if (f.transparent && f.opaque) throw os::UsageError("--transparent and --opaque are exclusive");
  if (f.transparent) cfg.transparent = true;
  if (f.opaque) cfg.transparent = false;
  os::resolve(cfg);
  if (f.batch <= 1) {
    auto o = os::execute(cfg);
    print_outcome(std::cout, cfg, o);
    if (!f.trace.empty()) write_file(f.trace, os::trace_to_string(o.trace));
    if (!f.report.empty()) write_file(f.report, os::report_json(cfg, o).dump(2) + "\n");
    return o.ok() ? 0 : kExitFailure;
  }
  std::vector<std::optional<os::RunOutcome>> outcomes(f.batch);
  std::vector<std::string> errors(f.batch);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < f.batch;) {
      auto c = cfg;
      c.seed = cfg.seed + k;
      try {
        outcomes[k] = os::execute(c);
        if (!f.trace.empty()) write_file(batch_path(f.trace, c.seed), os::trace_to_string(outcomes[k]->trace));
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(f.batch, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  nlohmann::json merged = nlohmann::json::array();
  std::size_t ok = 0;
  for (std::size_t k = 0; k < f.batch; ++k) {
    auto c = cfg;
    c.seed = cfg.seed + k;
    if (!outcomes[k]) {
      std::cout << "seed " << c.seed << ": error: " << errors[k] << '\n';
      merged.push_back({{"seed", c.seed}, {"error", errors[k]}, {"ok", false}});
      continue;
    }
    print_outcome(std::cout, c, *outcomes[k]);
    merged.push_back(os::report_json(c, *outcomes[k]));
    ok += outcomes[k]->ok();
  }
  std::cout << "batch: " << ok << "/" << f.batch << " runs ok\n";
  if (!f.report.empty()) write_file(f.report, merged.dump(2) + "\n");
  return ok == f.batch ? 0 : kExitFailure;
}

int cmd_demo(const std::string& name, bool all, const std::string& trace_path) {
  std::vector<os::DemoInfo> chosen;
  for (const auto& d : os::demo_list())
    if (all || d.name == name) chosen.push_back(d);
  if (chosen.empty()) {
    std::string known;
    for (const auto& d : os::demo_list()) known += " " + d.name;
    throw os::UsageError("unknown demo '" + name + "'; choose one of:" + known);
  }
  bool every = true;
  for (const auto& d : chosen) {
    auto rep = d.run();
    std::cout << rep.name << ": " << rep.headline << '\n';
    for (const auto& line : rep.details) std::cout << "  " << line << '\n';
    std::cout << "  " << (rep.reproduced ? "reproduced" : "NOT reproduced") << '\n';
    every = every && rep.reproduced;
    if (!trace_path.empty() && rep.trace)
      write_file(all ? batch_path(trace_path, static_cast<std::uint64_t>(&d - &chosen[0])) : trace_path,
                 os::trace_to_string(*rep.trace));
  }
  return every ? 0 : kExitFailure;
}

int cmd_relmap(const std::string& facts_path, const std::string& format, bool check, bool matrix) {
  auto facts = facts_path.empty() ? os::default_facts() : os::load_facts(facts_path);
  auto mx = os::close(facts);
  auto table = os::relation_table(mx);
  if (matrix) std::cout << os::format_matrix(mx) << '\n';
  if (format == "csv")
    std::cout << os::format_csv(table);
  else
    std::cout << os::format_text(table);
  if (!check) return 0;
  auto errors = os::check(table);
  for (const auto& e : errors) std::cout << "mismatch: " << e << '\n';
  std::cout << "check: " << (table.cells.size() - std::min(errors.size(), table.cells.size())) << "/"
            << os::expected_table().size() << " cells match" << (errors.empty() ? "" : ", FAILED") << '\n';
  return errors.empty() ? 0 : kExitFailure;
}

int cmd_render(const std::string& path, const std::string& out_path, const std::string& at) {
  std::ifstream in(path);
  if (!in) throw os::UsageError("cannot open trace " + path);
  auto trace = os::read_trace(in);
  os::RenderOptions opt;
  if (!at.empty()) {
    std::string v = at.rfind("t=", 0) == 0 ? at.substr(2) : at;
    try {
      opt.at = std::stod(v);
    } catch (const std::logic_error&) {
      throw os::UsageError("bad --at value: " + at);
    }
  }
  auto svg = os::render_svg(trace, opt);
  if (out_path.empty() || out_path == "-")
    std::cout << svg;
  else
    write_file(out_path, svg);
  return 0;
}

int cmd_problems(const std::string& show, const std::string& gen) {
  if (!show.empty()) {
    auto spec = os::make_problem(show, parse_params(gen));
    std::cout << os::instance_json(spec).dump(2) << '\n';
    return 0;
  }
  std::cout << "problems:\n";
  for (const auto& p : os::problem_list()) std::cout << "  " << p.name << "  " << p.title << "  (" << p.params << ")\n";
  std::cout << "algorithms:\n";
  for (const auto& a : os::algorithm_list())
    std::cout << "  " << a.name << "  problem=" << (a.problem.empty() ? "-" : a.problem)
              << "  weakest=" << os::to_string(a.weakest) << (a.transparent ? " transparent" : "")
              << (a.positive ? "" : "  (counterexample only)") << '\n';
  std::cout << "demos:\n";
  for (const auto& d : os::demo_list()) std::cout << "  " << d.name << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verifier for opaque look-compute-move robot swarms"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RunFlags rf;
  rf.cfg.seed = default_seed();
  auto* run = app.add_subcommand("run", "Execute one algorithm and check the problem monitors");
  run->add_option("--algo", rf.cfg.algorithm, "Algorithm name")->required();
  run->add_option("--model", rf.model, "Model, e.g. lumi,async or LUMI^A (default: weakest for the algorithm)");
  run->add_option("--problem", rf.cfg.problem, "Problem (default: the algorithm's problem)");
  run->add_option("--instance", rf.cfg.instance, "JSON instance file");
  run->add_option("--gen", rf.gen, "Generator parameters, e.g. n=6,seed=1");
  run->add_option("--schedule", rf.cfg.schedule, "fsync | ssync:seed=S,p=P | async:seed=S | script:<mode>:<path>");
  run->add_option("--horizon", rf.cfg.horizon, "Simulated time (default 200 for rounds, 600 for ASYNC)");
  run->add_flag("--transparent", rf.transparent, "Transparent robots");
  run->add_flag("--opaque", rf.opaque, "Opaque robots");
  run->add_option("--seed", rf.cfg.seed, "Run seed (default: $OPAQUE_SWARM_SEED or 1)");
  run->add_option("--eps-rel", rf.eps_rel, "Relative geometric tolerance");
  run->add_option("--eps-abs", rf.eps_abs, "Absolute geometric tolerance");
  run->add_option("--trace", rf.trace, "Write the JSON-lines trace here");
  run->add_option("--report", rf.report, "Write the JSON report here");
  run->add_option("--batch", rf.batch, "Run k consecutive seeds concurrently")->check(CLI::PositiveNumber);
  std::string config_path;
  run->add_option("--config", config_path, "key = value file (flags override it)");

  std::string demo_name, demo_trace;
  bool demo_all = false;
  auto* demo = app.add_subcommand("demo", "Replay a counterexample construction");
  demo->add_option("name", demo_name, "Demo name");
  demo->add_flag("--all", demo_all, "Run every demo");
  demo->add_option("--trace", demo_trace, "Write the demo trace here");

  std::string facts, format = "text";
  bool check = false, matrix = false;
  auto* relmap = app.add_subcommand("relmap", "Derive the model relation map from witness facts");
  relmap->add_option("--facts", facts, "Facts JSON file (default: embedded)");
  relmap->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  relmap->add_flag("--check", check, "Compare with the reference map");
  relmap->add_flag("--matrix", matrix, "Also print the solvability matrix");

  std::string trace_in, svg_out, at;
  auto* render = app.add_subcommand("render", "Render a trace as SVG");
  render->add_option("trace", trace_in, "JSON-lines trace")->required();
  render->add_option("-o,--out", svg_out, "Output SVG (default stdout)");
  render->add_option("--at", at, "Draw the configuration at time t");

  std::string show, show_gen;
  auto* problems = app.add_subcommand("problems", "List problems, algorithms and demos");
  problems->add_option("--show", show, "Print a generated instance as JSON");
  problems->add_option("--gen", show_gen, "Generator parameters for --show");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(rf);
    if (*demo) {
      if (demo_name.empty() && !demo_all) throw os::UsageError("demo needs a name or --all");
      return cmd_demo(demo_name, demo_all, demo_trace);
    }
    if (*relmap) return cmd_relmap(facts, format, check, matrix);
    if (*render) return cmd_render(trace_in, svg_out, at);
    if (*problems) return cmd_problems(show, show_gen);
  } catch (const os::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
