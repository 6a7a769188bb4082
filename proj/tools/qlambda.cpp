// Copyright 2026 The qlambda Authors
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

// qlambda: check, run and property-test quantum lambda programs.
//
//   qlambda check FILE
//   qlambda run FILE [--mode M] [--scheduler S] [--seed N] [--max-steps K] ...
//   qlambda props SUITE [--count N] [--size S] [--seed N]
//
// Exit codes: 0 ok, 1 invalid program, 2 parse error, 3 resource guard,
// 4 property failure.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qlambda/analysis.hpp"
#include "qlambda/io.hpp"
#include "qlambda/parser.hpp"
#include "qlambda/rewrite.hpp"
#include "qlambda/syntax.hpp"

namespace {

using namespace qlambda;
using nlohmann::json;

enum Exit { kOk = 0, kInvalid = 1, kParse = 2, kGuard = 3, kProperty = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GateTable gates_for(const std::string& path) {
  return path.empty() ? GateTable::builtin() : load_gates_file(path);
}

// Writes to a file, or to stdout for "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    if (path == "-") {
      out_ = &std::cout;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
      out_ = file_.get();
    }
  }
  explicit operator bool() const { return out_ != nullptr; }
  std::ostream& operator*() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
};

int cmd_check(const std::string& file, const std::string& gates_path) {
  GateTable gates = gates_for(gates_path);
  ProgramText pt = parse_program_text(read_file(file), gates);
  ValidityReport rep = validate(pt.term);
  for (const auto& v : rep.violations)
    std::cout << file << ": " << violation_name(v.kind) << " at " << to_string(v.pos) << ": "
              << v.message << "\n";
  if (!rep.ok()) {
    std::cout << "invalid (" << rep.violations.size() << " violation"
              << (rep.violations.size() == 1 ? "" : "s") << ")\n";
    return kInvalid;
  }
  Program p(pt.state, pt.term);  // register/state agreement
  Engine engine(gates);
  std::cout << "valid: " << p.state().qubits() << " qubit(s), term size " << p.term().size()
            << ", " << engine.surface_redexes(p).size() << " surface redex(es)"
            << (engine.is_snf(p) ? ", surface normal form" : "") << "\n";
  return kOk;
}

struct RunOptions {
  std::string file;
  std::string mode = "strict";
  std::string scheduler = "leftmost";
  std::string script;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000;
  double delta = 1e-9;
  std::size_t window = 8;
  std::size_t max_qubits = kDefaultMaxQubits;
  std::string gates;
  std::string json_out;
  std::string csv_out;
  bool verbose = false;
};

int cmd_run(const RunOptions& o) {
  GateTable gates = gates_for(o.gates);
  Program p = parse_program(read_file(o.file), gates);
  Engine engine(gates, o.max_qubits);
  Mode mode = parse_mode(o.mode);

  std::unique_ptr<Scheduler> sched;
  if (o.scheduler == "script") {
    if (o.script.empty()) throw CLI::ValidationError("--scheduler script needs --script FILE");
    json j = json::parse(read_file(o.script));
    std::vector<Schedule> script;
    for (const auto& s : j) script.push_back(schedule_from_json(s));
    sched = std::make_unique<ScriptedScheduler>(std::move(script));
  } else {
    sched = make_scheduler(o.scheduler, o.seed);
  }

  Trace t = run(engine, MultiDistribution::singleton(p), mode, *sched,
                StopRule{o.max_steps, o.delta, o.window});

  if (Sink jsonl(o.json_out); jsonl)
    for (const auto& s : t.steps) *jsonl << trace_record(engine, s, mode).dump() << "\n";
  if (Sink csv(o.csv_out); csv) {
    *csv << "step,pr\n" << std::setprecision(17);
    for (const auto& s : t.steps) *csv << s.step << "," << s.pr_snf << "\n";
  }
  if (o.verbose)
    for (const auto& s : t.steps)
      std::cout << "step " << s.step << " pr=" << s.pr_snf << " " << format_mdist(s.mdist) << "\n";

  const MultiDistribution& last = t.last();
  if (!o.verbose || o.json_out == "-") {
    std::cout << "final:\n";
    for (const auto& e : last.entries())
      std::cout << "  " << std::setprecision(12) << e.weight << " " << format_program(e.program)
                << (engine.is_snf(e.program) ? "  [snf]" : "") << "\n";
  }
  std::cout << std::setprecision(12) << "steps=" << t.steps.back().step << " mode=" << mode_name(mode)
            << " stop=" << stop_reason_name(t.reason) << " pr=" << t.last_pr()
            << " limit=" << t.last_pr() << "\n";
  return kOk;
}

struct PropsOptions {
  std::string suite;
  std::size_t count = 100;
  std::size_t size = 12;
  std::uint64_t seed = 1;
  std::string profile = "mixed";
  std::size_t depth = 6;
  std::string json_out;
};

int cmd_props(const PropsOptions& o) {
  Engine engine;
  SuiteConfig cfg{o.count, o.size, o.seed, parse_profile(o.profile)};
  std::vector<PropertyVerdict> verdicts;
  auto start = std::chrono::steady_clock::now();
  if (o.suite == "diamond") {
    verdicts.push_back(diamond_suite(engine, cfg));
  } else if (o.suite == "random-descent") {
    verdicts.push_back(random_descent_suite(engine, cfg, o.depth));
  } else if (o.suite == "factorization") {
    verdicts.push_back(factorization_suite(engine, cfg));
  } else if (o.suite == "completeness") {
    verdicts.push_back(completeness_suite(engine, cfg));
  } else if (o.suite == "invariants") {
    verdicts = invariant_suites(engine, cfg);
  } else {
    throw CLI::ValidationError("unknown suite '" + o.suite + "'");
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool ok = true;
  json all = json::array();
  for (const auto& v : verdicts) {
    ok = ok && v.ok();
    all.push_back(v.to_json());
    std::cout << std::left << std::setw(18) << v.property << " tried=" << v.tried
              << " passed=" << v.passed << " failed=" << v.failed
              << " inconclusive=" << v.inconclusive << " skipped=" << v.skipped << "\n";
    for (const auto& c : v.counterexamples) std::cout << "  counterexample: " << c.dump() << "\n";
  }
  std::cout << std::fixed << std::setprecision(2) << "elapsed " << secs << " s\n";
  if (Sink out(o.json_out); out) *out << (verdicts.size() == 1 ? all[0] : all).dump(2) << "\n";
  return ok ? kOk : kProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum lambda-calculus rewriting engine"};
  app.require_subcommand(1);

  std::string check_file, check_gates;
  auto* check = app.add_subcommand("check", "parse and validate a program");
  check->add_option("file", check_file, "program file (.ql)")->required();
  check->add_option("--gates", check_gates, "JSON gate table");

  RunOptions ro;
  auto* runc = app.add_subcommand("run", "reduce a program and report Pr");
  runc->add_option("file", ro.file, "program file (.ql)")->required();
  runc->add_option("--mode", ro.mode, "general, surface or strict")->capture_default_str();
  runc->add_option("--scheduler", ro.scheduler, "leftmost, rightmost, random or script")
      ->capture_default_str();
  runc->add_option("--script", ro.script, "JSON list of schedules for --scheduler script");
  runc->add_option("--seed", ro.seed, "seed for the random scheduler")->capture_default_str();
  runc->add_option("--max-steps", ro.max_steps)->check(CLI::PositiveNumber)->capture_default_str();
  runc->add_option("--delta", ro.delta, "plateau threshold")->check(CLI::PositiveNumber)->capture_default_str();
  runc->add_option("--window", ro.window, "plateau window")->check(CLI::PositiveNumber)->capture_default_str();
  runc->add_option("--max-qubits", ro.max_qubits)->capture_default_str();
  runc->add_option("--gates", ro.gates, "JSON gate table");
  runc->add_option("--json", ro.json_out, "write a JSONL trace (- for stdout)");
  runc->add_option("--csv", ro.csv_out, "write the Pr curve as CSV (- for stdout)");
  runc->add_flag("-v,--verbose", ro.verbose, "print every step");

  PropsOptions po;
  auto* props = app.add_subcommand("props", "run a property suite on generated programs");
  props->add_option("suite", po.suite, "diamond, random-descent, factorization, completeness or invariants")
      ->required();
  props->add_option("--count", po.count)->capture_default_str();
  props->add_option("--size", po.size)->capture_default_str();
  props->add_option("--seed", po.seed)->capture_default_str();
  props->add_option("--profile", po.profile, "balanced, quantum-heavy, beta-heavy or mixed")
      ->capture_default_str();
  props->add_option("--depth", po.depth, "depth for random-descent")->capture_default_str();
  props->add_option("--json", po.json_out, "write the JSON report (- for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the parse-error status; --help stays 0.
    return app.exit(e) == 0 ? kOk : kParse;
  }

  try {
    if (*check) return cmd_check(check_file, check_gates);
    if (*runc) return cmd_run(ro);
    if (*props) return cmd_props(po);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ProgramError& e) {
    std::cerr << "invalid program: " << e.what() << "\n";
    return kInvalid;
  } catch (const CapacityError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kGuard;
  } catch (const GuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kGuard;
  } catch (const CLI::Error& e) {
    // Usage errors share the parse-error status; --help stays 0.
    return app.exit(e) == 0 ? kOk : kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kOk;
}
