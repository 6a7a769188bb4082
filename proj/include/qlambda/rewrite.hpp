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

#ifndef QLAMBDA_REWRITE_HPP
#define QLAMBDA_REWRITE_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlambda/gates.hpp"
#include "qlambda/program.hpp"
#include "qlambda/term.hpp"

namespace qlambda {

enum class RedexKind { BetaLin, BetaBang, QNew, QUnary, QBinary, QMeas };

const char* redex_name(RedexKind k);
inline bool is_quantum(RedexKind k) { return k != RedexKind::BetaLin && k != RedexKind::BetaBang; }

struct RedexOccurrence {
  Position pos;
  RedexKind kind = RedexKind::BetaLin;
  bool is_surface = true;

  friend bool operator==(const RedexOccurrence&, const RedexOccurrence&) = default;
};

/// General lifting, its restriction to surface steps, and the strict
/// lifting that forces a surface step on every entry not in surface
/// normal form.
enum class Mode { General, Surface, StrictSurface };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

/// One choice per multidistribution entry; nullopt is Skip.
using Choice = std::optional<RedexOccurrence>;
using Schedule = std::vector<Choice>;

class StepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reduction engine: root rules, their contextual closure and the liftings
/// to multidistributions, over a fixed gate table and qubit capacity.
class Engine {
 public:
  explicit Engine(GateTable gates = GateTable::builtin(),
                  std::size_t max_qubits = kDefaultMaxQubits);

  const GateTable& gates() const { return gates_; }
  std::size_t max_qubits() const { return max_qubits_; }

  /// Rule whose left-hand side matches `t` at its root, if any. Quantum
  /// kinds are reported regardless of position; callers filter by surface.
  std::optional<RedexKind> classify(const Term& t) const;

  /// Beta redexes at every position, quantum redexes at surface positions
  /// only, in preorder.
  std::vector<RedexOccurrence> find_redexes(const Program& p) const;
  std::vector<RedexOccurrence> surface_redexes(const Program& p) const;
  /// Redexes a schedule may fire in `mode`.
  std::vector<RedexOccurrence> eligible(const Program& p, Mode mode) const;

  bool is_snf(const Program& p) const;

  /// Fires a redex sitting at the root of the program's term.
  MultiDistribution root_step(const Program& p, RedexKind kind) const;
  /// Fires `r` under its context. Throws StepError if `r` is not a redex
  /// occurrence of `p`.
  MultiDistribution step_at(const Program& p, const RedexOccurrence& r) const;

  /// Throws ScheduleError unless `s` is admissible for `m` in `mode`.
  void check_schedule(const MultiDistribution& m, const Schedule& s, Mode mode) const;
  MultiDistribution lift_step(const MultiDistribution& m, const Schedule& s, Mode mode) const;

  /// Every admissible schedule for `m` in `mode`, excluding the all-Skip
  /// schedule unless it is the only one. Throws GuardError past `limit`.
  std::vector<Schedule> all_schedules(const MultiDistribution& m, Mode mode,
                                      std::size_t limit = 200000) const;

  double snf_mass(const MultiDistribution& m) const;

 private:
  GateTable gates_;
  std::size_t max_qubits_;
};

class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- schedulers ---------------------------------------------------------------

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  /// nullopt ends the run (a scripted scheduler running out of schedules).
  virtual std::optional<Schedule> choose(const Engine& engine, const MultiDistribution& m,
                                         Mode mode, std::size_t step) = 0;
  virtual std::string name() const = 0;
};

/// First eligible redex in preorder on every entry that has one.
class LeftmostScheduler : public Scheduler {
 public:
  std::optional<Schedule> choose(const Engine&, const MultiDistribution&, Mode,
                                 std::size_t) override;
  std::string name() const override { return "leftmost"; }
};

class RightmostScheduler : public Scheduler {
 public:
  std::optional<Schedule> choose(const Engine&, const MultiDistribution&, Mode,
                                 std::size_t) override;
  std::string name() const override { return "rightmost"; }
};

/// Uniform choice per entry. Outside strict mode an entry may also Skip,
/// but never all entries at once.
class RandomScheduler : public Scheduler {
 public:
  explicit RandomScheduler(std::uint64_t seed) : rng_(seed) {}
  std::optional<Schedule> choose(const Engine&, const MultiDistribution&, Mode,
                                 std::size_t) override;
  std::string name() const override { return "random"; }

 private:
  std::mt19937_64 rng_;
};

class ScriptedScheduler : public Scheduler {
 public:
  explicit ScriptedScheduler(std::vector<Schedule> script) : script_(std::move(script)) {}
  std::optional<Schedule> choose(const Engine&, const MultiDistribution&, Mode,
                                 std::size_t step) override;
  std::string name() const override { return "script"; }

 private:
  std::vector<Schedule> script_;
};

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, std::uint64_t seed);

// ---- runs -------------------------------------------------------------------

struct StopRule {
  std::size_t max_steps = 1000;
  double delta = 1e-9;
  std::size_t window = 8;
};

struct TraceStep {
  std::size_t step = 0;
  Schedule schedule;  // empty for the initial multidistribution
  MultiDistribution mdist;
  double pr_snf = 0.0;
};

enum class StopReason { MaxSteps, Normalized, Plateau, ScriptEnded };
const char* stop_reason_name(StopReason r);

struct Trace {
  Mode mode = Mode::StrictSurface;
  std::vector<TraceStep> steps;
  StopReason reason = StopReason::MaxSteps;

  const MultiDistribution& last() const { return steps.back().mdist; }
  double last_pr() const { return steps.back().pr_snf; }
};

/// Iterates lift_step with schedules from `scheduler`. Stops after
/// `max_steps`, once every entry is in surface normal form, or on a plateau:
/// some mass has normalized and Pr(m_k) - Pr(m_{k-window}) < delta.
Trace run(const Engine& engine, const MultiDistribution& m0, Mode mode, Scheduler& scheduler,
          const StopRule& stop);

}  // namespace qlambda

#endif  // QLAMBDA_REWRITE_HPP
