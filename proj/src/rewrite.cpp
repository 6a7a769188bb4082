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

#include "qlambda/rewrite.hpp"

#include <algorithm>

#include "qlambda/syntax.hpp"

namespace qlambda {

namespace {

std::optional<std::pair<std::uint32_t, std::uint32_t>> register_pair(const Term& t) {
  auto p = match_pair(t);
  if (!p || !p->first.is(TermKind::Reg) || !p->second.is(TermKind::Reg)) return std::nullopt;
  if (p->first.index() == p->second.index()) return std::nullopt;
  return std::make_pair(p->first.index(), p->second.index());
}

}  // namespace

const char* redex_name(RedexKind k) {
  switch (k) {
    case RedexKind::BetaLin: return "BetaLin";
    case RedexKind::BetaBang: return "BetaBang";
    case RedexKind::QNew: return "QNew";
    case RedexKind::QUnary: return "QUnary";
    case RedexKind::QBinary: return "QBinary";
    case RedexKind::QMeas: return "QMeas";
  }
  return "?";
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::General: return "general";
    case Mode::Surface: return "surface";
    case Mode::StrictSurface: return "strict";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "general") return Mode::General;
  if (s == "surface") return Mode::Surface;
  if (s == "strict" || s == "strict-surface") return Mode::StrictSurface;
  throw std::invalid_argument("unknown mode '" + s + "' (expected general, surface or strict)");
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::MaxSteps: return "max-steps";
    case StopReason::Normalized: return "normalized";
    case StopReason::Plateau: return "plateau";
    case StopReason::ScriptEnded: return "script-ended";
  }
  return "?";
}

Engine::Engine(GateTable gates, std::size_t max_qubits)
    : gates_(std::move(gates)), max_qubits_(max_qubits) {}

std::optional<RedexKind> Engine::classify(const Term& t) const {
  switch (t.kind()) {
    case TermKind::New:
      return RedexKind::QNew;
    case TermKind::Meas:
      if (t.subject().is(TermKind::Reg)) return RedexKind::QMeas;
      return std::nullopt;
    case TermKind::App: {
      const Term& f = t.fun();
      if (f.is(TermKind::LinLam)) return RedexKind::BetaLin;
      if (f.is(TermKind::BangLam)) {
        if (t.arg().is(TermKind::Bang)) return RedexKind::BetaBang;
        return std::nullopt;
      }
      if (f.is(TermKind::Gate)) {
        const GateDef* g = gates_.find(f.name());
        if (!g) return std::nullopt;
        if (g->arity == 1 && t.arg().is(TermKind::Reg)) return RedexKind::QUnary;
        if (g->arity == 2 && register_pair(t.arg())) return RedexKind::QBinary;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::vector<RedexOccurrence> Engine::find_redexes(const Program& p) const {
  std::vector<RedexOccurrence> out;
  for (const Occurrence& occ : enumerate_occurrences(p.term())) {
    auto kind = classify(occ.sub);
    if (!kind) continue;
    if (is_quantum(*kind) && !occ.is_surface) continue;
    out.push_back({occ.pos, *kind, occ.is_surface});
  }
  return out;
}

std::vector<RedexOccurrence> Engine::surface_redexes(const Program& p) const {
  auto all = find_redexes(p);
  std::erase_if(all, [](const RedexOccurrence& r) { return !r.is_surface; });
  return all;
}

std::vector<RedexOccurrence> Engine::eligible(const Program& p, Mode mode) const {
  return mode == Mode::General ? find_redexes(p) : surface_redexes(p);
}

bool Engine::is_snf(const Program& p) const {
  // Walk surface positions only, stopping at the first redex.
  std::vector<const Term*> stack{&p.term()};
  while (!stack.empty()) {
    const Term* t = stack.back();
    stack.pop_back();
    if (classify(*t)) return false;
    switch (t->kind()) {
      case TermKind::LinLam:
      case TermKind::BangLam:
        stack.push_back(&t->body());
        break;
      case TermKind::App:
        stack.push_back(&t->arg());
        stack.push_back(&t->fun());
        break;
      case TermKind::Meas:
        stack.push_back(&t->subject());
        break;
      default:
        break;
    }
  }
  return true;
}

namespace {

struct Fired {
  const Engine& engine;
  const Program& p;

  MultiDistribution at(const Position& pos, RedexKind kind) const {
    const Term& term = p.term();
    const Term& r = subterm_at(term, pos);
    const QuantumState& q = p.state();
    auto single = [&](QuantumState s, const Term& reduct) {
      return MultiDistribution::singleton(Program::trusted(std::move(s), replace_at(term, pos, reduct)));
    };
    switch (kind) {
      case RedexKind::BetaLin:
        return single(q, instantiate(r.fun().body(), r.arg()));
      case RedexKind::BetaBang:
        return single(q, instantiate(r.fun().body(), r.arg().body()));
      case RedexKind::QNew: {
        auto n = static_cast<std::uint32_t>(q.qubits());
        return single(new_qubit(q, engine.max_qubits()), Term::reg(n));
      }
      case RedexKind::QUnary: {
        const GateDef& g = engine.gates().at(r.fun().name());
        return single(apply_unary(q, g.matrix, r.arg().index()), r.arg());
      }
      case RedexKind::QBinary: {
        const GateDef& g = engine.gates().at(r.fun().name());
        auto pr = match_pair(r.arg());
        return single(apply_binary(q, g.matrix, pr->first.index(), pr->second.index()), r.arg());
      }
      case RedexKind::QMeas: {
        std::uint32_t i = r.subject().index();
        MultiDistribution out;
        for (auto& o : measure(q, i)) {
          Term t = replace_at(term, pos, o.bit == 0 ? r.branch0() : r.branch1());
          t = map_registers(t, [i](std::uint32_t k) { return k > i ? k - 1 : k; });
          out.add(o.probability, Program::trusted(std::move(o.post), t));
        }
        return out;
      }
    }
    throw StepError("unknown redex kind");
  }
};

}  // namespace

MultiDistribution Engine::root_step(const Program& p, RedexKind kind) const {
  auto k = classify(p.term());
  if (!k || *k != kind)
    throw StepError(std::string("root of the term is not a ") + redex_name(kind) + " redex");
  return Fired{*this, p}.at({}, kind);
}

MultiDistribution Engine::step_at(const Program& p, const RedexOccurrence& r) const {
  if (!is_valid_position(p.term(), r.pos))
    throw StepError("position " + to_string(r.pos) + " is not inside the term");
  auto k = classify(subterm_at(p.term(), r.pos));
  if (!k || *k != r.kind)
    throw StepError(std::string("no ") + redex_name(r.kind) + " redex at " + to_string(r.pos));
  bool surface = is_surface_path(r.pos);
  if (surface != r.is_surface) throw StepError("surface flag mismatch at " + to_string(r.pos));
  if (is_quantum(r.kind) && !surface)
    throw StepError("quantum redex at non-surface position " + to_string(r.pos));
  return Fired{*this, p}.at(r.pos, r.kind);
}

void Engine::check_schedule(const MultiDistribution& m, const Schedule& s, Mode mode) const {
  if (s.size() != m.size())
    throw ScheduleError("schedule has " + std::to_string(s.size()) + " choices for " +
                        std::to_string(m.size()) + " entries");
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Choice& c = s[k];
    if (mode == Mode::StrictSurface) {
      bool snf = is_snf(m[k].program);
      if (snf && c) throw ScheduleError("strict lifting must skip surface normal entry " + std::to_string(k));
      if (!snf && !c) throw ScheduleError("strict lifting must fire on entry " + std::to_string(k));
    }
    if (!c) continue;
    if (mode != Mode::General && !c->is_surface)
      throw ScheduleError("non-surface redex scheduled in surface mode on entry " + std::to_string(k));
    auto redexes = find_redexes(m[k].program);
    if (std::find(redexes.begin(), redexes.end(), *c) == redexes.end())
      throw ScheduleError("entry " + std::to_string(k) + " has no redex " + redex_name(c->kind) +
                          " at " + to_string(c->pos));
  }
}

MultiDistribution Engine::lift_step(const MultiDistribution& m, const Schedule& s, Mode mode) const {
  check_schedule(m, s, mode);
  MultiDistribution out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (!s[k]) {
      out.add(m[k].weight, m[k].program);
      continue;
    }
    out.add_scaled(m[k].weight, step_at(m[k].program, *s[k]));
  }
  return out;
}

std::vector<Schedule> Engine::all_schedules(const MultiDistribution& m, Mode mode,
                                            std::size_t limit) const {
  std::vector<std::vector<Choice>> options;
  double total = 1.0;
  for (const auto& e : m.entries()) {
    std::vector<Choice> opts;
    if (mode == Mode::StrictSurface) {
      auto rs = surface_redexes(e.program);
      if (rs.empty()) opts.emplace_back(std::nullopt);
      for (auto& r : rs) opts.emplace_back(std::move(r));
    } else {
      opts.emplace_back(std::nullopt);
      for (auto& r : eligible(e.program, mode)) opts.emplace_back(std::move(r));
    }
    total *= static_cast<double>(opts.size());
    options.push_back(std::move(opts));
  }
  if (total > static_cast<double>(limit))
    throw GuardError("schedule enumeration exceeds " + std::to_string(limit) + " choices");

  std::vector<Schedule> out;
  Schedule cur(m.size());
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == m.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& c : options[k]) {
      cur[k] = c;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  if (out.size() > 1) {
    std::erase_if(out, [](const Schedule& s) {
      return std::all_of(s.begin(), s.end(), [](const Choice& c) { return !c; });
    });
  }
  return out;
}

double Engine::snf_mass(const MultiDistribution& m) const {
  double s = 0.0;
  for (const auto& e : m.entries())
    if (is_snf(e.program)) s += e.weight;
  return s;
}

// ---- schedulers ---------------------------------------------------------------

std::optional<Schedule> LeftmostScheduler::choose(const Engine& engine, const MultiDistribution& m,
                                                  Mode mode, std::size_t) {
  Schedule s;
  for (const auto& e : m.entries()) {
    auto rs = engine.eligible(e.program, mode);
    s.push_back(rs.empty() ? Choice{} : Choice{rs.front()});
  }
  return s;
}

std::optional<Schedule> RightmostScheduler::choose(const Engine& engine, const MultiDistribution& m,
                                                   Mode mode, std::size_t) {
  Schedule s;
  for (const auto& e : m.entries()) {
    auto rs = engine.eligible(e.program, mode);
    s.push_back(rs.empty() ? Choice{} : Choice{rs.back()});
  }
  return s;
}

std::optional<Schedule> RandomScheduler::choose(const Engine& engine, const MultiDistribution& m,
                                                Mode mode, std::size_t) {
  Schedule s;
  std::vector<std::vector<RedexOccurrence>> per_entry;
  bool fired = false;
  for (const auto& e : m.entries()) {
    auto rs = engine.eligible(e.program, mode);
    Choice c;
    if (!rs.empty()) {
      std::size_t options = rs.size() + (mode == Mode::StrictSurface ? 0 : 1);
      std::size_t pick = std::uniform_int_distribution<std::size_t>(0, options - 1)(rng_);
      if (pick < rs.size()) c = rs[pick];
    }
    fired = fired || c.has_value();
    s.push_back(std::move(c));
    per_entry.push_back(std::move(rs));
  }
  if (!fired) {
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < per_entry.size(); ++k)
      if (!per_entry[k].empty()) candidates.push_back(k);
    if (!candidates.empty()) {
      std::size_t k = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng_)];
      s[k] = per_entry[k][std::uniform_int_distribution<std::size_t>(0, per_entry[k].size() - 1)(rng_)];
    }
  }
  return s;
}

std::optional<Schedule> ScriptedScheduler::choose(const Engine&, const MultiDistribution&, Mode,
                                                  std::size_t step) {
  if (step >= script_.size()) return std::nullopt;
  return script_[step];
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, std::uint64_t seed) {
  if (name == "leftmost") return std::make_unique<LeftmostScheduler>();
  if (name == "rightmost") return std::make_unique<RightmostScheduler>();
  if (name == "random") return std::make_unique<RandomScheduler>(seed);
  throw std::invalid_argument("unknown scheduler '" + name + "'");
}

// ---- runs -------------------------------------------------------------------

Trace run(const Engine& engine, const MultiDistribution& m0, Mode mode, Scheduler& scheduler,
          const StopRule& stop) {
  Trace trace;
  trace.mode = mode;
  trace.steps.push_back({0, {}, m0, engine.snf_mass(m0)});
  for (std::size_t k = 1;; ++k) {
    const MultiDistribution& cur = trace.steps.back().mdist;
    if (std::all_of(cur.entries().begin(), cur.entries().end(),
                    [&](const WeightedProgram& e) { return engine.is_snf(e.program); })) {
      trace.reason = StopReason::Normalized;
      break;
    }
    if (k > stop.max_steps) {
      trace.reason = StopReason::MaxSteps;
      break;
    }
    auto sched = scheduler.choose(engine, cur, mode, k - 1);
    if (!sched) {
      trace.reason = StopReason::ScriptEnded;
      break;
    }
    MultiDistribution next = engine.lift_step(cur, *sched, mode);
    double pr = engine.snf_mass(next);
    trace.steps.push_back({k, std::move(*sched), std::move(next), pr});
    if (k >= stop.window && pr > 0.0) {
      double before = trace.steps[k - stop.window].pr_snf;
      if (pr - before < stop.delta) {
        trace.reason = StopReason::Plateau;
        break;
      }
    }
  }
  return trace;
}

}  // namespace qlambda
