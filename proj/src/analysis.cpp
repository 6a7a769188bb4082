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

#include "qlambda/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "qlambda/io.hpp"
#include "qlambda/parser.hpp"
#include "qlambda/syntax.hpp"

namespace qlambda {

using nlohmann::json;

namespace {

// Collection of multidistributions with hash buckets and a pluggable
// equality.
class MdistSet {
 public:
  explicit MdistSet(bool coalesced) : coalesced_(coalesced) {}

  bool insert(const MultiDistribution& m) {
    std::size_t key = mdist_bucket(m);
    if (!coalesced_) key ^= m.size() * 0x9e3779b97f4a7c15ULL;
    auto& bucket = buckets_[key];
    for (std::size_t idx : bucket)
      if (coalesced_ ? mdist_eq(items_[idx], m) : mdist_same(items_[idx], m)) return false;
    bucket.push_back(items_.size());
    items_.push_back(m);
    return true;
  }

  bool contains(const MultiDistribution& m) const {
    std::size_t key = mdist_bucket(m);
    if (!coalesced_) key ^= m.size() * 0x9e3779b97f4a7c15ULL;
    auto it = buckets_.find(key);
    if (it == buckets_.end()) return false;
    for (std::size_t idx : it->second)
      if (coalesced_ ? mdist_eq(items_[idx], m) : mdist_same(items_[idx], m)) return true;
    return false;
  }

  std::size_t size() const { return items_.size(); }
  std::vector<MultiDistribution> take() { return std::move(items_); }
  const std::vector<MultiDistribution>& items() const { return items_; }

 private:
  bool coalesced_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets_;
  std::vector<MultiDistribution> items_;
};

void check_sizes(const MultiDistribution& m, const OracleGuard& guard) {
  for (const auto& e : m.entries())
    if (e.program.term().size() > guard.max_term_size)
      throw GuardError("term size " + std::to_string(e.program.term().size()) + " exceeds " +
                       std::to_string(guard.max_term_size));
}

bool oversized(const MultiDistribution& m, const OracleGuard& guard) {
  return std::any_of(m.entries().begin(), m.entries().end(), [&](const WeightedProgram& e) {
    return e.program.term().size() > guard.max_term_size;
  });
}

bool all_snf(const Engine& engine, const MultiDistribution& m) {
  return std::all_of(m.entries().begin(), m.entries().end(),
                     [&](const WeightedProgram& e) { return engine.is_snf(e.program); });
}

MultiDistribution snf_part(const Engine& engine, const MultiDistribution& m) {
  std::vector<WeightedProgram> keep;
  for (const auto& e : m.entries())
    if (engine.is_snf(e.program)) keep.push_back(e);
  return MultiDistribution(std::move(keep));
}

json redex_json(const RedexOccurrence& r) { return choice_to_json(Choice(r)); }

// Per-entry Skip or non-surface redex; the all-Skip schedule is left out.
std::vector<Schedule> nonsurface_schedules(const Engine& engine, const MultiDistribution& m,
                                           std::size_t limit) {
  std::vector<std::vector<Choice>> options;
  double total = 1.0;
  for (const auto& e : m.entries()) {
    std::vector<Choice> opts{std::nullopt};
    for (auto& r : engine.find_redexes(e.program))
      if (!r.is_surface) opts.emplace_back(std::move(r));
    total *= static_cast<double>(opts.size());
    options.push_back(std::move(opts));
  }
  if (total > static_cast<double>(limit)) throw GuardError("too many non-surface schedules");
  std::vector<Schedule> out;
  Schedule cur(m.size());
  auto rec = [&](auto&& self, std::size_t k, bool fired) -> void {
    if (k == m.size()) {
      if (fired) out.push_back(cur);
      return;
    }
    for (const auto& c : options[k]) {
      cur[k] = c;
      self(self, k + 1, fired || c.has_value());
    }
  };
  rec(rec, 0, false);
  return out;
}

// Weight carried by each distinct state. Non-surface steps keep every
// entry's weight and state, and coalescing only merges equal states.
using Signature = std::vector<std::pair<QuantumState, double>>;

Signature state_signature(const MultiDistribution& m) {
  Signature sig;
  for (const auto& e : m.entries()) {
    auto it = std::find_if(sig.begin(), sig.end(), [&](const auto& g) {
      return g.first.qubits() == e.program.state().qubits() &&
             g.first.approx_equal(e.program.state());
    });
    if (it == sig.end())
      sig.emplace_back(e.program.state(), e.weight);
    else
      it->second += e.weight;
  }
  return sig;
}

bool signature_eq(const Signature& a, const Signature& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& [q, w] : a) {
    bool found = false;
    for (std::size_t k = 0; k < b.size() && !found; ++k) {
      if (used[k] || b[k].first.qubits() != q.qubits()) continue;
      if (std::abs(b[k].second - w) <= kTolerance && b[k].first.approx_equal(q)) {
        used[k] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

struct SearchResult {
  bool found = false;
  bool hit_bound = false;
};

SearchResult nonsurface_reach(const Engine& engine, const MultiDistribution& start,
                              const MultiDistribution& target, std::size_t budget,
                              const OracleGuard& guard) {
  SearchResult res;
  MdistSet seen(false);
  seen.insert(start);
  std::vector<MultiDistribution> level{start};
  for (std::size_t i = 0;; ++i) {
    for (const auto& m : level)
      if (mdist_eq(m, target)) {
        res.found = true;
        return res;
      }
    if (level.empty()) return res;
    if (i == budget) {
      res.hit_bound =
          res.hit_bound || std::any_of(level.begin(), level.end(), [&](const MultiDistribution& m) {
            return !nonsurface_schedules(engine, m, guard.max_schedules).empty();
          });
      return res;
    }
    std::vector<MultiDistribution> next;
    for (const auto& m : level) {
      for (const auto& s : nonsurface_schedules(engine, m, guard.max_schedules)) {
        MultiDistribution child = engine.lift_step(m, s, Mode::General);
        if (oversized(child, guard)) {
          res.hit_bound = true;
          continue;
        }
        if (seen.insert(child)) next.push_back(std::move(child));
        if (seen.size() > guard.max_nodes) throw GuardError("non-surface search exceeds node cap");
      }
    }
    level = std::move(next);
  }
}

enum class Outcome { Pass, Fail, Inconclusive, Skipped };

struct Finding {
  Outcome outcome = Outcome::Pass;
  json detail;
};

PropertyVerdict verdict_from(const std::string& name, const Finding& f, const Program& p) {
  PropertyVerdict v;
  v.property = name;
  v.tried = 1;
  switch (f.outcome) {
    case Outcome::Pass: v.passed = 1; break;
    case Outcome::Skipped: v.skipped = 1; break;
    case Outcome::Inconclusive:
      v.inconclusive = 1;
      v.counterexamples.push_back(json{{"program", program_to_json(p)}, {"detail", f.detail}});
      break;
    case Outcome::Fail:
      v.failed = 1;
      v.counterexamples.push_back(json{{"program", program_to_json(p)}, {"detail", f.detail}});
      break;
  }
  return v;
}

Finding diamond_finding(const Engine& engine, const Program& p) {
  auto rs = engine.surface_redexes(p);
  if (rs.size() < 2) return {Outcome::Skipped, "fewer than two surface redexes"};
  try {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      for (std::size_t j = i + 1; j < rs.size(); ++j) {
        MultiDistribution m1 = engine.step_at(p, rs[i]);
        MultiDistribution m2 = engine.step_at(p, rs[j]);
        json pair = json::array({redex_json(rs[i]), redex_json(rs[j])});
        for (const auto* m : {&m1, &m2})
          for (const auto& e : m->entries())
            if (engine.is_snf(e.program))
              return {Outcome::Fail, json{{"redexes", pair}, {"reason", "snf entry after one step"},
                                          {"entry", format_program(e.program)}}};
        MdistSet joins(true);
        for (const auto& s : engine.all_schedules(m1, Mode::StrictSurface))
          joins.insert(coalesce(engine.lift_step(m1, s, Mode::StrictSurface)));
        bool joined = false;
        for (const auto& s : engine.all_schedules(m2, Mode::StrictSurface)) {
          if (joins.contains(coalesce(engine.lift_step(m2, s, Mode::StrictSurface)))) {
            joined = true;
            break;
          }
        }
        if (!joined)
          return {Outcome::Fail, json{{"redexes", pair}, {"reason", "no one-step join"},
                                      {"left", format_mdist(m1)}, {"right", format_mdist(m2)}}};
      }
    }
  } catch (const GuardError& e) {
    return {Outcome::Skipped, e.what()};
  } catch (const CapacityError& e) {
    return {Outcome::Skipped, e.what()};
  } catch (const std::exception& e) {
    return {Outcome::Fail, std::string("exception: ") + e.what()};
  }
  return {Outcome::Pass, nullptr};
}

Finding descent_finding(const Engine& engine, const Program& p, std::size_t depth,
                        const OracleGuard& guard) {
  std::vector<OracleLevel> levels;
  try {
    levels = oracle_tree(engine, MultiDistribution::singleton(p), depth, Mode::StrictSurface, guard);
  } catch (const GuardError& e) {
    return {Outcome::Skipped, e.what()};
  } catch (const CapacityError& e) {
    return {Outcome::Skipped, e.what()};
  } catch (const std::exception& e) {
    return {Outcome::Fail, std::string("exception: ") + e.what()};
  }
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& nodes = levels[k].distinct;
    double pr0 = engine.snf_mass(nodes[0]);
    MultiDistribution snf0 = snf_part(engine, nodes[0]);
    for (std::size_t n = 1; n < nodes.size(); ++n) {
      double pr = engine.snf_mass(nodes[n]);
      if (std::abs(pr - pr0) > kTolerance)
        return {Outcome::Fail, json{{"depth", k}, {"reason", "Pr differs"}, {"a", pr0}, {"b", pr}}};
      if (!mdist_eq(snf_part(engine, nodes[n]), snf0))
        return {Outcome::Fail, json{{"depth", k}, {"reason", "normal parts differ"},
                                    {"a", format_mdist(nodes[0])}, {"b", format_mdist(nodes[n])}}};
      if (all_snf(engine, nodes[0]) != all_snf(engine, nodes[n]) ||
          (all_snf(engine, nodes[0]) && !mdist_eq(nodes[0], nodes[n])))
        return {Outcome::Fail, json{{"depth", k}, {"reason", "normalized leaves differ"}}};
    }
  }
  return {Outcome::Pass, nullptr};
}

std::vector<Schedule> random_general_sequence(const Engine& engine, const Program& p,
                                             std::size_t k, std::uint64_t seed,
                                             const OracleGuard& guard) {
  std::mt19937_64 rng(seed);
  MultiDistribution m = MultiDistribution::singleton(p);
  std::vector<Schedule> seq;
  for (std::size_t step = 0; step < k; ++step) {
    Schedule s;
    std::vector<std::vector<RedexOccurrence>> options;
    bool any = false;
    for (const auto& e : m.entries()) {
      auto rs = engine.find_redexes(e.program);
      std::size_t pick = std::uniform_int_distribution<std::size_t>(0, rs.size())(rng);
      s.push_back(pick < rs.size() ? Choice(rs[pick]) : std::nullopt);
      any = any || !rs.empty();
      options.push_back(std::move(rs));
    }
    if (!any) break;
    if (std::none_of(s.begin(), s.end(), [](const Choice& c) { return c.has_value(); })) {
      std::vector<std::size_t> live;
      for (std::size_t i = 0; i < options.size(); ++i)
        if (!options[i].empty()) live.push_back(i);
      std::size_t i = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)];
      s[i] = options[i][std::uniform_int_distribution<std::size_t>(0, options[i].size() - 1)(rng)];
    }
    m = engine.lift_step(m, s, Mode::General);
    check_sizes(m, guard);
    seq.push_back(std::move(s));
  }
  return seq;
}

Finding factorization_finding(const Engine& engine, const Program& p,
                              const std::vector<Schedule>& seq, const OracleGuard& guard) {
  try {
    MultiDistribution m0 = MultiDistribution::singleton(p);
    MultiDistribution m = m0;
    json seq_json = json::array();
    for (const auto& s : seq) {
      m = engine.lift_step(m, s, Mode::General);
      check_sizes(m, guard);
      seq_json.push_back(schedule_to_json(s));
    }
    const MultiDistribution target = coalesce(m);
    const std::size_t bound = 2 * seq.size() + 4;
    const Signature target_sig = state_signature(target);

    // Surface steps first, breadth-first; from each surface node whose
    // weighted states already match the target, non-surface steps only.
    bool hit_bound = false;
    MdistSet seen(false);
    seen.insert(m0);
    std::vector<MultiDistribution> level{m0};
    for (std::size_t i = 0; !level.empty(); ++i) {
      for (const auto& s : level) {
        if (!signature_eq(state_signature(s), target_sig)) continue;
        SearchResult r = nonsurface_reach(engine, s, target, bound - i, guard);
        if (r.found) return {Outcome::Pass, nullptr};
        hit_bound = hit_bound || r.hit_bound;
      }
      if (i == bound) {
        hit_bound = true;
        break;
      }
      std::vector<MultiDistribution> next;
      for (const auto& s : level) {
        for (const auto& sch : engine.all_schedules(s, Mode::Surface, guard.max_schedules)) {
          if (std::none_of(sch.begin(), sch.end(), [](const Choice& c) { return c.has_value(); }))
            continue;
          MultiDistribution child = engine.lift_step(s, sch, Mode::Surface);
          if (oversized(child, guard)) {
            hit_bound = true;
            continue;
          }
          if (seen.insert(child)) next.push_back(std::move(child));
          if (seen.size() > guard.max_nodes) throw GuardError("surface search exceeds node cap");
        }
      }
      level = std::move(next);
    }
    json detail{{"sequence", seq_json}, {"target", format_mdist(target)}, {"bound", bound}};
    return {hit_bound ? Outcome::Inconclusive : Outcome::Fail, detail};
  } catch (const GuardError& e) {
    return {Outcome::Skipped, e.what()};
  } catch (const CapacityError& e) {
    return {Outcome::Skipped, e.what()};
  } catch (const std::exception& e) {
    return {Outcome::Fail, std::string("exception: ") + e.what()};
  }
}

Finding completeness_finding(const Engine& engine, const MultiDistribution& m, std::size_t d,
                             std::size_t D, const OracleGuard& guard) {
  try {
    double general = 0.0;
    for (const auto& level : oracle_tree(engine, m, d, Mode::General, guard))
      for (const auto& n : level.distinct) general = std::max(general, engine.snf_mass(n));
    LeftmostScheduler leftmost;
    StopRule rule{D, 0.0, D + 1};
    Trace t = run(engine, m, Mode::StrictSurface, leftmost, rule);
    double strict = t.last_pr();
    if (strict + kTolerance < general)
      return {Outcome::Fail, json{{"general_max", general}, {"strict", strict}, {"d", d}, {"D", D}}};
    return {Outcome::Pass, nullptr};
  } catch (const GuardError& e) {
    return {Outcome::Skipped, e.what()};
  } catch (const CapacityError& e) {
    return {Outcome::Skipped, e.what()};
  } catch (const std::exception& e) {
    return {Outcome::Fail, std::string("exception: ") + e.what()};
  }
}

// Shrinks `p` against the same check and reports it.
PropertyVerdict report(const std::string& name, const Program& p,
                       const std::function<Finding(const Program&)>& check) {
  Finding f = check(p);
  if (f.outcome != Outcome::Fail) return verdict_from(name, f, p);
  Program small = shrink(p, [&](const Program& c) { return check(c).outcome == Outcome::Fail; });
  Finding g = check(small);
  PropertyVerdict v = verdict_from(name, g, small);
  v.counterexamples.back()["original"] = program_to_json(p);
  return v;
}

// Draws generated programs for instance `index` until `accept` holds.
std::optional<Program> draw(const SuiteConfig& cfg, std::size_t index,
                            const std::function<bool(const Program&)>& accept,
                            std::size_t attempts = 400, std::optional<Profile> profile = {}) {
  for (std::size_t a = 0; a < attempts; ++a) {
    Program p = gen_program(cfg.size, split_seed(cfg.seed, index * 100003 + a),
                            profile.value_or(cfg.profile));
    if (accept(p)) return p;
  }
  return std::nullopt;
}

PropertyVerdict missing(const std::string& name) {
  PropertyVerdict v;
  v.property = name;
  v.tried = 1;
  v.skipped = 1;
  return v;
}

// Random general walk of up to `steps` steps; `visit` sees every
// multidistribution along the way and returns an error message on failure.
std::optional<std::string> walk(const Engine& engine, const Program& p, std::uint64_t seed,
                                std::size_t steps,
                                const std::function<std::optional<std::string>(
                                    const MultiDistribution& before, const MultiDistribution& after)>& visit) {
  RandomScheduler sched(seed);
  MultiDistribution m = MultiDistribution::singleton(p);
  if (auto err = visit(m, m)) return err;
  for (std::size_t k = 0; k < steps; ++k) {
    auto s = sched.choose(engine, m, Mode::General, k);
    if (!s || std::none_of(s->begin(), s->end(), [](const Choice& c) { return c.has_value(); }))
      break;
    MultiDistribution next = engine.lift_step(m, *s, Mode::General);
    if (auto err = visit(m, next)) return err;
    m = std::move(next);
  }
  return std::nullopt;
}

PropertyVerdict walk_suite(const Engine& engine, const SuiteConfig& cfg, const std::string& name,
                           const std::function<std::optional<std::string>(
                               const MultiDistribution&, const MultiDistribution&)>& visit) {
  PropertyVerdict total;
  total.property = name;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    Program p = gen_program(cfg.size, split_seed(cfg.seed, i), cfg.profile);
    PropertyVerdict one;
    one.property = name;
    one.tried = 1;
    try {
      auto err = walk(engine, p, split_seed(cfg.seed ^ 0x5157, i), 8, visit);
      if (err) {
        one.failed = 1;
        one.counterexamples.push_back(json{{"program", program_to_json(p)}, {"detail", *err}});
      } else {
        one.passed = 1;
      }
    } catch (const CapacityError&) {
      one.skipped = 1;
    } catch (const std::exception& e) {
      one.failed = 1;
      one.counterexamples.push_back(
          json{{"program", program_to_json(p)}, {"detail", std::string("exception: ") + e.what()}});
    }
    total.absorb(one);
  }
  return total;
}

// Small random unitaries for the commutation identities.
Matrix random_unary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  double th = ang(rng), a = ang(rng), b = ang(rng), c = ang(rng);
  Complex ea = std::polar(1.0, a), eb = std::polar(1.0, b), ec = std::polar(1.0, c);
  return Matrix(2, {ea * eb * std::cos(th), ea * ec * std::sin(th),
                    -ea * std::conj(ec) * std::sin(th), ea * std::conj(eb) * std::cos(th)});
}

Matrix random_binary(std::mt19937_64& rng) {
  Matrix cnot = GateTable::builtin().at("CNOT").matrix;
  Matrix u = Matrix::kron(random_unary(rng), random_unary(rng));
  Matrix v = Matrix::kron(random_unary(rng), random_unary(rng));
  return v * cnot * u;
}

std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(k);
  return idx;
}

// Index of qubit `i` once qubit `gone` has been removed.
std::size_t after_removal(std::size_t i, std::size_t gone) { return i > gone ? i - 1 : i; }

}  // namespace

double snf_mass(const Engine& engine, const MultiDistribution& m) { return engine.snf_mass(m); }

ConvergenceReport estimate_limit(const Engine& engine, const Program& p, Mode mode,
                                 std::size_t max_steps, double delta, std::size_t window) {
  LeftmostScheduler sched;
  Trace t = run(engine, MultiDistribution::singleton(p), mode, sched, StopRule{max_steps, delta, window});
  ConvergenceReport r;
  for (const auto& s : t.steps) r.pr_curve.emplace_back(s.step, s.pr_snf);
  r.limit_estimate = t.last_pr();
  r.reason = t.reason;
  r.stable = t.reason == StopReason::Normalized || t.reason == StopReason::Plateau;
  return r;
}

std::string pr_curve_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "step,pr\n";
  for (const auto& [step, pr] : r.pr_curve) os << step << "," << pr << "\n";
  return os.str();
}

bool mdist_same(const MultiDistribution& a, const MultiDistribution& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& e : a.entries()) {
    bool found = false;
    for (std::size_t k = 0; k < b.size() && !found; ++k) {
      if (used[k] || std::abs(b[k].weight - e.weight) > kTolerance) continue;
      if (program_eq(b[k].program, e.program)) {
        used[k] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<OracleLevel> oracle_tree(const Engine& engine, const MultiDistribution& m0,
                                     std::size_t depth, Mode mode, const OracleGuard& guard) {
  check_sizes(m0, guard);
  std::vector<OracleLevel> levels(1);
  levels[0].frontier.push_back(m0);
  levels[0].distinct.push_back(coalesce(m0));
  for (std::size_t k = 1; k <= depth; ++k) {
    MdistSet front(false), dist(true);
    for (const auto& node : levels[k - 1].frontier) {
      for (const auto& s : engine.all_schedules(node, mode, guard.max_schedules)) {
        MultiDistribution child = engine.lift_step(node, s, mode);
        check_sizes(child, guard);
        if (!front.insert(child)) continue;
        if (front.size() > guard.max_nodes)
          throw GuardError("oracle frontier exceeds " + std::to_string(guard.max_nodes) + " nodes");
        dist.insert(coalesce(child));
      }
    }
    OracleLevel level;
    level.frontier = front.take();
    level.distinct = dist.take();
    levels.push_back(std::move(level));
  }
  return levels;
}

void PropertyVerdict::absorb(const PropertyVerdict& one) {
  if (property.empty()) property = one.property;
  tried += one.tried;
  passed += one.passed;
  failed += one.failed;
  inconclusive += one.inconclusive;
  skipped += one.skipped;
  for (const auto& c : one.counterexamples)
    if (counterexamples.size() < 10) counterexamples.push_back(c);
}

json PropertyVerdict::to_json() const {
  return json{{"property", property},         {"tried", tried},
              {"passed", passed},             {"failed", failed},
              {"inconclusive", inconclusive}, {"skipped", skipped},
              {"counterexamples", counterexamples}};
}

PropertyVerdict check_pointed_diamond(const Engine& engine, const Program& p) {
  return report("pointed-diamond", p, [&](const Program& c) { return diamond_finding(engine, c); });
}

PropertyVerdict check_random_descent(const Engine& engine, const Program& p, std::size_t depth,
                                     const OracleGuard& guard) {
  return report("random-descent", p,
                [&](const Program& c) { return descent_finding(engine, c, depth, guard); });
}

PropertyVerdict check_factorization(const Engine& engine, const Program& p, std::size_t k,
                                    std::uint64_t seed, const OracleGuard& guard) {
  std::vector<Schedule> seq;
  try {
    seq = random_general_sequence(engine, p, k, seed, guard);
  } catch (const std::exception& e) {
    return verdict_from("factorization", {Outcome::Skipped, e.what()}, p);
  }
  // The sequence is tied to the program, so failures are reported unshrunk.
  return verdict_from("factorization", factorization_finding(engine, p, seq, guard), p);
}

PropertyVerdict check_factorization_of(const Engine& engine, const Program& p,
                                       const std::vector<Schedule>& sequence,
                                       const OracleGuard& guard) {
  return verdict_from("factorization", factorization_finding(engine, p, sequence, guard), p);
}

PropertyVerdict check_asymptotic_completeness(const Engine& engine, const MultiDistribution& m,
                                              std::size_t d, std::size_t D,
                                              const OracleGuard& guard) {
  Finding f = completeness_finding(engine, m, d, D, guard);
  PropertyVerdict v = verdict_from("completeness", f, m[0].program);
  if (!v.counterexamples.empty()) v.counterexamples.back()["mdist"] = format_mdist(m);
  return v;
}

Program shrink(const Program& p, const std::function<bool(const Program&)>& fails) {
  Program cur = p;
  const Term replacements[] = {Term::free_var("z"), Term::lin_lam("z", Term::var(0, "z"))};
  for (int round = 0; round < 200; ++round) {
    bool improved = false;
    for (const auto& occ : enumerate_occurrences(cur.term())) {
      if (occ.sub.size() <= 1 || !registers(occ.sub).empty() || has_loose_vars(occ.sub)) continue;
      for (const auto& r : replacements) {
        if (r.size() >= occ.sub.size()) continue;
        try {
          Program cand(cur.state(), replace_at(cur.term(), occ.pos, r));
          if (fails(cand)) {
            cur = std::move(cand);
            improved = true;
            break;
          }
        } catch (const ProgramError&) {
        }
      }
      if (improved) break;
    }
    if (!improved) break;
  }
  return cur;
}

PropertyVerdict diamond_suite(const Engine& engine, const SuiteConfig& cfg) {
  PropertyVerdict total;
  total.property = "pointed-diamond";
  for (std::size_t i = 0; i < cfg.count; ++i) {
    auto p = draw(cfg, i, [&](const Program& c) { return engine.surface_redexes(c).size() >= 2; });
    total.absorb(p ? check_pointed_diamond(engine, *p) : missing(total.property));
  }
  return total;
}

PropertyVerdict random_descent_suite(const Engine& engine, const SuiteConfig& cfg,
                                     std::size_t depth) {
  PropertyVerdict total;
  total.property = "random-descent";
  for (std::size_t i = 0; i < cfg.count; ++i) {
    auto p = draw(cfg, i, [&](const Program& c) { return !engine.is_snf(c); });
    total.absorb(p ? check_random_descent(engine, *p, depth) : missing(total.property));
  }
  return total;
}

PropertyVerdict factorization_suite(const Engine& engine, const SuiteConfig& cfg,
                                    std::size_t max_k) {
  PropertyVerdict total;
  total.property = "factorization";
  for (std::size_t i = 0; i < cfg.count; ++i) {
    auto p = draw(cfg, i, [&](const Program& c) { return !engine.find_redexes(c).empty(); });
    std::size_t k = 1 + split_seed(cfg.seed ^ 0xfac7, i) % max_k;
    total.absorb(p ? check_factorization(engine, *p, k, split_seed(cfg.seed ^ 0x5eed, i))
                   : missing(total.property));
  }
  return total;
}

PropertyVerdict completeness_suite(const Engine& engine, const SuiteConfig& cfg, std::size_t d,
                                   std::size_t D) {
  PropertyVerdict total;
  total.property = "completeness";
  for (std::size_t i = 0; i < cfg.count; ++i) {
    auto p = draw(cfg, i, [&](const Program& c) { return !engine.is_snf(c); });
    total.absorb(p ? check_asymptotic_completeness(engine, MultiDistribution::singleton(*p), d, D)
                   : missing(total.property));
  }
  return total;
}

PropertyVerdict norm_suite(const Engine& engine, const SuiteConfig& cfg) {
  return walk_suite(engine, cfg, "norm",
                    [](const MultiDistribution&, const MultiDistribution& m) -> std::optional<std::string> {
                      for (const auto& e : m.entries())
                        if (std::abs(e.program.state().norm() - 1.0) > kTolerance)
                          return "state norm " + std::to_string(e.program.state().norm());
                      return std::nullopt;
                    });
}

PropertyVerdict mass_suite(const Engine& engine, const SuiteConfig& cfg) {
  return walk_suite(engine, cfg, "mass",
                    [](const MultiDistribution& before, const MultiDistribution& after)
                        -> std::optional<std::string> {
                      if (std::abs(before.mass() - after.mass()) > kTolerance)
                        return "mass changed from " + std::to_string(before.mass()) + " to " +
                               std::to_string(after.mass());
                      return std::nullopt;
                    });
}

PropertyVerdict validity_suite(const Engine& engine, const SuiteConfig& cfg) {
  return walk_suite(engine, cfg, "validity",
                    [](const MultiDistribution&, const MultiDistribution& m) -> std::optional<std::string> {
                      for (const auto& e : m.entries()) {
                        auto rep = validate(e.program.term());
                        if (!rep.ok())
                          return print_term(e.program.term()) + ": " + rep.violations[0].message;
                      }
                      return std::nullopt;
                    });
}

namespace {

bool has_nonsurface_redex(const Engine& engine, const Program& p) {
  for (const auto& r : engine.find_redexes(p))
    if (!r.is_surface) return true;
  return false;
}

PropertyVerdict per_redex_suite(
    const SuiteConfig& cfg, const std::string& name,
    const std::function<bool(const Program&)>& accept,
    const std::function<std::optional<std::string>(const Program&)>& check) {
  PropertyVerdict total;
  total.property = name;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    auto p = draw(cfg, i, accept, 400, Profile::BetaHeavy);
    if (!p) {
      total.absorb(missing(name));
      continue;
    }
    PropertyVerdict one;
    one.property = name;
    one.tried = 1;
    try {
      if (auto err = check(*p)) {
        one.failed = 1;
        one.counterexamples.push_back(json{{"program", program_to_json(*p)}, {"detail", *err}});
      } else {
        one.passed = 1;
      }
    } catch (const CapacityError&) {
      one.skipped = 1;
    } catch (const std::exception& e) {
      one.failed = 1;
      one.counterexamples.push_back(
          json{{"program", program_to_json(*p)}, {"detail", std::string("exception: ") + e.what()}});
    }
    total.absorb(one);
  }
  return total;
}

}  // namespace

PropertyVerdict nonsurface_state_suite(const Engine& engine, const SuiteConfig& cfg) {
  return per_redex_suite(
      cfg, "nonsurface-state",
      [&](const Program& p) { return has_nonsurface_redex(engine, p); },
      [&](const Program& p) -> std::optional<std::string> {
        for (const auto& r : engine.find_redexes(p)) {
          if (r.is_surface) continue;
          MultiDistribution m = engine.step_at(p, r);
          if (m.size() != 1 || m[0].weight != 1.0)
            return "non-surface step at " + to_string(r.pos) + " is not a single entry";
          if (!m[0].program.state().bitwise_equal(p.state()))
            return "non-surface step at " + to_string(r.pos) + " changed the state";
        }
        return std::nullopt;
      });
}

PropertyVerdict shape_suite(const Engine& engine, const SuiteConfig& cfg) {
  return per_redex_suite(
      cfg, "shape",
      [&](const Program& p) { return has_nonsurface_redex(engine, p); },
      [&](const Program& p) -> std::optional<std::string> {
        for (const auto& r : engine.find_redexes(p)) {
          if (r.is_surface) continue;
          MultiDistribution m = engine.step_at(p, r);
          const Program& q = m[0].program;
          if (q.term().kind() != p.term().kind())
            return "top production changed at " + to_string(r.pos);
          if (engine.classify(q.term()) != engine.classify(p.term()))
            return "root redex changed at " + to_string(r.pos);
          if (engine.surface_redexes(q) != engine.surface_redexes(p))
            return "surface redexes changed at " + to_string(r.pos);
        }
        return std::nullopt;
      });
}

PropertyVerdict substitutivity_suite(const Engine& engine, const SuiteConfig& cfg) {
  const Term fallback = Term::lin_lam("y", Term::var(0, "y"));
  std::size_t serial = 0;
  return per_redex_suite(
      cfg, "substitutivity",
      [&](const Program& p) {
        return free_vars(p.term()).count("z") > 0 && !engine.find_redexes(p).empty();
      },
      [&](const Program& p) -> std::optional<std::string> {
        Program donor = gen_program(5, split_seed(cfg.seed ^ 0x5b57, serial++), Profile::BetaHeavy);
        Term n = donor.state().qubits() == 0 ? donor.term() : fallback;
        Program ps(p.state(), subst(p.term(), "z", n));
        for (const auto& r : engine.find_redexes(p)) {
          MultiDistribution a = engine.step_at(p, r);
          MultiDistribution b = engine.step_at(ps, r);
          std::vector<WeightedProgram> expect;
          for (const auto& e : a.entries())
            expect.push_back({e.weight, Program(e.program.state(), subst(e.program.term(), "z", n))});
          if (!mdist_same(b, MultiDistribution(std::move(expect))))
            return "substitution of " + print_term(n) + " does not commute with the step at " +
                   to_string(r.pos);
        }
        return std::nullopt;
      });
}

PropertyVerdict commutation_suite(const SuiteConfig& cfg) {
  PropertyVerdict total;
  total.property = "commutation";
  for (std::size_t inst = 0; inst < cfg.count; ++inst) {
    std::mt19937_64 rng(split_seed(cfg.seed ^ 0xc0, inst));
    auto n_at_least = [&](std::size_t lo) {
      return std::uniform_int_distribution<std::size_t>(lo, 5)(rng);
    };
    auto bit = [&] { return static_cast<int>(rng() & 1); };
    std::vector<std::string> broken;
    auto expect = [&](bool ok, const char* name) {
      if (!ok) broken.push_back(name);
    };
    auto near = [](double a, double b) { return std::abs(a - b) <= kTolerance; };
    const std::size_t cap = 6;

    {  // new with a unary gate
      std::size_t n = n_at_least(1);
      QuantumState q = random_state(n, rng);
      std::size_t i = distinct_indices(n, 1, rng)[0];
      Matrix a = random_unary(rng);
      expect(new_qubit(apply_unary(q, a, i), cap).approx_equal(apply_unary(new_qubit(q, cap), a, i)),
             "new/unary");
    }
    {  // new with a binary gate
      std::size_t n = n_at_least(2);
      QuantumState q = random_state(n, rng);
      auto ij = distinct_indices(n, 2, rng);
      Matrix b = random_binary(rng);
      expect(new_qubit(apply_binary(q, b, ij[0], ij[1]), cap)
                 .approx_equal(apply_binary(new_qubit(q, cap), b, ij[0], ij[1])),
             "new/binary");
    }
    {  // new with a projection
      std::size_t n = n_at_least(1);
      QuantumState q = random_state(n, rng);
      std::size_t i = distinct_indices(n, 1, rng)[0];
      int b = bit();
      expect(new_qubit(project(q, i, b), cap).approx_equal(project(new_qubit(q, cap), i, b)),
             "new/projection");
    }
    {  // two unary gates
      std::size_t n = n_at_least(2);
      QuantumState q = random_state(n, rng);
      auto ij = distinct_indices(n, 2, rng);
      Matrix a = random_unary(rng), b = random_unary(rng);
      expect(apply_unary(apply_unary(q, b, ij[1]), a, ij[0])
                 .approx_equal(apply_unary(apply_unary(q, a, ij[0]), b, ij[1])),
             "unary/unary");
    }
    {  // unary and binary gates
      std::size_t n = n_at_least(3);
      QuantumState q = random_state(n, rng);
      auto ijk = distinct_indices(n, 3, rng);
      Matrix a = random_unary(rng), b = random_binary(rng);
      expect(apply_unary(apply_binary(q, b, ijk[0], ijk[1]), a, ijk[2])
                 .approx_equal(apply_binary(apply_unary(q, a, ijk[2]), b, ijk[0], ijk[1])),
             "unary/binary");
    }
    {  // two binary gates
      std::size_t n = n_at_least(4);
      QuantumState q = random_state(n, rng);
      auto idx = distinct_indices(n, 4, rng);
      Matrix a = random_binary(rng), b = random_binary(rng);
      expect(apply_binary(apply_binary(q, b, idx[0], idx[1]), a, idx[2], idx[3])
                 .approx_equal(apply_binary(apply_binary(q, a, idx[2], idx[3]), b, idx[0], idx[1])),
             "binary/binary");
    }
    {  // unary gate and projection
      std::size_t n = n_at_least(2);
      QuantumState q = random_state(n, rng);
      auto ij = distinct_indices(n, 2, rng);
      Matrix a = random_unary(rng);
      int b = bit();
      expect(apply_unary(project(q, ij[1], b), a, after_removal(ij[0], ij[1]))
                 .approx_equal(project(apply_unary(q, a, ij[0]), ij[1], b)),
             "unary/projection");
    }
    {  // binary gate and projection
      std::size_t n = n_at_least(3);
      QuantumState q = random_state(n, rng);
      auto idx = distinct_indices(n, 3, rng);
      Matrix g = random_binary(rng);
      int b = bit();
      expect(apply_binary(project(q, idx[2], b), g, after_removal(idx[0], idx[2]),
                          after_removal(idx[1], idx[2]))
                 .approx_equal(project(apply_binary(q, g, idx[0], idx[1]), idx[2], b)),
             "binary/projection");
    }
    {  // two projections
      std::size_t n = n_at_least(2);
      QuantumState q = random_state(n, rng);
      auto ij = distinct_indices(n, 2, rng);
      int b = bit(), c = bit();
      QuantumState left = project(project(q, ij[1], c), after_removal(ij[0], ij[1]), b);
      QuantumState right = project(project(q, ij[0], b), after_removal(ij[1], ij[0]), c);
      expect(left.approx_equal(right), "projection/projection");
    }
    {  // outcome probability after new
      std::size_t n = n_at_least(1);
      QuantumState q = random_state(n, rng);
      std::size_t i = distinct_indices(n, 1, rng)[0];
      int b = bit();
      expect(near(outcome_probability(new_qubit(q, cap), i, b), outcome_probability(q, i, b)),
             "probability/new");
    }
    {  // outcome probability after a unary gate elsewhere
      std::size_t n = n_at_least(2);
      QuantumState q = random_state(n, rng);
      auto ij = distinct_indices(n, 2, rng);
      int b = bit();
      expect(near(outcome_probability(apply_unary(q, random_unary(rng), ij[1]), ij[0], b),
                  outcome_probability(q, ij[0], b)),
             "probability/unary");
    }
    {  // outcome probability after a binary gate elsewhere
      std::size_t n = n_at_least(3);
      QuantumState q = random_state(n, rng);
      auto idx = distinct_indices(n, 3, rng);
      int b = bit();
      expect(near(outcome_probability(apply_binary(q, random_binary(rng), idx[1], idx[2]), idx[0], b),
                  outcome_probability(q, idx[0], b)),
             "probability/binary");
    }
    {  // exchanging two measurements
      std::size_t n = n_at_least(2);
      QuantumState q = random_state(n, rng);
      auto ij = distinct_indices(n, 2, rng);
      std::size_t i = ij[0], j = ij[1];
      int b = bit(), c = bit();
      double lhs = outcome_probability(q, j, c) *
                   outcome_probability(project(q, j, c), after_removal(i, j), b);
      double rhs = outcome_probability(project(q, i, b), after_removal(j, i), c) *
                   outcome_probability(q, i, b);
      expect(near(lhs, rhs), "probability/exchange");
    }

    PropertyVerdict one;
    one.property = total.property;
    one.tried = 1;
    if (broken.empty()) {
      one.passed = 1;
    } else {
      one.failed = 1;
      one.counterexamples.push_back(json{{"instance", inst}, {"identities", broken}});
    }
    total.absorb(one);
  }
  return total;
}

std::vector<PropertyVerdict> invariant_suites(const Engine& engine, const SuiteConfig& cfg) {
  return {norm_suite(engine, cfg),
          mass_suite(engine, cfg),
          validity_suite(engine, cfg),
          nonsurface_state_suite(engine, cfg),
          shape_suite(engine, cfg),
          substitutivity_suite(engine, cfg),
          commutation_suite(cfg)};
}

}  // namespace qlambda
