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

#include "qlambda/syntax.hpp"

#include <stdexcept>

namespace qlambda {

namespace {

// Same node as `t`, with new children (unused slots ignored).
Term rebuild(const Term& t, const Term& c0, const Term& c1 = {}, const Term& c2 = {}) {
  switch (t.kind()) {
    case TermKind::Bang: return Term::bang(c0);
    case TermKind::LinLam: return Term::lin_lam(t.name(), c0);
    case TermKind::BangLam: return Term::bang_lam(t.name(), c0);
    case TermKind::App: return Term::app(c0, c1);
    case TermKind::Meas: return Term::meas(c0, c1, c2);
    default: return t;
  }
}

bool is_binder(const Term& t) { return t.is(TermKind::LinLam) || t.is(TermKind::BangLam); }

void collect_occurrences(const Term& t, Position& pos, bool surface, std::vector<Occurrence>& out) {
  out.push_back({pos, t, surface});
  for (Step s : t.child_steps()) {
    bool child_surface = surface;
    if (s == Step::Boxed || s == Step::Branch0 || s == Step::Branch1) child_surface = false;
    pos.push_back(s);
    collect_occurrences(t.child(s), pos, child_surface, out);
    pos.pop_back();
  }
}

Term replace_rec(const Term& t, const Position& pos, std::size_t at, const Term& repl) {
  if (at == pos.size()) return repl;
  Step s = pos[at];
  Term kid = replace_rec(t.child(s), pos, at + 1, repl);
  switch (t.kind()) {
    case TermKind::App:
      return s == Step::Fun ? Term::app(kid, t.arg()) : Term::app(t.fun(), kid);
    case TermKind::Meas:
      if (s == Step::Subject) return Term::meas(kid, t.branch0(), t.branch1());
      if (s == Step::Branch0) return Term::meas(t.subject(), kid, t.branch1());
      return Term::meas(t.subject(), t.branch0(), kid);
    default:
      return rebuild(t, kid);
  }
}

void count_free(const Term& t, std::map<std::string, std::size_t>& out) {
  if (t.is(TermKind::FreeVar)) ++out[t.name()];
  for (Step s : t.child_steps()) count_free(t.child(s), out);
}

void collect_regs(const Term& t, std::vector<std::uint32_t>& out) {
  if (t.is(TermKind::Reg)) out.push_back(t.index());
  for (Step s : t.child_steps()) collect_regs(t.child(s), out);
}

bool loose(const Term& t, std::uint32_t depth) {
  switch (t.kind()) {
    case TermKind::Var: return t.index() >= depth;
    case TermKind::LinLam:
    case TermKind::BangLam: return loose(t.body(), depth + 1);
    default:
      for (Step s : t.child_steps())
        if (loose(t.child(s), depth)) return true;
      return false;
  }
}

Term shift_rec(const Term& t, int delta, std::uint32_t cutoff) {
  switch (t.kind()) {
    case TermKind::Var:
      if (t.index() < cutoff) return t;
      if (delta < 0 && t.index() < static_cast<std::uint32_t>(-delta))
        throw std::logic_error("shift: negative de Bruijn index");
      return Term::var(static_cast<std::uint32_t>(static_cast<int>(t.index()) + delta), t.name());
    case TermKind::LinLam:
    case TermKind::BangLam:
      return rebuild(t, shift_rec(t.body(), delta, cutoff + 1));
    case TermKind::Bang:
      return rebuild(t, shift_rec(t.body(), delta, cutoff));
    case TermKind::App:
      return rebuild(t, shift_rec(t.fun(), delta, cutoff), shift_rec(t.arg(), delta, cutoff));
    case TermKind::Meas:
      return rebuild(t, shift_rec(t.subject(), delta, cutoff), shift_rec(t.branch0(), delta, cutoff),
                     shift_rec(t.branch1(), delta, cutoff));
    default:
      return t;
  }
}

Term open_rec(const Term& t, const Term& arg, std::uint32_t depth) {
  switch (t.kind()) {
    case TermKind::Var:
      if (t.index() == depth) return shift(arg, static_cast<int>(depth));
      if (t.index() > depth) return Term::var(t.index() - 1, t.name());
      return t;
    case TermKind::LinLam:
    case TermKind::BangLam:
      return rebuild(t, open_rec(t.body(), arg, depth + 1));
    case TermKind::Bang:
      return rebuild(t, open_rec(t.body(), arg, depth));
    case TermKind::App:
      return rebuild(t, open_rec(t.fun(), arg, depth), open_rec(t.arg(), arg, depth));
    case TermKind::Meas:
      return rebuild(t, open_rec(t.subject(), arg, depth), open_rec(t.branch0(), arg, depth),
                     open_rec(t.branch1(), arg, depth));
    default:
      return t;
  }
}

Term subst_rec(const Term& t, const std::string& var, const Term& arg, std::uint32_t depth) {
  switch (t.kind()) {
    case TermKind::FreeVar:
      return t.name() == var ? shift(arg, static_cast<int>(depth)) : t;
    case TermKind::LinLam:
    case TermKind::BangLam:
      return rebuild(t, subst_rec(t.body(), var, arg, depth + 1));
    case TermKind::Bang:
      return rebuild(t, subst_rec(t.body(), var, arg, depth));
    case TermKind::App:
      return rebuild(t, subst_rec(t.fun(), var, arg, depth), subst_rec(t.arg(), var, arg, depth));
    case TermKind::Meas:
      return rebuild(t, subst_rec(t.subject(), var, arg, depth),
                     subst_rec(t.branch0(), var, arg, depth),
                     subst_rec(t.branch1(), var, arg, depth));
    default:
      return t;
  }
}

// Occurrences of the variable bound `depth` binders above `t`.
void binder_uses(const Term& t, std::uint32_t depth, bool surface, Position& pos,
                 std::vector<std::pair<Position, bool>>& out) {
  if (t.is(TermKind::Var)) {
    if (t.index() == depth) out.emplace_back(pos, surface);
    return;
  }
  for (Step s : t.child_steps()) {
    bool child_surface = surface;
    if (s == Step::Boxed || s == Step::Branch0 || s == Step::Branch1) child_surface = false;
    pos.push_back(s);
    binder_uses(t.child(s), is_binder(t) ? depth + 1 : depth, child_surface, pos, out);
    pos.pop_back();
  }
}

}  // namespace

bool is_surface_path(const Position& pos) {
  for (Step s : pos)
    if (s == Step::Boxed || s == Step::Branch0 || s == Step::Branch1) return false;
  return true;
}

std::vector<Occurrence> enumerate_occurrences(const Term& t) {
  std::vector<Occurrence> out;
  Position pos;
  collect_occurrences(t, pos, true, out);
  return out;
}

const Term& subterm_at(const Term& t, const Position& pos) {
  const Term* cur = &t;
  for (Step s : pos) cur = &cur->child(s);
  return *cur;
}

bool is_valid_position(const Term& t, const Position& pos) {
  const Term* cur = &t;
  for (Step s : pos) {
    auto steps = cur->child_steps();
    bool found = false;
    for (Step c : steps) found = found || c == s;
    if (!found) return false;
    cur = &cur->child(s);
  }
  return true;
}

Term replace_at(const Term& t, const Position& pos, const Term& replacement) {
  return replace_rec(t, pos, 0, replacement);
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  for (const auto& [name, count] : free_var_counts(t)) out.insert(name);
  return out;
}

std::map<std::string, std::size_t> free_var_counts(const Term& t) {
  std::map<std::string, std::size_t> out;
  count_free(t, out);
  return out;
}

std::vector<std::uint32_t> register_occurrences(const Term& t) {
  std::vector<std::uint32_t> out;
  collect_regs(t, out);
  return out;
}

std::set<std::uint32_t> registers(const Term& t) {
  auto occ = register_occurrences(t);
  return {occ.begin(), occ.end()};
}

bool has_loose_vars(const Term& t) { return loose(t, 0); }

Term shift(const Term& t, int delta, std::uint32_t cutoff) {
  if (delta == 0) return t;
  return shift_rec(t, delta, cutoff);
}

Term instantiate(const Term& body, const Term& arg) { return open_rec(body, arg, 0); }

Term subst(const Term& body, const std::string& var, const Term& arg) {
  return subst_rec(body, var, arg, 0);
}

Term map_registers(const Term& t, const std::function<std::uint32_t(std::uint32_t)>& f) {
  switch (t.kind()) {
    case TermKind::Reg:
      return Term::reg(f(t.index()));
    case TermKind::Bang:
    case TermKind::LinLam:
    case TermKind::BangLam:
      return rebuild(t, map_registers(t.body(), f));
    case TermKind::App:
      return rebuild(t, map_registers(t.fun(), f), map_registers(t.arg(), f));
    case TermKind::Meas:
      return rebuild(t, map_registers(t.subject(), f), map_registers(t.branch0(), f),
                     map_registers(t.branch1(), f));
    default:
      return t;
  }
}

Term make_pair(const Term& a, const Term& b) {
  return Term::lin_lam("f", Term::app(Term::app(Term::var(0, "f"), shift(a, 1)), shift(b, 1)));
}

std::optional<std::pair<Term, Term>> match_pair(const Term& t) {
  if (!t.is(TermKind::LinLam)) return std::nullopt;
  const Term& b = t.body();
  if (!b.is(TermKind::App) || !b.fun().is(TermKind::App)) return std::nullopt;
  const Term& f = b.fun().fun();
  if (!f.is(TermKind::Var) || f.index() != 0) return std::nullopt;
  const Term& first = b.fun().arg();
  const Term& second = b.arg();
  std::vector<std::pair<Position, bool>> uses;
  Position scratch;
  binder_uses(first, 0, true, scratch, uses);
  binder_uses(second, 0, true, scratch, uses);
  if (!uses.empty()) return std::nullopt;
  return std::make_pair(shift(first, -1, 0), shift(second, -1, 0));
}

Term make_tuple(const std::vector<Term>& items) {
  if (items.size() < 2) throw std::invalid_argument("tuple needs at least two components");
  Term acc = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) acc = make_pair(items[i], acc);
  return acc;
}

Term make_let_pair(const std::string& x, const std::string& y, const Term& bound,
                   const Term& body) {
  return Term::app(bound, Term::lin_lam_named(x, Term::lin_lam_named(y, body)));
}

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::DuplicateRegister: return "duplicate-register";
    case ViolationKind::NonSurfaceRegister: return "non-surface-register";
    case ViolationKind::LinearUnused: return "linear-unused";
    case ViolationKind::LinearDuplicated: return "linear-duplicated";
    case ViolationKind::LinearNonSurface: return "linear-non-surface";
  }
  return "?";
}

ValidityReport validate(const Term& t) {
  ValidityReport report;
  std::map<std::uint32_t, Position> seen;
  for (const Occurrence& occ : enumerate_occurrences(t)) {
    if (occ.sub.is(TermKind::Reg)) {
      std::uint32_t r = occ.sub.index();
      std::string rn = "r" + std::to_string(r);
      if (!occ.is_surface) {
        report.violations.push_back({ViolationKind::NonSurfaceRegister, occ.pos,
                                     "register " + rn + " occurs at a non-surface position"});
      }
      auto [it, fresh] = seen.emplace(r, occ.pos);
      if (!fresh) {
        report.violations.push_back({ViolationKind::DuplicateRegister, occ.pos,
                                     "register " + rn + " occurs more than once (first at " +
                                         to_string(it->second) + ")"});
      }
    } else if (occ.sub.is(TermKind::LinLam)) {
      std::vector<std::pair<Position, bool>> uses;
      Position rel;
      binder_uses(occ.sub.body(), 0, true, rel, uses);
      const std::string& x = occ.sub.name();
      if (uses.empty()) {
        report.violations.push_back(
            {ViolationKind::LinearUnused, occ.pos, "linear variable " + x + " is never used"});
      } else if (uses.size() > 1) {
        report.violations.push_back({ViolationKind::LinearDuplicated, occ.pos,
                                     "linear variable " + x + " is used " +
                                         std::to_string(uses.size()) + " times"});
      }
      for (const auto& [p, surface] : uses) {
        if (surface) continue;
        Position abs = occ.pos;
        abs.push_back(Step::Body);
        abs.insert(abs.end(), p.begin(), p.end());
        report.violations.push_back({ViolationKind::LinearNonSurface, abs,
                                     "linear variable " + x + " occurs at a non-surface position"});
      }
    }
  }
  return report;
}

}  // namespace qlambda
